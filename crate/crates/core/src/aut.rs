//! Automorphisms `φ_{α,β,λ}(X, Y) = (λX + α, λ^{-1}Y + β)` and `ξ(X, Y) = (Y, X)`,
//! the group they generate, and its action on the rational places.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::curve::{AffinePoint, Center, CurveParams, InfinitePlace};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, QuadExtDescriptor, Subfield, TowerField};
use crate::symbolic::MultiPoly;

/// Largest `q` for which [`closure_and_structure`] runs by default.
pub const CLOSURE_MAX_Q: u64 = 16;

/// `ξ^swap ∘ φ_{α,β,λ}`. Fields are public so probes with invalid
/// parameters can be built; [`make_aut`] validates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PlaneAut {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub lambda: FieldElement,
    pub swap: bool,
}

/// `out_i = a_i * in_{i ^ swap} + b_i`.
struct AffineForm {
    swap: bool,
    a: [FieldElement; 2],
    b: [FieldElement; 2],
}

impl PlaneAut {
    pub fn identity() -> Self {
        PlaneAut {
            alpha: FieldElement::ZERO,
            beta: FieldElement::ZERO,
            lambda: FieldElement::ONE,
            swap: false,
        }
    }

    pub fn xi() -> Self {
        PlaneAut {
            swap: true,
            ..Self::identity()
        }
    }

    fn form(&self, fld: &TowerField) -> AffineForm {
        let li = fld.inv(self.lambda).expect("lambda nonzero");
        let (a, b) = ([self.lambda, li], [self.alpha, self.beta]);
        if self.swap {
            AffineForm {
                swap: true,
                a: [a[1], a[0]],
                b: [b[1], b[0]],
            }
        } else {
            AffineForm { swap: false, a, b }
        }
    }

    fn from_form(f: &AffineForm) -> Self {
        if f.swap {
            PlaneAut {
                alpha: f.b[1],
                beta: f.b[0],
                lambda: f.a[1],
                swap: true,
            }
        } else {
            PlaneAut {
                alpha: f.b[0],
                beta: f.b[1],
                lambda: f.a[0],
                swap: false,
            }
        }
    }

    pub fn apply(&self, pt: &AffinePoint, fld: &TowerField) -> AffinePoint {
        let f = self.form(fld);
        let input = [pt.u, pt.v];
        let out = |i: usize| fld.add(fld.mul(f.a[i], input[i ^ usize::from(f.swap)]), f.b[i]);
        AffinePoint::new(out(0), out(1))
    }

    /// Tangent transport: the `X∞` branch with tangent `Y = d` goes to
    /// `Y = λ^{-1}d + β`, the `Y∞` branch with tangent `X = d` to
    /// `X = λd + α`; `ξ` then exchanges the centers.
    pub fn apply_place(&self, pl: &InfinitePlace, fld: &TowerField) -> InfinitePlace {
        let li = fld.inv(self.lambda).expect("lambda nonzero");
        let (center, tangent) = match pl.center {
            Center::XInf => (Center::XInf, fld.add(fld.mul(li, pl.tangent), self.beta)),
            Center::YInf => (Center::YInf, fld.add(fld.mul(self.lambda, pl.tangent), self.alpha)),
        };
        let center = match (center, self.swap) {
            (c, false) => c,
            (Center::XInf, true) => Center::YInf,
            (Center::YInf, true) => Center::XInf,
        };
        InfinitePlace { center, tangent }
    }

    pub fn apply_to(&self, place: &Place, fld: &TowerField) -> Place {
        match place {
            Place::Affine(p) => Place::Affine(self.apply(p, fld)),
            Place::Infinite(p) => Place::Infinite(self.apply_place(p, fld)),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PlaneAut, fld: &TowerField) -> PlaneAut {
        let (f2, f1) = (self.form(fld), first.form(fld));
        let s2 = usize::from(f2.swap);
        let mut a = [FieldElement::ZERO; 2];
        let mut b = [FieldElement::ZERO; 2];
        for i in 0..2 {
            let j = i ^ s2;
            a[i] = fld.mul(f2.a[i], f1.a[j]);
            b[i] = fld.add(fld.mul(f2.a[i], f1.b[j]), f2.b[i]);
        }
        Self::from_form(&AffineForm {
            swap: f1.swap ^ f2.swap,
            a,
            b,
        })
    }

    pub fn inverse(&self, fld: &TowerField) -> PlaneAut {
        let f = self.form(fld);
        let s = usize::from(f.swap);
        // in_k = (out_i - b_i) / a_i with k = i ^ s
        let mut a = [FieldElement::ZERO; 2];
        let mut b = [FieldElement::ZERO; 2];
        for i in 0..2 {
            let ai = fld.inv(f.a[i]).expect("nonzero scale");
            a[i ^ s] = ai;
            b[i ^ s] = fld.neg(fld.mul(ai, f.b[i]));
        }
        Self::from_form(&AffineForm { swap: f.swap, a, b })
    }

    pub fn order(&self, fld: &TowerField) -> usize {
        let mut g = *self;
        let mut n = 1;
        while g != Self::identity() {
            g = g.compose(self, fld);
            n += 1;
        }
        n
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// A rational place: an affine point or a branch at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Affine(AffinePoint),
    Infinite(InfinitePlace),
}

pub fn make_aut(
    params: &CurveParams,
    alpha: FieldElement,
    beta: FieldElement,
    lambda: FieldElement,
    swap: bool,
) -> Result<PlaneAut> {
    let f = params.field();
    if !f.trace_q(alpha).is_zero() || !f.trace_q(beta).is_zero() {
        return Err(Error::InvalidAutomorphism("Tr(alpha) and Tr(beta) must vanish".into()));
    }
    if lambda.is_zero() || f.pow(lambda, params.q() - 1) != f.one() {
        return Err(Error::InvalidAutomorphism("lambda must satisfy lambda^(q-1) = 1".into()));
    }
    Ok(PlaneAut {
        alpha,
        beta,
        lambda,
        swap,
    })
}

/// Whether `F(g(X, Y)) = F(X, Y)` as polynomials.
pub fn symbolic_invariance(params: &CurveParams, g: &PlaneAut) -> bool {
    let f = params.field();
    let Some(li) = f.inv(g.lambda) else {
        return false;
    };
    let vars = ["X", "Y"];
    let lin = |i: usize, a: FieldElement, b: FieldElement| {
        MultiPoly::var(&vars, i)
            .scale(a, f)
            .add(&MultiPoly::constant(&vars, b), f)
    };
    let (x, y) = (lin(0, g.lambda, g.alpha), lin(1, li, g.beta));
    let images = if g.swap { [y, x] } else { [x, y] };
    let fp = params.affine_polynomial();
    fp.compose(&images, f) == *fp
}

/// Generators: `φ_{α,0,1}` and `φ_{0,β,1}` over the trace-zero set, `φ_{0,0,λ₀}`
/// for a generator `λ₀` of `F_q^*`, and `ξ`.
pub fn generators(params: &CurveParams) -> Vec<PlaneAut> {
    let f = params.field();
    let id = PlaneAut::identity();
    let tz: Vec<FieldElement> = f
        .trace_zero_set(Subfield::Fq2)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let mut gens: Vec<PlaneAut> = tz.iter().map(|&alpha| PlaneAut { alpha, ..id }).collect();
    gens.extend(tz.iter().map(|&beta| PlaneAut { beta, ..id }));
    gens.push(PlaneAut {
        lambda: f.root_of_unity_generator(),
        ..id
    });
    gens.push(PlaneAut::xi());
    gens
}

/// Breadth-first closure of `gens` under left multiplication, in discovery
/// order.
pub fn closure(gens: &[PlaneAut], fld: &TowerField, limit: usize) -> Result<Vec<PlaneAut>> {
    let mut seen: HashSet<PlaneAut> = HashSet::from([PlaneAut::identity()]);
    let mut out = vec![PlaneAut::identity()];
    let mut queue = VecDeque::from([PlaneAut::identity()]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g, fld);
            if seen.insert(h) {
                if out.len() >= limit {
                    return Err(Error::BudgetExceeded {
                        what: "group closure".into(),
                        budget: limit as u64,
                    });
                }
                out.push(h);
                queue.push_back(h);
            }
        }
    }
    Ok(out)
}

/// The full group `Δ⋊D_{q-1}`, for `q` up to [`CLOSURE_MAX_Q`].
pub fn group_elements(params: &CurveParams) -> Result<Vec<PlaneAut>> {
    let q = params.q();
    if q > CLOSURE_MAX_Q {
        return Err(Error::BudgetExceeded {
            what: "group closure".into(),
            budget: CLOSURE_MAX_Q,
        });
    }
    let limit = (2 * q * q * (q - 1)).max(2) as usize * 2;
    closure(&generators(params), params.field(), limit)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub order: usize,
    pub expected_order: u64,
    pub delta_order: usize,
    pub delta1_order: usize,
    pub delta2_order: usize,
    pub c_order: usize,
    pub c_cyclic: bool,
    pub dihedral_order: usize,
    /// `ξ^2 = 1` and `ξρξ = ρ^{-1}` for the rotation `ρ`.
    pub dihedral_relations: bool,
    pub delta_normal: bool,
    pub delta_elementary_abelian: bool,
    /// `Δ ∩ D = 1` and `Δ D = G`.
    pub semidirect_verified: bool,
    pub maximality: &'static str,
}

impl GroupReport {
    pub fn ok(&self, q: u64) -> bool {
        self.order as u64 == self.expected_order
            && self.delta_order as u64 == q * q
            && self.delta1_order as u64 == q
            && self.delta2_order as u64 == q
            && self.c_order as u64 == q - 1
            && self.c_cyclic
            && self.dihedral_order as u64 == 2 * (q - 1)
            && self.dihedral_relations
            && self.delta_normal
            && self.delta_elementary_abelian
            && self.semidirect_verified
    }
}

pub fn closure_and_structure(params: &CurveParams) -> Result<GroupReport> {
    let f = params.field();
    let q = params.q();
    let p = params.p() as usize;
    let g = group_elements(params)?;
    let one = f.one();
    let delta: Vec<PlaneAut> = g.iter().copied().filter(|h| !h.swap && h.lambda == one).collect();
    let delta_set: HashSet<PlaneAut> = delta.iter().copied().collect();
    let delta1 = delta.iter().filter(|h| h.beta.is_zero()).count();
    let delta2 = delta.iter().filter(|h| h.alpha.is_zero()).count();
    let c_group: Vec<PlaneAut> = g
        .iter()
        .copied()
        .filter(|h| !h.swap && h.alpha.is_zero() && h.beta.is_zero())
        .collect();
    let c_cyclic = c_group.iter().any(|h| h.order(f) == c_group.len());
    let rho = PlaneAut {
        lambda: f.root_of_unity_generator(),
        ..PlaneAut::identity()
    };
    let xi = PlaneAut::xi();
    let dihedral = closure(&[rho, xi], f, g.len())?;
    let dihedral_relations =
        xi.compose(&xi, f).is_identity() && xi.compose(&rho, f).compose(&xi, f) == rho.inverse(f);
    let delta_elementary_abelian = delta.iter().all(|a| {
        a.order(f) <= p
            && (a.is_identity() || a.order(f) == p)
            && delta.iter().all(|b| a.compose(b, f) == b.compose(a, f))
    });
    let delta_normal = g.iter().all(|x| {
        let xi_inv = x.inverse(f);
        delta.iter().all(|d| delta_set.contains(&x.compose(d, f).compose(&xi_inv, f)))
    });
    let trivial_meet = dihedral.iter().filter(|d| delta_set.contains(d)).count() == 1;
    let products: HashSet<PlaneAut> = delta
        .iter()
        .flat_map(|a| dihedral.iter().map(move |b| a.compose(b, f)))
        .collect();
    let g_set: HashSet<PlaneAut> = g.iter().copied().collect();
    let semidirect_verified = trivial_meet && products == g_set && delta.len() * dihedral.len() == g.len();
    Ok(GroupReport {
        order: g.len(),
        expected_order: 2 * q * q * (q - 1),
        delta_order: delta.len(),
        delta1_order: delta1,
        delta2_order: delta2,
        c_order: c_group.len(),
        c_cyclic,
        dihedral_order: dihedral.len(),
        dihedral_relations,
        delta_normal,
        delta_elementary_abelian,
        semidirect_verified,
        maximality: "subgroup verified; maximality taken from the paper",
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    /// Orbit sizes on the `F_{q^2}` places, ascending.
    pub orbit_sizes: Vec<usize>,
    pub sigma_size: usize,
    pub sigma_subgroup_order: usize,
    pub sigma_sharply_transitive: bool,
    pub pairs_checked: usize,
    pub xi_fixed_points: Vec<AffinePoint>,
    /// Fixed points of `ξ` are exactly `(a, a)` with `Tr(a)^2 = c`.
    pub xi_fixed_points_match: bool,
    /// Distinct group elements induce distinct permutations of the places.
    pub faithful: bool,
}

/// All `F_{q^2}` places: affine points then the `2q` places at infinity.
pub fn rational_places(params: &CurveParams) -> Result<Vec<Place>> {
    let mut out: Vec<Place> = params
        .enumerate_points(Subfield::Fq2)?
        .into_iter()
        .map(Place::Affine)
        .collect();
    out.extend(params.infinite_places().into_iter().map(Place::Infinite));
    Ok(out)
}

/// Checks orbits, sharp transitivity of `Δ⋊C` on the affine points `Σ`
/// (from each of `bases`), fixed points of `ξ`, and faithfulness.
pub fn orbit_analysis(params: &CurveParams, group: &[PlaneAut], bases: &[AffinePoint]) -> Result<OrbitReport> {
    if !params.c_in(Subfield::Fq) {
        return Err(Error::ConstantNotInSubfield("F_q"));
    }
    let f = params.field();
    let places = rational_places(params)?;
    let index: HashMap<Place, usize> = places.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let gens = generators(params);

    let mut orbit_of = vec![usize::MAX; places.len()];
    let mut orbit_sizes = Vec::new();
    for start in 0..places.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbit_sizes.len();
        orbit_of[start] = id;
        let mut size = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let j = *index
                    .get(&g.apply_to(&places[i], f))
                    .ok_or_else(|| Error::Verification("place image off the curve".into()))?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        orbit_sizes.push(size);
    }
    orbit_sizes.sort_unstable();

    let sigma: Vec<AffinePoint> = places
        .iter()
        .filter_map(|p| match p {
            Place::Affine(a) => Some(*a),
            Place::Infinite(_) => None,
        })
        .collect();
    let sigma_set: HashSet<AffinePoint> = sigma.iter().copied().collect();
    let h: Vec<&PlaneAut> = group.iter().filter(|g| !g.swap).collect();
    let mut sharp = h.len() == sigma.len();
    let mut pairs_checked = 0;
    for base in bases {
        let images: HashSet<AffinePoint> = h.iter().map(|g| g.apply(base, f)).collect();
        sharp &= images.len() == h.len() && images == sigma_set;
        pairs_checked += sigma.len();
    }

    let xi = PlaneAut::xi();
    let xi_fixed_points: Vec<AffinePoint> = sigma.iter().copied().filter(|p| xi.apply(p, f) == *p).collect();
    let expected_fixed: Vec<AffinePoint> = sigma
        .iter()
        .copied()
        .filter(|p| p.u == p.v && f.square(f.trace_q(p.u)) == params.c())
        .collect();

    let perms: HashSet<Vec<usize>> = group
        .iter()
        .map(|g| places.iter().map(|p| index[&g.apply_to(p, f)]).collect())
        .collect();

    Ok(OrbitReport {
        orbit_sizes,
        sigma_size: sigma.len(),
        sigma_subgroup_order: h.len(),
        sigma_sharply_transitive: sharp && !bases.is_empty(),
        pairs_checked,
        xi_fixed_points_match: xi_fixed_points == expected_fixed,
        xi_fixed_points,
        faithful: perms.len() == group.len(),
    })
}

/// Coordinates of an `F_{q^2}` point in the basis `{1, i}`:
/// `u = a1 + i b1`, `v = a2 + i b2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalPointForm {
    pub a1: FieldElement,
    pub b1: FieldElement,
    pub a2: FieldElement,
    pub b2: FieldElement,
    pub quad: QuadExtDescriptor,
    /// Odd `p`: `a2 = c / (4 a1)`; `p = 2`: `b2 = c / b1`.
    pub constraint_holds: bool,
}

pub fn rational_point_form(params: &CurveParams, pt: &AffinePoint, quad: &QuadExtDescriptor) -> Result<RationalPointForm> {
    let f = params.field();
    if !params.on_curve(pt) {
        return Err(Error::NotOnCurve);
    }
    if !params.c_in(Subfield::Fq) {
        return Err(Error::ConstantNotInSubfield("F_q"));
    }
    let (a1, b1) = quad.decompose(f, pt.u).ok_or(Error::NotRational("u"))?;
    let (a2, b2) = quad.decompose(f, pt.v).ok_or(Error::NotRational("v"))?;
    let constraint_holds = if f.p() == 2 {
        !b1.is_zero() && b2 == f.div(params.c(), b1)
    } else {
        !a1.is_zero() && a2 == f.div(params.c(), f.mul(f.from_int(4), a1))
    };
    Ok(RationalPointForm {
        a1,
        b1,
        a2,
        b2,
        quad: *quad,
        constraint_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PglSearchReport {
    pub candidates: usize,
    pub automorphisms_found: usize,
    pub all_in_group: bool,
    pub scope: &'static str,
}

/// Largest `q` for which [`pgl_search`] runs.
pub const PGL_SEARCH_MAX_Q: u64 = 4;

/// Searches the projectivities over `F_{q^2}` that fix or swap `X∞`, `Y∞`
/// (hence preserve the line at infinity) for those preserving the curve.
/// Any automorphism permutes the two singular points, so this family
/// contains all of them.
pub fn pgl_search(params: &CurveParams, group: &[PlaneAut]) -> Result<PglSearchReport> {
    let q = params.q();
    if q > PGL_SEARCH_MAX_Q {
        return Err(Error::BudgetExceeded {
            what: "projectivity search".into(),
            budget: PGL_SEARCH_MAX_Q,
        });
    }
    let f = params.field();
    let fq2 = f.subfield_elements(Subfield::Fq2);
    let units: Vec<FieldElement> = fq2.iter().copied().filter(|x| !x.is_zero()).collect();
    let sigma = params.enumerate_points(Subfield::Fq2)?;
    let group_set: HashSet<PlaneAut> = group.iter().copied().collect();
    let fp = params.affine_polynomial();
    let vars = ["X", "Y"];
    let mut candidates = 0;
    let mut found = 0;
    let mut all_in_group = true;
    for swap in [false, true] {
        for &a in &units {
            for &b in &units {
                for &x in fq2 {
                    for &y in fq2 {
                        candidates += 1;
                        // (X, Y) -> (a X + x, b Y + y), then swap
                        let map = |p: &AffinePoint| {
                            let (s, t) = (f.add(f.mul(a, p.u), x), f.add(f.mul(b, p.v), y));
                            if swap {
                                AffinePoint::new(t, s)
                            } else {
                                AffinePoint::new(s, t)
                            }
                        };
                        if !sigma.iter().all(|p| params.on_curve(&map(p))) {
                            continue;
                        }
                        let lx = MultiPoly::var(&vars, 0).scale(a, f).add(&MultiPoly::constant(&vars, x), f);
                        let ly = MultiPoly::var(&vars, 1).scale(b, f).add(&MultiPoly::constant(&vars, y), f);
                        let images = if swap { [ly, lx] } else { [lx, ly] };
                        let image = fp.compose(&images, f);
                        let mono = [params.q() as u32, params.q() as u32];
                        let mu = f.div(image.coeff(&mono), fp.coeff(&mono));
                        if image != fp.scale(mu, f) {
                            continue;
                        }
                        found += 1;
                        let aut = PlaneAut {
                            alpha: x,
                            beta: y,
                            lambda: a,
                            swap,
                        };
                        all_in_group &= f.mul(a, b) == f.one() && group_set.contains(&aut);
                    }
                }
            }
        }
    }
    Ok(PglSearchReport {
        candidates,
        automorphisms_found: found,
        all_in_group: all_in_group && found == group.len(),
        scope: "projectivities over F_{q^2} preserving {X∞, Y∞}",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega(f: &TowerField) -> FieldElement {
        f.subfield_elements(Subfield::Fq2)
            .iter()
            .copied()
            .find(|&w| f.square(w) == f.add(w, f.one()))
            .unwrap()
    }

    #[test]
    fn basic_elements() {
        let c = CurveParams::with_c_one(2, 1).unwrap();
        let f = c.field().clone();
        let w = omega(&f);
        let id = make_aut(&c, f.zero(), f.zero(), f.one(), false).unwrap();
        assert!(id.is_identity());
        let xi = make_aut(&c, f.zero(), f.zero(), f.one(), true).unwrap();
        let p = AffinePoint::new(w, f.square(w));
        assert_eq!(xi.apply(&p, &f), AffinePoint::new(f.square(w), w));
        assert!(make_aut(&c, w, f.zero(), f.one(), false).is_err());
    }

    #[test]
    fn conjugating_by_xi_inverts_lambda() {
        let c = CurveParams::with_c_one(5, 1).unwrap();
        let f = c.field().clone();
        let l = f.root_of_unity_generator();
        let phi = make_aut(&c, f.zero(), f.zero(), l, false).unwrap();
        let xi = PlaneAut::xi();
        let conj = xi.compose(&phi, &f).compose(&xi, &f);
        assert_eq!(conj, make_aut(&c, f.zero(), f.zero(), f.inv(l).unwrap(), false).unwrap());
    }

    #[test]
    fn invariance_and_probe() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        assert!(symbolic_invariance(&c, &PlaneAut::xi()));
        let tz = f.trace_zero_set(Subfield::Fq2);
        let g = make_aut(&c, tz[1], tz[2], f.from_int(2), true).unwrap();
        assert!(symbolic_invariance(&c, &g));
        let probe = PlaneAut {
            alpha: f.one(),
            ..PlaneAut::identity()
        };
        assert!(!symbolic_invariance(&c, &probe));
    }

    #[test]
    fn group_orders() {
        for (p, e, n) in [(2, 1, 8), (3, 1, 36), (2, 2, 96)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            let r = closure_and_structure(&c).unwrap();
            assert_eq!(r.order, n);
            assert!(r.ok(c.q()), "{r:?}");
        }
    }

    #[test]
    fn orbits_q3() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        let g = group_elements(&c).unwrap();
        let sigma = c.enumerate_points(Subfield::Fq2).unwrap();
        let r = orbit_analysis(&c, &g, &sigma).unwrap();
        assert_eq!(r.orbit_sizes, vec![6, 18]);
        assert_eq!(r.sigma_subgroup_order, 18);
        assert!(r.sigma_sharply_transitive && r.faithful && r.xi_fixed_points_match);
        assert_eq!(r.pairs_checked, 18 * 18);
        assert!(r.xi_fixed_points.contains(&AffinePoint::new(f.one(), f.one())));
    }

    #[test]
    fn rational_forms() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        let quad = f.quad_ext_descriptor();
        let pts = c.enumerate_points(Subfield::Fq2).unwrap();
        let with_u1: Vec<_> = pts.iter().filter(|p| p.u == f.one()).collect();
        assert_eq!(with_u1.len(), 3);
        for p in with_u1 {
            let r = rational_point_form(&c, p, &quad).unwrap();
            assert!(r.constraint_holds);
            assert_eq!((r.a1, r.a2), (f.one(), f.one()));
        }
        assert!(pts.iter().all(|p| rational_point_form(&c, p, &quad).unwrap().constraint_holds));

        let c2 = CurveParams::with_c_one(2, 1).unwrap();
        let f2 = c2.field().clone();
        let quad2 = f2.quad_ext_descriptor();
        let w = omega(&f2);
        for p in c2.enumerate_points(Subfield::Fq2).unwrap() {
            let r = rational_point_form(&c2, &p, &quad2).unwrap();
            assert!(r.constraint_holds);
            if p.u == w {
                assert_eq!(r.b2, f2.one());
            }
        }
    }

    #[test]
    fn projectivity_search_matches_group() {
        for (p, e) in [(2, 1), (3, 1)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            let g = group_elements(&c).unwrap();
            let r = pgl_search(&c, &g).unwrap();
            assert_eq!(r.automorphisms_found, g.len());
            assert!(r.all_in_group);
        }
    }

    proptest! {
        #[test]
        fn composition_agrees_with_action(i in 0usize..36, j in 0usize..36, k in 0usize..18) {
            let c = CurveParams::with_c_one(3, 1).unwrap();
            let f = c.field().clone();
            let g = group_elements(&c).unwrap();
            let pts = c.enumerate_points(Subfield::Fq2).unwrap();
            let (a, b, pt) = (g[i], g[j], pts[k]);
            prop_assert_eq!(a.compose(&b, &f).apply(&pt, &f), a.apply(&b.apply(&pt, &f), &f));
            prop_assert!(a.compose(&a.inverse(&f), &f).is_identity());
            let pl = c.infinite_places()[k % 6];
            prop_assert_eq!(
                a.compose(&b, &f).apply_place(&pl, &f),
                a.apply_place(&b.apply_place(&pl, &f), &f)
            );
        }
    }
}
