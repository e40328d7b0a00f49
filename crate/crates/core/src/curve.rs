//! The plane curve `(X^q + X)(Y^q + Y) = c`: membership, rational points,
//! singular points and branches.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::adjoint::{self, HomogeneousPlaneCurve};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, Subfield, TowerField};
use crate::symbolic::{hensel_branch, hensel_lift, MultiPoly, Series};

/// Default cap on the number of subfield elements scanned by
/// [`CurveParams::enumerate_points`].
pub const ENUMERATION_BUDGET: u64 = 1 << 20;

/// One curve instance: the tower, the constant `c` and `gamma = c^{1/q}`.
#[derive(Clone, Debug)]
pub struct CurveParams {
    field: TowerField,
    c: FieldElement,
    gamma: FieldElement,
    affine: MultiPoly,
    homogeneous: MultiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffinePoint {
    pub u: FieldElement,
    pub v: FieldElement,
}

impl AffinePoint {
    pub fn new(u: FieldElement, v: FieldElement) -> Self {
        AffinePoint { u, v }
    }
}

/// Which singular point a branch at infinity is centered at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Center {
    /// `(1 : 0 : 0)`, tangents `Y = d`.
    XInf,
    /// `(0 : 1 : 0)`, tangents `X = d`.
    YInf,
}

/// A branch centered at `X∞` or `Y∞`, identified by its tangent parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InfinitePlace {
    pub center: Center,
    pub tangent: FieldElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPointData {
    pub center: Center,
    pub multiplicity: u32,
    pub tangent_count: usize,
    pub tangents_match_trace_zero_set: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub genus: u64,
    pub singular_points: Vec<SingularPointData>,
    /// `None` when `c` is not in `F_{q^2}`.
    pub affine_count_fq2: Option<usize>,
    pub place_count_infinity: usize,
    pub affine_points_checked: usize,
    pub affine_singular_points: usize,
}

/// Value produced by the lift next to the closed form it is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientComparison {
    pub index: usize,
    pub lifted: FieldElement,
    pub closed_form: FieldElement,
    pub agrees: bool,
}

/// The branch `X = u + t`, `Y = v + v_1 t + ...` at an affine point, with
/// the lifted coefficients checked against their closed forms.
#[derive(Clone, Debug)]
pub struct BranchExpansion {
    pub point: AffinePoint,
    pub x: Series,
    pub y: Series,
    /// `v_i = (-1)^i (v^q+v)/(u^q+u)^i` for `1 <= i <= q-1`.
    pub low_index: Vec<CoefficientComparison>,
    /// `v_q` against `(-1)^q (v^q+v)/(u^q+u)^q - (v_1^q + v_1)`.
    pub index_q: CoefficientComparison,
    /// `v_{q+1}` against `(-1)^{q+1} (v^q+v)/(u^q+u)^{q+1}`.
    pub index_q_plus_1: CoefficientComparison,
    /// `v^q + v + v_q Tr(u) + v_1^q Tr(u) + v_{q-1}`.
    pub order_q_residual: FieldElement,
    /// `v_1 + v_1^q + v_q + v_{q+1} Tr(u)`.
    pub order_q_plus_1_residual: FieldElement,
}

impl CurveParams {
    pub fn new(field: TowerField, c: FieldElement) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidParameter("c must be nonzero".into()));
        }
        let q = field.q() as u32;
        let gamma = field.q_root(c);
        let fv = ["X", "Y"];
        let tr = |i: usize| {
            let mut e = [0u32; 2];
            e[i] = q;
            MultiPoly::monomial(&fv, &e, FieldElement::ONE).add(&MultiPoly::var(&fv, i), &field)
        };
        let affine = tr(0)
            .mul(&tr(1), &field)
            .sub(&MultiPoly::constant(&fv, c), &field);
        let hv = ["X1", "X2", "X3"];
        let htr = |i: usize| {
            let mut a = [0u32; 3];
            a[i] = q;
            let mut b = [0u32; 3];
            b[i] = 1;
            b[2] = q - 1;
            MultiPoly::monomial(&hv, &a, FieldElement::ONE)
                .add(&MultiPoly::monomial(&hv, &b, FieldElement::ONE), &field)
        };
        let homogeneous = htr(0)
            .mul(&htr(1), &field)
            .sub(&MultiPoly::monomial(&hv, &[0, 0, 2 * q], c), &field);
        Ok(CurveParams {
            field,
            c,
            gamma,
            affine,
            homogeneous,
        })
    }

    /// The normalized instance `c = 1`.
    pub fn with_c_one(p: u32, e: u32) -> Result<Self> {
        let field = TowerField::build(p, e)?;
        Self::new(field, FieldElement::ONE)
    }

    /// `c` given by its coefficients in the tower generator.
    pub fn from_c_coeffs(p: u32, e: u32, coeffs: &[i64]) -> Result<Self> {
        let field = TowerField::build(p, e)?;
        let c = field.from_coeffs(coeffs);
        Self::new(field, c)
    }

    pub fn field(&self) -> &TowerField {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn e(&self) -> u32 {
        self.field.e()
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn c(&self) -> FieldElement {
        self.c
    }

    /// `gamma` with `gamma^q = c`.
    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    /// `(X^q + X)(Y^q + Y) - c` in variables `X, Y`.
    pub fn affine_polynomial(&self) -> &MultiPoly {
        &self.affine
    }

    /// `(X1^q + X1 X3^{q-1})(X2^q + X2 X3^{q-1}) - c X3^{2q}`.
    pub fn homogeneous_polynomial(&self) -> &MultiPoly {
        &self.homogeneous
    }

    pub fn c_in(&self, level: Subfield) -> bool {
        self.field.is_in(self.c, level)
    }

    pub fn on_curve(&self, pt: &AffinePoint) -> bool {
        let f = &self.field;
        f.mul(f.trace_q(pt.u), f.trace_q(pt.v)) == self.c
    }

    /// Whether `c^{-1} Tr(u)^2` lies in `F_q`.
    pub fn is_special(&self, pt: &AffinePoint) -> bool {
        let f = &self.field;
        let w = f.div(f.square(f.trace_q(pt.u)), self.c);
        f.is_in(w, Subfield::Fq)
    }

    fn trace_fibers(&self, level: Subfield) -> HashMap<FieldElement, Vec<FieldElement>> {
        let mut fibers: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
        for &v in self.field.subfield_elements(level) {
            fibers.entry(self.field.trace_q(v)).or_default().push(v);
        }
        fibers
    }

    /// All affine points with both coordinates in `level`, in index order.
    pub fn enumerate_points(&self, level: Subfield) -> Result<Vec<AffinePoint>> {
        self.enumerate_points_with_budget(level, ENUMERATION_BUDGET)
    }

    pub fn enumerate_points_with_budget(&self, level: Subfield, budget: u64) -> Result<Vec<AffinePoint>> {
        let count = self.q().pow(level.degree());
        if count > budget {
            return Err(Error::BudgetExceeded {
                what: format!("{} points", level.name()),
                budget,
            });
        }
        let f = &self.field;
        let fibers = self.trace_fibers(level);
        let mut out = Vec::new();
        for &u in f.subfield_elements(level) {
            let tu = f.trace_q(u);
            if tu.is_zero() {
                continue;
            }
            if let Some(vs) = fibers.get(&f.div(self.c, tu)) {
                out.extend(vs.iter().map(|&v| AffinePoint { u, v }));
            }
        }
        Ok(out)
    }

    /// Uniformly random affine points over `level`.
    pub fn sample_points<R: Rng + ?Sized>(&self, level: Subfield, n: usize, rng: &mut R) -> Vec<AffinePoint> {
        let f = &self.field;
        let fibers = self.trace_fibers(level);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let u = f.random_in(level, rng);
            let tu = f.trace_q(u);
            if tu.is_zero() {
                continue;
            }
            if let Some(vs) = fibers.get(&f.div(self.c, tu)) {
                let v = vs[rng.gen_range(0..vs.len())];
                out.push(AffinePoint { u, v });
            }
        }
        out
    }

    /// Random `F_{q^4}` points with `c^{-1} Tr(u)^2 ∈ F_q`, drawn by choosing
    /// the trace first.
    pub fn sample_special_points<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<AffinePoint> {
        let f = &self.field;
        let fibers = self.trace_fibers(Subfield::Fq4);
        // special traces: w with w^2 ∈ c F_q^*
        let targets: Vec<FieldElement> = fibers
            .keys()
            .copied()
            .filter(|&w| !w.is_zero() && f.is_in(f.div(f.square(w), self.c), Subfield::Fq))
            .filter(|&w| fibers.contains_key(&f.div(self.c, w)))
            .collect();
        let mut targets = targets;
        targets.sort_unstable();
        let mut out = Vec::with_capacity(n);
        if targets.is_empty() {
            return out;
        }
        while out.len() < n {
            let w = targets[rng.gen_range(0..targets.len())];
            let us = &fibers[&w];
            let vs = &fibers[&f.div(self.c, w)];
            out.push(AffinePoint {
                u: us[rng.gen_range(0..us.len())],
                v: vs[rng.gen_range(0..vs.len())],
            });
        }
        out
    }

    /// The `2q` branches at infinity, `X∞` first, tangents in index order.
    pub fn infinite_places(&self) -> Vec<InfinitePlace> {
        let tz = self.field.trace_zero_set(Subfield::Fq2);
        [Center::XInf, Center::YInf]
            .into_iter()
            .flat_map(|center| tz.iter().map(move |&tangent| InfinitePlace { center, tangent }))
            .collect()
    }

    pub fn singularity_and_genus(&self) -> Result<CurveReport> {
        let f = &self.field;
        let q = self.q();
        let curve = HomogeneousPlaneCurve::new(self.homogeneous.clone())?;
        let tz = f.trace_zero_set(Subfield::Fq2);
        let mut singular_points = Vec::new();
        for (center, point) in [
            (Center::XInf, [f.one(), f.zero(), f.zero()]),
            (Center::YInf, [f.zero(), f.one(), f.zero()]),
        ] {
            let multiplicity = adjoint::multiplicity_at(&curve, &point, f)?;
            let cone = adjoint::tangent_cone(&curve, &point, f)?;
            // cone is a binary form in the chart coordinates (Z_a, Z_b) where
            // the tangent "Y = d" (resp. "X = d") is Z_a = d Z_b
            let roots: Vec<FieldElement> = f
                .elements()
                .filter(|&d| cone.evaluate(&[d, f.one()], f).is_zero())
                .collect();
            let at_infinity = cone.evaluate(&[f.one(), f.zero()], f).is_zero();
            let tangent_count = roots.len() + usize::from(at_infinity);
            singular_points.push(SingularPointData {
                center,
                multiplicity,
                tangent_count,
                tangents_match_trace_zero_set: roots == tz && !at_infinity,
            });
        }
        let fx = self.affine.derivative(0, f);
        let fy = self.affine.derivative(1, f);
        let pts = self.enumerate_points(Subfield::Fq4)?;
        let affine_singular_points = pts
            .iter()
            .filter(|pt| {
                let at = [pt.u, pt.v];
                fx.evaluate(&at, f).is_zero() && fy.evaluate(&at, f).is_zero()
            })
            .count();
        let affine_count_fq2 = if self.c_in(Subfield::Fq2) {
            Some(self.enumerate_points(Subfield::Fq2)?.len())
        } else {
            None
        };
        // plane-curve genus minus q(q-1)/2 for each ordinary q-fold point
        let d = 2 * q;
        let genus = (d - 1) * (d - 2) / 2 - 2 * (q * (q - 1) / 2);
        Ok(CurveReport {
            genus,
            singular_points,
            affine_count_fq2,
            place_count_infinity: self.infinite_places().len(),
            affine_points_checked: pts.len(),
            affine_singular_points,
        })
    }

    /// Branch at an affine point, with closed-form cross-checks. Requires
    /// precision at least `q + 1`.
    pub fn affine_branch(&self, pt: &AffinePoint, precision: usize) -> Result<BranchExpansion> {
        let f = &self.field;
        let q = self.q() as usize;
        if precision < q + 1 {
            return Err(Error::PrecisionInsufficient(precision));
        }
        let y = hensel_branch(self, pt.u, pt.v, precision)?;
        let x = Series::constant(pt.u, precision).add(&Series::t(precision), f);
        let tu = f.trace_q(pt.u);
        let tv = f.trace_q(pt.v);
        let coef = |i: usize| y.coeff(i).expect("within precision");
        let sign = |i: usize| if i.is_multiple_of(2) { f.one() } else { f.neg(f.one()) };
        let closed = |i: usize| f.mul(sign(i), f.div(tv, f.pow(tu, i as u64)));
        let compare = |index: usize, closed_form: FieldElement| {
            let lifted = coef(index);
            CoefficientComparison {
                index,
                lifted,
                closed_form,
                agrees: lifted == closed_form,
            }
        };
        let low_index = (1..q).map(|i| compare(i, closed(i))).collect();
        let v1 = coef(1);
        let v1_tr = f.trace_q(v1);
        let index_q = compare(q, f.sub(closed(q), v1_tr));
        let index_q_plus_1 = compare(q + 1, closed(q + 1));
        let vq = coef(q);
        let order_q_residual = [
            tv,
            f.mul(vq, tu),
            f.mul(f.frobenius(v1, 1), tu),
            coef(q - 1),
        ]
        .into_iter()
        .fold(f.zero(), |a, b| f.add(a, b));
        let order_q_plus_1_residual = f.add(f.add(v1_tr, vq), f.mul(coef(q + 1), tu));
        Ok(BranchExpansion {
            point: *pt,
            x,
            y,
            low_index,
            index_q,
            index_q_plus_1,
            order_q_residual,
            order_q_plus_1_residual,
        })
    }

    /// Branch at infinity as a projective triple `(X1, X2, X3)`: in the chart
    /// `X1 = 1` for `X∞` (`X2 = t W(t)`, `X3 = t`, `W(0) = d`) and with the
    /// first two coordinates exchanged for `Y∞`.
    pub fn infinite_branch(&self, place: &InfinitePlace, precision: usize) -> Result<[Series; 3]> {
        let f = &self.field;
        if !f.trace_q(place.tangent).is_zero() {
            return Err(Error::TraceNotZero);
        }
        let q = self.q() as u32;
        let vars = ["T", "W"];
        let t = MultiPoly::var(&vars, 0);
        let tw = t.mul(&MultiPoly::var(&vars, 1), f);
        let one = MultiPoly::constant(&vars, f.one());
        // F_h(1, T W, T) = T^q G(T, W)
        let h = self.homogeneous.compose(&[one, tw, t], f);
        let g = h
            .div_monomial(&[q, 0])
            .ok_or_else(|| Error::Divisibility("chart polynomial not divisible by T^q".into()))?;
        let w = hensel_lift(&g, place.tangent, precision, f)?;
        let mut shifted = vec![f.zero()];
        shifted.extend_from_slice(&w.coeffs()[..precision]);
        let x_near = Series::new(shifted);
        let unit = Series::one(precision);
        let x3 = Series::t(precision);
        Ok(match place.center {
            Center::XInf => [unit, x_near, x3],
            Center::YInf => [x_near, unit, x3],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::substitute_branch;

    fn omega(f: &TowerField) -> FieldElement {
        f.subfield_elements(Subfield::Fq2)
            .iter()
            .copied()
            .find(|&w| f.square(w) == f.add(w, f.one()))
            .unwrap()
    }

    #[test]
    fn membership() {
        let c3 = CurveParams::with_c_one(3, 1).unwrap();
        let f = c3.field().clone();
        assert!(c3.on_curve(&AffinePoint::new(f.one(), f.one())));
        for y in f.elements().step_by(5) {
            assert!(!c3.on_curve(&AffinePoint::new(f.zero(), y)));
        }
        let c2 = CurveParams::with_c_one(2, 1).unwrap();
        let f2 = c2.field().clone();
        let w = omega(&f2);
        assert!(c2.on_curve(&AffinePoint::new(w, w)));
    }

    #[test]
    fn zero_c_rejected() {
        let f = TowerField::build(3, 1).unwrap();
        assert!(CurveParams::new(f, FieldElement::ZERO).is_err());
    }

    #[test]
    fn rational_points_q2() {
        let c2 = CurveParams::with_c_one(2, 1).unwrap();
        let f = c2.field().clone();
        let w = omega(&f);
        let w2 = f.square(w);
        let mut expect = vec![
            AffinePoint::new(w, w),
            AffinePoint::new(w, w2),
            AffinePoint::new(w2, w),
            AffinePoint::new(w2, w2),
        ];
        expect.sort();
        let mut got = c2.enumerate_points(Subfield::Fq2).unwrap();
        got.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn rational_point_counts_by_brute_force() {
        for (p, e) in [(3, 1), (5, 1), (2, 2)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            let f = c.field();
            let sub = f.subfield_elements(Subfield::Fq2);
            let brute = sub
                .iter()
                .flat_map(|&u| sub.iter().map(move |&v| AffinePoint::new(u, v)))
                .filter(|pt| c.on_curve(pt))
                .count();
            let q = c.q() as usize;
            assert_eq!(brute, (q - 1) * q * q);
            assert_eq!(c.enumerate_points(Subfield::Fq2).unwrap().len(), brute);
        }
    }

    #[test]
    fn enumeration_budget() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        assert!(matches!(
            c.enumerate_points_with_budget(Subfield::Fq4, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn genus_and_singularities() {
        for (p, e, g) in [(2, 1, 1), (3, 1, 4), (5, 1, 16)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            let r = c.singularity_and_genus().unwrap();
            assert_eq!(r.genus, g);
            for s in &r.singular_points {
                assert_eq!(s.multiplicity as u64, c.q());
                assert_eq!(s.tangent_count as u64, c.q());
                assert!(s.tangents_match_trace_zero_set);
            }
            assert_eq!(r.affine_singular_points, 0);
            assert_eq!(r.place_count_infinity as u64, 2 * c.q());
        }
    }

    #[test]
    fn unit_point_branch_q3() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        let b = c.affine_branch(&AffinePoint::new(f.one(), f.one()), 4).unwrap();
        let got: Vec<_> = (1..=4).map(|i| b.y.coeff(i).unwrap()).collect();
        let expect: Vec<_> = [2, 2, 2, 0].iter().map(|&x| f.from_int(x)).collect();
        assert_eq!(got, expect);
        assert!(b.low_index.iter().all(|c| c.agrees));
        assert_eq!(b.low_index[0].lifted, f.from_int(2));
        assert!(b.order_q_residual.is_zero());
        assert!(b.order_q_plus_1_residual.is_zero());
        // v_3 lifts to 2 while the closed form for index q gives 1
        assert_eq!(b.index_q.lifted, f.from_int(2));
        assert_eq!(b.index_q.closed_form, f.from_int(1));
        assert!(!b.index_q.agrees);
    }

    #[test]
    fn infinite_branch_leading_terms() {
        for (p, e) in [(3, 1), (5, 1), (2, 2)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            let f = c.field().clone();
            let q = c.q() as usize;
            let n = 3 * q;
            for place in c.infinite_places() {
                let br = c.infinite_branch(&place, n).unwrap();
                let near = match place.center {
                    Center::XInf => &br[1],
                    Center::YInf => &br[0],
                };
                assert_eq!(near.coeff(1), Some(place.tangent));
                assert_eq!(near.coeff(q + 1), Some(c.c()));
                assert_eq!(near.coeff(2 * q), Some(f.neg(c.c())));
                let r = substitute_branch(c.homogeneous_polynomial(), &br, &f).unwrap();
                assert_eq!(r.valuation(), None);
            }
        }
    }

    #[test]
    fn infinite_branch_rejects_bad_tangent() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let place = InfinitePlace {
            center: Center::XInf,
            tangent: c.field().one(),
        };
        assert_eq!(c.infinite_branch(&place, 9).unwrap_err(), Error::TraceNotZero);
    }

    #[test]
    fn special_sampler_produces_special_points() {
        use rand::SeedableRng;
        let c = CurveParams::with_c_one(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let pts = c.sample_special_points(50, &mut rng);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| c.on_curve(p) && c.is_special(p)));
        let generic = c.sample_points(Subfield::Fq4, 50, &mut rng);
        assert!(generic.iter().all(|p| c.on_curve(p)));
    }
}
