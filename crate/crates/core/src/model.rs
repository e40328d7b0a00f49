//! The nonsingular model in PG(3) cut out by the degree-`q` adjoints:
//! the quadratic morphism `tau`, its branches, order sequences and the
//! projectivities induced by plane automorphisms.

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::aut::PlaneAut;
use crate::curve::{AffinePoint, Center, CurveParams, InfinitePlace};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, Subfield, TowerField};
use crate::linalg;
use crate::symbolic::{pivot_order_sequence, Series};

/// A point of PG(3), normalized so the last nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpacePoint {
    coords: [FieldElement; 4],
}

impl SpacePoint {
    pub fn new(coords: [FieldElement; 4], fld: &TowerField) -> Result<Self> {
        let last = coords
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidParameter("all-zero projective point".into()))?;
        let inv = fld.inv(coords[last]).expect("nonzero");
        Ok(SpacePoint {
            coords: coords.map(|c| fld.mul(c, inv)),
        })
    }

    pub fn coords(&self) -> [FieldElement; 4] {
        self.coords
    }

    /// `Z∞ = (0, 0, 1, 0)`.
    pub fn z_infinity() -> Self {
        SpacePoint {
            coords: [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO],
        }
    }

    pub fn format(&self, fld: &TowerField) -> String {
        let parts: Vec<String> = self.coords.iter().map(|&c| fld.format(c)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Image of a plane branch: four coordinate series and their center.
#[derive(Clone, Debug)]
pub struct SpaceBranch {
    pub series: [Series; 4],
    pub center: SpacePoint,
}

/// `(X1, X2, X3) -> (X1 X3, X2 X3, X1 X2, X3^2)` on an affine point.
pub fn tau_point(params: &CurveParams, pt: &AffinePoint) -> Result<SpacePoint> {
    let f = params.field();
    if !params.on_curve(pt) {
        return Err(Error::NotOnCurve);
    }
    SpacePoint::new([pt.u, pt.v, f.mul(pt.u, pt.v), f.one()], f)
}

/// Center of the image of a branch at infinity: `P_d = (1, 0, d, 0)` for
/// `X∞` and `Q_d = (0, 1, d, 0)` for `Y∞`.
pub fn tau_place(place: &InfinitePlace, fld: &TowerField) -> SpacePoint {
    let (z, o) = (FieldElement::ZERO, FieldElement::ONE);
    let coords = match place.center {
        Center::XInf => [o, z, place.tangent, z],
        Center::YInf => [z, o, place.tangent, z],
    };
    SpacePoint::new(coords, fld).expect("nonzero")
}

/// Series image of a plane branch triple, with the common power of `t`
/// removed.
pub fn tau_branch(branch: &[Series; 3], fld: &TowerField) -> Result<SpaceBranch> {
    let [x1, x2, x3] = branch;
    let raw = [x1.mul(x3, fld), x2.mul(x3, fld), x1.mul(x2, fld), x3.mul(x3, fld)];
    let shift = raw
        .iter()
        .filter_map(Series::valuation)
        .min()
        .ok_or(Error::NonInvertibleSeries)?;
    let series = [
        raw[0].shift_down(shift)?,
        raw[1].shift_down(shift)?,
        raw[2].shift_down(shift)?,
        raw[3].shift_down(shift)?,
    ];
    let center = SpacePoint::new(series.clone().map(|s| s.coeffs()[0]), fld)?;
    Ok(SpaceBranch { series, center })
}

/// Branch of the model over an affine point, `(x, y, xy, 1)`.
pub fn affine_space_branch(params: &CurveParams, pt: &AffinePoint, precision: usize) -> Result<SpaceBranch> {
    let f = params.field();
    let y = crate::symbolic::hensel_branch(params, pt.u, pt.v, precision)?;
    let x = Series::constant(pt.u, precision).add(&Series::t(precision), f);
    tau_branch(&[x, y, Series::one(precision)], f)
}

/// Branch of the model over a place at infinity. One extra term is lifted
/// to compensate for the shift by `t`.
pub fn infinite_space_branch(params: &CurveParams, place: &InfinitePlace, precision: usize) -> Result<SpaceBranch> {
    let triple = params.infinite_branch(place, precision + 1)?;
    tau_branch(&triple, params.field())
}

/// Hyperplane orders of a space branch.
pub fn space_order_sequence(params: &CurveParams, branch: &SpaceBranch, precision: usize) -> Result<Vec<usize>> {
    let q = params.q() as usize;
    if precision < 3 * q {
        return Err(Error::PrecisionInsufficient(precision));
    }
    pivot_order_sequence(&branch.series, precision, params.field())
}

/// Where a branch lives, so the order sequence can be recomputed at higher
/// precision.
#[derive(Clone, Copy, Debug)]
pub enum BranchSource {
    Affine(AffinePoint),
    Infinite(InfinitePlace),
}

/// Builds the branch and computes its order sequence, doubling the
/// precision once if pivots are deficient.
pub fn order_sequence_at(params: &CurveParams, source: BranchSource, precision: usize) -> Result<Vec<usize>> {
    let mut n = precision;
    loop {
        let branch = match source {
            BranchSource::Affine(pt) => affine_space_branch(params, &pt, n)?,
            BranchSource::Infinite(pl) => infinite_space_branch(params, &pl, n)?,
        };
        match space_order_sequence(params, &branch, n) {
            Err(Error::PrecisionInsufficient(_)) if n < 2 * precision => n *= 2,
            other => return other,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaPrimeReport {
    pub omega1p: Vec<SpacePoint>,
    pub omega2p: Vec<SpacePoint>,
    pub union_size: usize,
    /// All of `Ω₁′` on `Y2 = Y4 = 0`.
    pub omega1p_collinear: bool,
    /// All of `Ω₂′` on `Y1 = Y4 = 0`.
    pub omega2p_collinear: bool,
    pub meet: SpacePoint,
    pub meet_on_model: bool,
    /// Every branch at infinity meets `Y4 = 0` with multiplicity 1.
    pub all_simple: bool,
    /// Model points with `Y4 = 0` among the images of the `F_{q^2}` places.
    pub plane_at_infinity_points: usize,
}

pub fn omega_prime_report(params: &CurveParams) -> Result<OmegaPrimeReport> {
    let f = params.field();
    let places = params.infinite_places();
    let (mut omega1p, mut omega2p) = (Vec::new(), Vec::new());
    let mut all_simple = true;
    for pl in &places {
        let pt = tau_place(pl, f);
        let br = infinite_space_branch(params, pl, 3)?;
        all_simple &= br.center == pt && br.series[3].valuation() == Some(1);
        match pl.center {
            Center::XInf => omega1p.push(pt),
            Center::YInf => omega2p.push(pt),
        }
    }
    let union: HashSet<SpacePoint> = omega1p.iter().chain(&omega2p).copied().collect();
    let zero = |p: &SpacePoint, i: usize| p.coords[i].is_zero();
    let omega1p_collinear = omega1p.iter().all(|p| zero(p, 1) && zero(p, 3));
    let omega2p_collinear = omega2p.iter().all(|p| zero(p, 0) && zero(p, 3));
    // l1 ∩ l2 = {Y1 = Y2 = Y4 = 0}
    let meet = SpacePoint::new([f.zero(), f.zero(), f.one(), f.zero()], f)?;
    let mut model: HashSet<SpacePoint> = union.clone();
    if params.c_in(Subfield::Fq2) {
        for pt in params.enumerate_points(Subfield::Fq2)? {
            model.insert(tau_point(params, &pt)?);
        }
    }
    let plane_at_infinity_points = model.iter().filter(|p| zero(p, 3)).count();
    Ok(OmegaPrimeReport {
        union_size: union.len(),
        omega1p,
        omega2p,
        omega1p_collinear,
        omega2p_collinear,
        meet_on_model: model.contains(&meet),
        meet,
        all_simple,
        plane_at_infinity_points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonsingularityReport {
    pub level: Subfield,
    pub points: usize,
    pub distinct_images: usize,
    pub infinity_centers_distinct: bool,
    pub disjoint_from_affine: bool,
    /// Points were drawn at random because enumeration exceeded the budget.
    pub sampled: bool,
    pub injective: bool,
}

/// Checks that `tau` separates the affine points over `level` and the
/// places at infinity. Falls back to `samples` random points when the level
/// is too large to enumerate within `budget`.
pub fn nonsingularity_check<R: Rng + ?Sized>(
    params: &CurveParams,
    level: Subfield,
    budget: u64,
    samples: usize,
    rng: &mut R,
) -> Result<NonsingularityReport> {
    let (points, sampled) = match params.enumerate_points_with_budget(level, budget) {
        Ok(pts) => (pts, false),
        Err(Error::BudgetExceeded { .. }) => {
            let mut pts = params.sample_points(level, samples, rng);
            pts.sort_unstable();
            pts.dedup();
            (pts, true)
        }
        Err(e) => return Err(e),
    };
    let images: HashSet<SpacePoint> = points
        .iter()
        .map(|pt| tau_point(params, pt))
        .collect::<Result<_>>()?;
    let centers: HashSet<SpacePoint> = params.infinite_places().iter().map(|pl| tau_place(pl, params.field())).collect();
    let infinity_centers_distinct = centers.len() == 2 * params.q() as usize;
    let disjoint_from_affine = centers.is_disjoint(&images);
    Ok(NonsingularityReport {
        level,
        points: points.len(),
        distinct_images: images.len(),
        infinity_centers_distinct,
        disjoint_from_affine,
        sampled,
        injective: images.len() == points.len() && infinity_centers_distinct && disjoint_from_affine,
    })
}

/// An invertible 4x4 matrix acting on column vectors, up to scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matrix4 {
    pub m: [[FieldElement; 4]; 4],
}

impl Matrix4 {
    pub fn identity() -> Self {
        let mut m = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = FieldElement::ONE;
        }
        Matrix4 { m }
    }

    pub fn det(&self, fld: &TowerField) -> FieldElement {
        linalg::det(&self.m.iter().map(|r| r.to_vec()).collect(), fld)
    }

    pub fn mul(&self, other: &Matrix4, fld: &TowerField) -> Matrix4 {
        let mut m = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).fold(FieldElement::ZERO, |acc, k| {
                    fld.add(acc, fld.mul(self.m[i][k], other.m[k][j]))
                });
            }
        }
        Matrix4 { m }
    }

    pub fn apply(&self, p: &SpacePoint, fld: &TowerField) -> SpacePoint {
        let mut out = [FieldElement::ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).fold(FieldElement::ZERO, |acc, k| {
                fld.add(acc, fld.mul(self.m[i][k], p.coords[k]))
            });
        }
        SpacePoint::new(out, fld).expect("invertible matrix")
    }

    /// Equality up to a nonzero scalar.
    pub fn projectively_equal(&self, other: &Matrix4, fld: &TowerField) -> bool {
        let flat = |m: &Matrix4| -> Vec<FieldElement> { m.m.iter().flatten().copied().collect() };
        let (a, b) = (flat(self), flat(other));
        let Some(k) = a.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if b[k].is_zero() {
            return false;
        }
        let s = fld.div(b[k], a[k]);
        a.iter().zip(&b).all(|(&x, &y)| fld.mul(x, s) == y)
    }

    /// `Z∞` is fixed: column 2 is a multiple of `e_2`.
    pub fn fixes_z_infinity(&self) -> bool {
        [0, 1, 3].iter().all(|&i| self.m[i][2].is_zero())
    }

    /// Images of `e_a` and `e_b` both lie on the line spanned by `e_c, e_d`.
    fn maps_line(&self, from: [usize; 2], to: [usize; 2]) -> bool {
        from.iter()
            .all(|&col| (0..4).all(|row| to.contains(&row) || self.m[row][col].is_zero()))
    }

    /// `ℓ₁: Y2 = Y4 = 0` to itself and `ℓ₂: Y1 = Y4 = 0` to itself.
    pub fn stabilizes_lines(&self) -> bool {
        self.maps_line([0, 2], [0, 2]) && self.maps_line([1, 2], [1, 2])
    }

    /// `ℓ₁` and `ℓ₂` exchanged.
    pub fn swaps_lines(&self) -> bool {
        self.maps_line([0, 2], [1, 2]) && self.maps_line([1, 2], [0, 2])
    }
}

/// The projectivity `M` with `tau ∘ g = M ∘ tau`, from the closed-form rows
/// for `φ_{α,β,λ}` followed by the `Y1 <-> Y2` swap for `ξ`.
pub fn induced_space_matrix(g: &PlaneAut, fld: &TowerField) -> Matrix4 {
    let (a, b, l) = (g.alpha, g.beta, g.lambda);
    let li = fld.inv(l).expect("lambda is a root of unity");
    let z = FieldElement::ZERO;
    let o = FieldElement::ONE;
    let mut m = [
        [l, z, z, a],
        [z, li, z, b],
        [fld.mul(l, b), fld.mul(li, a), o, fld.mul(a, b)],
        [z, z, z, o],
    ];
    if g.swap {
        m.swap(0, 1);
    }
    Matrix4 { m }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixValidation {
    pub points_checked: usize,
    pub mismatches: usize,
    pub det_nonzero: bool,
    pub fixes_z_infinity: bool,
    /// Stabilizes `ℓ₁, ℓ₂` for non-swap elements, exchanges them otherwise.
    pub line_pattern: bool,
}

impl MatrixValidation {
    pub fn ok(&self) -> bool {
        self.mismatches == 0 && self.det_nonzero && self.fixes_z_infinity && self.line_pattern
    }
}

/// Compares `M tau(P)` with `tau(g P)` on the given affine points and on the
/// centers of the places at infinity.
pub fn validate_induced_matrix(
    params: &CurveParams,
    g: &PlaneAut,
    m: &Matrix4,
    points: &[AffinePoint],
) -> Result<MatrixValidation> {
    let f = params.field();
    let mut mismatches = 0;
    for pt in points {
        if m.apply(&tau_point(params, pt)?, f) != tau_point(params, &g.apply(pt, f))? {
            mismatches += 1;
        }
    }
    let places = params.infinite_places();
    for pl in &places {
        if m.apply(&tau_place(pl, f), f) != tau_place(&g.apply_place(pl, f), f) {
            mismatches += 1;
        }
    }
    Ok(MatrixValidation {
        points_checked: points.len() + places.len(),
        mismatches,
        det_nonzero: !m.det(f).is_zero(),
        fixes_z_infinity: m.fixes_z_infinity(),
        line_pattern: if g.swap { m.swaps_lines() } else { m.stabilizes_lines() },
    })
}
