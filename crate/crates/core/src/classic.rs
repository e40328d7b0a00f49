//! Osculating conics, the osculation dichotomy, and Frobenius checks.

use serde::Serialize;

use crate::curve::{AffinePoint, CurveParams};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, Subfield};
use crate::symbolic::{pivot_order_sequence, substitute_branch, MultiPoly, Series};

const VARS: [&str; 2] = ["X", "Y"];

/// Polynomials `z_0..z_5` with
/// `z0^q + z1^q X + z2^q Y + z3^q X^2 + z4^q XY + z5^q Y^2 = F(X, Y)`.
#[derive(Clone, Debug)]
pub struct ZRepresentation {
    pub z: [MultiPoly; 6],
}

impl ZRepresentation {
    /// `sum z_i^q m_i - F` for the monomials `1, X, Y, X^2, XY, Y^2`.
    pub fn residual(&self, params: &CurveParams) -> MultiPoly {
        let f = params.field();
        let q = params.q() as u32;
        let monos = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
        let lhs = self
            .z
            .iter()
            .zip(monos)
            .fold(MultiPoly::zero(&VARS), |acc, (z, m)| {
                acc.add(&z.pow(q, f).mul(&MultiPoly::monomial(&VARS, &m, f.one()), f), f)
            });
        lhs.sub(params.affine_polynomial(), f)
    }
}

fn xy_plus(params: &CurveParams, constant: FieldElement) -> MultiPoly {
    let f = params.field();
    MultiPoly::monomial(&VARS, &[1, 1], f.one()).add(&MultiPoly::constant(&VARS, constant), f)
}

/// `(XY - gamma, Y, X, 0, 1, 0)` with `gamma^q = c`, verified before return.
pub fn z_representation(params: &CurveParams) -> Result<ZRepresentation> {
    let f = params.field();
    let rep = ZRepresentation {
        z: [
            xy_plus(params, f.neg(params.gamma())),
            MultiPoly::var(&VARS, 1),
            MultiPoly::var(&VARS, 0),
            MultiPoly::zero(&VARS),
            MultiPoly::constant(&VARS, f.one()),
            MultiPoly::zero(&VARS),
        ],
    };
    let res = rep.residual(params);
    if !res.is_zero() {
        return Err(Error::Verification(format!(
            "z-representation residual {}",
            res.format(f)
        )));
    }
    Ok(rep)
}

/// The same tuple with `z_0 = 1 + XY`; its residual is the constant `1 + c`.
pub fn literal_z_representation(params: &CurveParams) -> ZRepresentation {
    let f = params.field();
    ZRepresentation {
        z: [
            xy_plus(params, f.one()),
            MultiPoly::var(&VARS, 1),
            MultiPoly::var(&VARS, 0),
            MultiPoly::zero(&VARS),
            MultiPoly::constant(&VARS, f.one()),
            MultiPoly::zero(&VARS),
        ],
    }
}

/// Coefficients of `1, X, Y, X^2, XY, Y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conic {
    pub coeffs: [FieldElement; 6],
}

impl Conic {
    pub fn poly(&self, params: &CurveParams) -> MultiPoly {
        let f = params.field();
        let monos = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
        self.coeffs
            .iter()
            .zip(monos)
            .fold(MultiPoly::zero(&VARS), |acc, (&c, m)| {
                acc.add(&MultiPoly::monomial(&VARS, &m, c), f)
            })
    }

    pub fn evaluate(&self, params: &CurveParams, pt: &AffinePoint) -> FieldElement {
        self.poly(params).evaluate(&[pt.u, pt.v], params.field())
    }
}

/// The conic `(uv - gamma)^q + v^q X + u^q Y + XY = 0` obtained by freezing
/// the `z_i` at `P`.
pub fn hyperosculating_conic(params: &CurveParams, pt: &AffinePoint) -> Result<Conic> {
    if !params.on_curve(pt) {
        return Err(Error::NotOnCurve);
    }
    let f = params.field();
    let q = params.q();
    let c0 = f.pow(f.sub(f.mul(pt.u, pt.v), params.gamma()), q);
    Ok(Conic {
        coeffs: [c0, f.pow(pt.v, q), f.pow(pt.u, q), f.zero(), f.one(), f.zero()],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OsculationRecord {
    pub point: AffinePoint,
    pub conic: Conic,
    pub multiplicity: usize,
    /// `c^{-1} Tr(u)^2 ∈ F_q`.
    pub special: bool,
}

impl OsculationRecord {
    /// Multiplicity is `q` exactly at the non-special points.
    pub fn dichotomy_holds(&self, q: u64) -> bool {
        self.multiplicity as u64 >= q && ((self.multiplicity as u64 == q) == !self.special)
    }
}

/// Default precision for osculation measurements.
pub fn dichotomy_precision(q: u64) -> usize {
    q as usize + 3
}

/// Intersection multiplicity of the curve and its osculating conic at `P`,
/// measured along the lifted branch.
pub fn osculation_order(params: &CurveParams, pt: &AffinePoint, precision: usize) -> Result<OsculationRecord> {
    let q = params.q() as usize;
    if precision < q + 3 {
        return Err(Error::PrecisionInsufficient(precision));
    }
    let conic = hyperosculating_conic(params, pt)?;
    let mut n = precision;
    let multiplicity = loop {
        let branch = branch_series(params, pt, n)?;
        match substitute_branch(&conic.poly(params), &branch, params.field())?.valuation() {
            Some(v) => break v,
            None if n < 4 * precision => n *= 2,
            None => return Err(Error::PrecisionInsufficient(n)),
        }
    };
    Ok(OsculationRecord {
        point: *pt,
        conic,
        multiplicity,
        special: params.is_special(pt),
    })
}

fn branch_series(params: &CurveParams, pt: &AffinePoint, precision: usize) -> Result<[Series; 2]> {
    let f = params.field();
    let y = crate::symbolic::hensel_branch(params, pt.u, pt.v, precision)?;
    let x = Series::constant(pt.u, precision).add(&Series::t(precision), f);
    Ok([x, y])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusCheck {
    pub on_curve_image: bool,
    pub on_conic_image: bool,
}

/// Whether `(u^{q^2}, v^{q^2})` lies on the curve.
pub fn frobenius_image_on_curve(params: &CurveParams, pt: &AffinePoint) -> bool {
    let f = params.field();
    params.on_curve(&AffinePoint::new(f.frobenius(pt.u, 2), f.frobenius(pt.v, 2)))
}

/// Frobenius image of `P` on the curve and on the osculating conic at `P`.
/// The conic check requires `c ∈ F_q`.
pub fn frobenius_checks(params: &CurveParams, pt: &AffinePoint) -> Result<FrobeniusCheck> {
    if !params.on_curve(pt) {
        return Err(Error::NotOnCurve);
    }
    if !params.c_in(Subfield::Fq) {
        return Err(Error::ConstantNotInSubfield("F_q"));
    }
    let f = params.field();
    let image = AffinePoint::new(f.frobenius(pt.u, 2), f.frobenius(pt.v, 2));
    let conic = hyperosculating_conic(params, pt)?;
    Ok(FrobeniusCheck {
        on_curve_image: params.on_curve(&image),
        on_conic_image: conic.evaluate(params, &image).is_zero(),
    })
}

/// Default precision for order-sequence work.
pub fn order_precision(q: u64) -> usize {
    3 * q as usize
}

/// Orders of the branch at `P` with respect to conics: pivots of
/// `1, x, y, x^2, xy, y^2`. Retries at doubled precision when pivots are
/// missing.
pub fn conic_order_sequence(params: &CurveParams, pt: &AffinePoint, precision: usize) -> Result<Vec<usize>> {
    let f = params.field();
    let mut n = precision;
    loop {
        let [x, y] = branch_series(params, pt, n)?;
        let rows = [
            Series::one(n),
            x.clone(),
            y.clone(),
            x.mul(&x, f),
            x.mul(&y, f),
            y.mul(&y, f),
        ];
        match pivot_order_sequence(&rows, n, f) {
            Err(Error::PrecisionInsufficient(_)) if n < 2 * precision => n *= 2,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn repaired_representation_is_exact() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let c = CurveParams::with_c_one(p, e).unwrap();
            assert!(z_representation(&c).is_ok());
            let g = c.field().generator();
            let c2 = CurveParams::new(c.field().clone(), g).unwrap();
            assert!(z_representation(&c2).is_ok());
        }
    }

    #[test]
    fn literal_representation_misses_by_one_plus_c() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        let res = literal_z_representation(&c).residual(&c);
        assert_eq!(res, MultiPoly::constant(&VARS, f.from_int(2)));
        // c = -1 makes the literal form exact
        let cm = CurveParams::new(f.clone(), f.from_int(-1)).unwrap();
        assert_eq!(cm.gamma(), f.from_int(-1));
        assert!(literal_z_representation(&cm).residual(&cm).is_zero());
        assert_eq!(z_representation(&cm).unwrap().z[0], literal_z_representation(&cm).z[0]);
    }

    #[test]
    fn conic_shape_and_incidence() {
        let c = CurveParams::with_c_one(5, 1).unwrap();
        for pt in c.enumerate_points(Subfield::Fq2).unwrap().iter().step_by(9) {
            let conic = hyperosculating_conic(&c, pt).unwrap();
            assert!(conic.evaluate(&c, pt).is_zero());
            assert!(conic.coeffs[3].is_zero() && conic.coeffs[5].is_zero());
            let rec = osculation_order(&c, pt, 8).unwrap();
            assert!(rec.special);
            assert_eq!(rec.multiplicity, 6);
        }
    }

    #[test]
    fn generic_points_osculate_to_order_q() {
        let c = CurveParams::with_c_one(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pts = c.sample_points(Subfield::Fq4, 40, &mut rng);
        let generic: Vec<_> = pts.iter().filter(|p| !c.is_special(p)).collect();
        assert!(!generic.is_empty());
        for pt in generic {
            let rec = osculation_order(&c, pt, 8).unwrap();
            assert_eq!(rec.multiplicity, 5);
            let seq = conic_order_sequence(&c, pt, 15).unwrap();
            assert_eq!(seq, vec![0, 1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn frobenius_images() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        for pt in c.enumerate_points(Subfield::Fq4).unwrap().iter().step_by(5) {
            let chk = frobenius_checks(&c, pt).unwrap();
            assert!(chk.on_curve_image && chk.on_conic_image);
        }
        let f = c.field().clone();
        let c2 = CurveParams::new(f.clone(), f.generator()).unwrap();
        let pt = c2.enumerate_points(Subfield::Fq4).unwrap()[0];
        assert_eq!(frobenius_checks(&c2, &pt), Err(Error::ConstantNotInSubfield("F_q")));
    }

    #[test]
    fn low_precision_rejected() {
        let c = CurveParams::with_c_one(5, 1).unwrap();
        let pt = c.enumerate_points(Subfield::Fq2).unwrap()[0];
        assert_eq!(osculation_order(&c, &pt, 6).unwrap_err(), Error::PrecisionInsufficient(6));
    }
}
