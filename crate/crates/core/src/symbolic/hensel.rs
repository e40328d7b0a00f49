//! Newton–Hensel lifting of simple roots of `G(t, Y) = 0` to power series.

use crate::curve::{AffinePoint, CurveParams};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, TowerField};
use crate::symbolic::poly::MultiPoly;
use crate::symbolic::series::{substitute_branch, Series};

const MAX_NEWTON_STEPS: usize = 64;

/// Lifts the root `y0` of `G(0, Y)` to the unique series `Y(t)` with
/// `Y(0) = y0` and `G(t, Y(t)) ≡ 0 mod t^{N+1}`.
///
/// `g` is a polynomial in two variables `(T, Y)`; the root must be simple,
/// i.e. `∂G/∂Y (0, y0) ≠ 0`.
pub fn hensel_lift(g: &MultiPoly, y0: FieldElement, precision: usize, fld: &TowerField) -> Result<Series> {
    if g.nvars() != 2 {
        return Err(Error::InvalidParameter("lift needs a polynomial in (T, Y)".into()));
    }
    let zero = FieldElement::ZERO;
    if !g.evaluate(&[zero, y0], fld).is_zero() {
        return Err(Error::LiftFailure("initial value is not a root".into()));
    }
    let dg = g.derivative(1, fld);
    if dg.evaluate(&[zero, y0], fld).is_zero() {
        return Err(Error::LiftFailure("root is not simple".into()));
    }
    let t = Series::t(precision);
    let mut y = Series::constant(y0, precision);
    for _ in 0..MAX_NEWTON_STEPS {
        let residual = substitute_branch(g, &[t.clone(), y.clone()], fld)?;
        if residual.valuation().is_none() {
            return Ok(y);
        }
        let slope = substitute_branch(&dg, &[t.clone(), y.clone()], fld)?;
        y = y.sub(&residual.mul(&slope.invert(fld)?, fld), fld);
    }
    Err(Error::LiftFailure("Newton iteration did not converge".into()))
}

/// The branch `X = u + t, Y = Y(t)` of the affine curve at `(u, v)`.
///
/// Lifts `v` through `F(u + T, Y) = 0`; the lift is unique because
/// `∂F/∂Y = Tr(X)` equals `Tr(u) ≠ 0` at the center.
pub fn hensel_branch(
    params: &CurveParams,
    u: FieldElement,
    v: FieldElement,
    precision: usize,
) -> Result<Series> {
    let fld = params.field();
    if !params.on_curve(&AffinePoint { u, v }) {
        return Err(Error::NotOnCurve);
    }
    if fld.trace_q(u).is_zero() {
        return Err(Error::ZeroTrace);
    }
    let vars = ["T", "Y"];
    let shifted_x = MultiPoly::var(&vars, 0).add(&MultiPoly::constant(&vars, u), fld);
    let g = params
        .affine_polynomial()
        .compose(&[shifted_x, MultiPoly::var(&vars, 1)], fld);
    hensel_lift(&g, v, precision, fld)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveParams;

    #[test]
    fn lift_at_unit_point_over_f3() {
        let params = CurveParams::with_c_one(3, 1).unwrap();
        let f = params.field().clone();
        let y = hensel_branch(&params, f.one(), f.one(), 4).unwrap();
        let expect: Vec<_> = [1, 2, 2, 2, 0].iter().map(|&c| f.from_int(c)).collect();
        assert_eq!(y.coeffs(), expect.as_slice());
    }

    #[test]
    fn lift_satisfies_curve() {
        let params = CurveParams::with_c_one(5, 1).unwrap();
        let f = params.field().clone();
        for p in params.enumerate_points(crate::ff::Subfield::Fq2).unwrap().iter().take(20) {
            let n = 15;
            let y = hensel_branch(&params, p.u, p.v, n).unwrap();
            assert_eq!(y.coeff(0), Some(p.v));
            let x = Series::constant(p.u, n).add(&Series::t(n), &f);
            let r = substitute_branch(params.affine_polynomial(), &[x, y], &f).unwrap();
            assert_eq!(r.valuation(), None);
        }
    }

    #[test]
    fn rejects_bad_centers() {
        let params = CurveParams::with_c_one(3, 1).unwrap();
        let f = params.field().clone();
        assert_eq!(hensel_branch(&params, f.one(), f.zero(), 4), Err(Error::NotOnCurve));
        assert_eq!(hensel_branch(&params, f.zero(), f.one(), 4), Err(Error::NotOnCurve));
    }
}
