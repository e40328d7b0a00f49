//! Degree-`q` adjoints of the projective curve and the divisor bookkeeping
//! for the linear series they cut out.
//!
//! Multiplicity conditions are imposed through monomial valuations in a
//! chart centered at the point, never through derivatives, so the same code
//! works in every characteristic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::curve::{Center, CurveParams, InfinitePlace};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, TowerField};
use crate::linalg;
use crate::symbolic::MultiPoly;

const HVARS: [&str; 3] = ["X1", "X2", "X3"];

/// A homogeneous polynomial in `X1, X2, X3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPlaneCurve {
    poly: MultiPoly,
}

impl HomogeneousPlaneCurve {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        if poly.nvars() != 3 {
            return Err(Error::InvalidParameter("plane curves live in X1, X2, X3".into()));
        }
        if !poly.is_homogeneous() {
            return Err(Error::InvalidParameter("polynomial is not homogeneous".into()));
        }
        Ok(HomogeneousPlaneCurve { poly })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.poly.total_degree()
    }
}

/// Dehomogenizes at the first nonzero coordinate of `point` and moves the
/// point to the origin. The result is a polynomial in the two remaining
/// coordinates, kept in their original order.
pub fn local_chart(curve: &HomogeneousPlaneCurve, point: &[FieldElement; 3], fld: &TowerField) -> Result<MultiPoly> {
    let k = point
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidParameter("point (0:0:0)".into()))?;
    let scale = fld.inv(point[k]).expect("nonzero coordinate");
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let names: Vec<&str> = others.iter().map(|&j| ["Z1", "Z2", "Z3"][j]).collect();
    let images: Vec<MultiPoly> = (0..3)
        .map(|j| {
            if j == k {
                MultiPoly::constant(&names, fld.one())
            } else {
                let slot = others.iter().position(|&o| o == j).unwrap();
                MultiPoly::var(&names, slot)
                    .add(&MultiPoly::constant(&names, fld.mul(point[j], scale)), fld)
            }
        })
        .collect();
    Ok(curve.poly.compose(&images, fld))
}

/// Multiplicity of `point` on the curve: the lowest total degree surviving
/// in the local chart. `0` off the curve, `1` at smooth points.
pub fn multiplicity_at(curve: &HomogeneousPlaneCurve, point: &[FieldElement; 3], fld: &TowerField) -> Result<u32> {
    if curve.poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(local_chart(curve, point, fld)?
        .min_total_degree()
        .expect("nonzero polynomial stays nonzero in a chart"))
}

/// Lowest-degree form of the local equation at `point`.
pub fn tangent_cone(curve: &HomogeneousPlaneCurve, point: &[FieldElement; 3], fld: &TowerField) -> Result<MultiPoly> {
    let m = multiplicity_at(curve, point, fld)?;
    Ok(local_chart(curve, point, fld)?.homogeneous_part(m))
}

/// The linear system of degree-`q` adjoints.
#[derive(Clone, Debug)]
pub struct AdjointSystem {
    pub basis: Vec<HomogeneousPlaneCurve>,
    pub vector_dimension: usize,
    pub projective_dimension: usize,
    /// `ℓ(G) = projective_dimension + 1`.
    pub ell_g: usize,
    pub series_degree: u64,
    pub ambient_dimension: usize,
    pub condition_rank: usize,
    /// The kernel equals the span of `X3^q, X1 X3^{q-1}, X2 X3^{q-1}, X1 X2 X3^{q-2}`.
    pub matches_expected_monomials: bool,
}

impl Serialize for AdjointSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AdjointSystem", 7)?;
        st.serialize_field("vector_dimension", &self.vector_dimension)?;
        st.serialize_field("projective_dimension", &self.projective_dimension)?;
        st.serialize_field("ell_g", &self.ell_g)?;
        st.serialize_field("series_degree", &self.series_degree)?;
        st.serialize_field("ambient_dimension", &self.ambient_dimension)?;
        st.serialize_field("condition_rank", &self.condition_rank)?;
        st.serialize_field("matches_expected_monomials", &self.matches_expected_monomials)?;
        st.end()
    }
}

/// Exponent vectors of all degree-`d` monomials in three variables.
pub fn degree_monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Solves for all degree-`q` forms with multiplicity at least `q - 1` at
/// `X∞ = (1:0:0)` and `Y∞ = (0:1:0)`.
pub fn adjoint_system(params: &CurveParams) -> Result<AdjointSystem> {
    let f = params.field();
    let q = params.q() as u32;
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let monos = degree_monomials(q);
    let points = [[f.one(), f.zero(), f.zero()], [f.zero(), f.one(), f.zero()]];
    // row key: (point, local exponents) for local degree < q - 1
    let mut rows: BTreeMap<(usize, Vec<u32>), Vec<FieldElement>> = BTreeMap::new();
    for (col, m) in monos.iter().enumerate() {
        let form = HomogeneousPlaneCurve::new(MultiPoly::monomial(&HVARS, m, f.one()))?;
        for (pi, pt) in points.iter().enumerate() {
            let local = local_chart(&form, pt, f)?;
            for (exps, c) in local.terms() {
                if exps.iter().sum::<u32>() < q - 1 {
                    let row = rows
                        .entry((pi, exps.to_vec()))
                        .or_insert_with(|| vec![f.zero(); monos.len()]);
                    row[col] = f.add(row[col], c);
                }
            }
        }
    }
    let matrix: linalg::Matrix = rows.into_values().collect();
    let condition_rank = linalg::rank(&matrix, f);
    let kernel = linalg::nullspace(&matrix, monos.len(), f);
    let expected: Vec<[u32; 3]> = vec![[0, 0, q], [1, 0, q - 1], [0, 1, q - 1], [1, 1, q - 2]];
    let supported = kernel.iter().all(|v| {
        v.iter()
            .zip(&monos)
            .all(|(c, m)| c.is_zero() || expected.contains(m))
    });
    let matches_expected_monomials = supported && kernel.len() == expected.len();
    let basis = kernel
        .iter()
        .map(|v| {
            let poly = v
                .iter()
                .zip(&monos)
                .fold(MultiPoly::zero(&HVARS), |acc, (&c, m)| {
                    acc.add(&MultiPoly::monomial(&HVARS, m, c), f)
                });
            HomogeneousPlaneCurve::new(poly)
        })
        .collect::<Result<Vec<_>>>()?;
    let vector_dimension = basis.len();
    let projective_dimension = vector_dimension.saturating_sub(1);
    let q64 = q as u64;
    Ok(AdjointSystem {
        basis,
        vector_dimension,
        projective_dimension,
        ell_g: projective_dimension + 1,
        // degree 2q curve met by degree q forms, minus the double-point divisor
        series_degree: 2 * q64 * q64 - 2 * q64 * (q64 - 1),
        ambient_dimension: monos.len(),
        condition_rank,
        matches_expected_monomials,
    })
}

/// Splits an adjoint as `X3^{q-2} · Q` and checks that the quadric `Q`
/// passes through `X∞` and `Y∞`.
pub fn decompose_adjoint(adj: &HomogeneousPlaneCurve, q: u32, fld: &TowerField) -> Result<(u32, HomogeneousPlaneCurve)> {
    let k = q.checked_sub(2).ok_or_else(|| Error::InvalidParameter("q < 2".into()))?;
    if adj.degree() != Some(q) {
        return Err(Error::InvalidParameter(format!("adjoint must have degree {q}")));
    }
    let conic = adj
        .poly
        .div_monomial(&[0, 0, k])
        .ok_or_else(|| Error::Divisibility(format!("adjoint not divisible by X3^{k}")))?;
    let conic = HomogeneousPlaneCurve::new(conic)?;
    for pt in [[fld.one(), fld.zero(), fld.zero()], [fld.zero(), fld.one(), fld.zero()]] {
        if !conic.poly.evaluate(&pt, fld).is_zero() {
            return Err(Error::Verification("conic factor misses X∞ or Y∞".into()));
        }
    }
    Ok((k, conic))
}

/// The divisors `G = P + Q`, `D = (q-1) G` and the residual `B`.
#[derive(Clone, Debug, Serialize)]
pub struct DivisorData {
    pub g_support: Vec<InfinitePlace>,
    pub p_part: Vec<InfinitePlace>,
    pub q_part: Vec<InfinitePlace>,
    /// Multiplicity of `D` at every place of `G`.
    pub d_multiplicity: u64,
    /// `ord_t(X3)` along every branch of `G`, in support order.
    pub line_orders: Vec<usize>,
    pub b_is_zero: bool,
    pub deg_g: u64,
    pub deg_d: u64,
    pub series_degree: u64,
}

pub fn divisor_check(params: &CurveParams, precision: usize) -> Result<DivisorData> {
    let q = params.q();
    let places = params.infinite_places();
    let mut line_orders = Vec::with_capacity(places.len());
    for place in &places {
        let branch = params.infinite_branch(place, precision)?;
        let ord = branch[2]
            .valuation()
            .ok_or(Error::PrecisionInsufficient(precision))?;
        if ord != 1 {
            return Err(Error::Verification(format!("ord_t(X3) = {ord} at a place of G")));
        }
        line_orders.push(ord);
    }
    let (p_part, q_part): (Vec<_>, Vec<_>) = places.iter().partition(|pl| pl.center == Center::XInf);
    let deg_g = places.len() as u64;
    let d_multiplicity = q - 1;
    let deg_d = d_multiplicity * deg_g;
    // X3^q cuts q·ord_t(X3) at each place; subtract D + G
    let b_is_zero = line_orders
        .iter()
        .all(|&o| q * o as u64 == d_multiplicity + 1);
    Ok(DivisorData {
        g_support: places.clone(),
        p_part,
        q_part,
        d_multiplicity,
        line_orders,
        b_is_zero,
        deg_g,
        deg_d,
        series_degree: 2 * q * q - deg_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Subfield;

    #[test]
    fn multiplicities() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let f = c.field().clone();
        let curve = HomogeneousPlaneCurve::new(c.homogeneous_polynomial().clone()).unwrap();
        let xinf = [f.one(), f.zero(), f.zero()];
        assert_eq!(multiplicity_at(&curve, &xinf, &f).unwrap(), 3);
        let form = HomogeneousPlaneCurve::new(MultiPoly::monomial(&HVARS, &[1, 1, 1], f.one())).unwrap();
        assert_eq!(multiplicity_at(&form, &xinf, &f).unwrap(), 2);
        for pt in c.enumerate_points(Subfield::Fq2).unwrap().iter().take(6) {
            assert_eq!(multiplicity_at(&curve, &[pt.u, pt.v, f.one()], &f).unwrap(), 1);
        }
        // off the curve
        assert_eq!(multiplicity_at(&curve, &[f.zero(), f.zero(), f.one()], &f).unwrap(), 0);
        let zero = HomogeneousPlaneCurve::new(MultiPoly::zero(&HVARS)).unwrap();
        assert_eq!(multiplicity_at(&zero, &xinf, &f), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn adjoints_q3_and_q5() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let sys = adjoint_system(&c).unwrap();
        assert_eq!(sys.vector_dimension, 4);
        assert!(sys.matches_expected_monomials);
        let c5 = CurveParams::with_c_one(5, 1).unwrap();
        let sys5 = adjoint_system(&c5).unwrap();
        assert_eq!(sys5.vector_dimension, 4);
        assert_eq!(sys5.ambient_dimension, 21);
        assert_eq!(sys5.condition_rank, 17);
        assert_eq!(sys5.ell_g, 4);
        assert_eq!(sys5.series_degree, 10);
    }

    #[test]
    fn decompositions() {
        let c = CurveParams::with_c_one(5, 1).unwrap();
        let f = c.field().clone();
        let q = 5;
        let m = |e: [u32; 3], x: FieldElement| MultiPoly::monomial(&HVARS, &e, x);
        let adj = HomogeneousPlaneCurve::new(
            m([0, 0, 5], f.one()).add(&m([1, 1, 3], f.one()), &f),
        )
        .unwrap();
        let (k, conic) = decompose_adjoint(&adj, q, &f).unwrap();
        assert_eq!(k, 3);
        assert_eq!(
            conic.poly(),
            &m([0, 0, 2], f.one()).add(&m([1, 1, 0], f.one()), &f)
        );
        let (_, line_pair) =
            decompose_adjoint(&HomogeneousPlaneCurve::new(m([1, 0, 4], f.one())).unwrap(), q, &f).unwrap();
        assert_eq!(line_pair.poly(), &m([1, 0, 1], f.one()));
        let (a, b1, b2, d) = (f.from_int(2), f.from_int(3), f.from_int(4), f.generator());
        let general = m([0, 0, 5], a)
            .add(&m([1, 0, 4], b1), &f)
            .add(&m([0, 1, 4], b2), &f)
            .add(&m([1, 1, 3], d), &f);
        let (_, conic) = decompose_adjoint(&HomogeneousPlaneCurve::new(general).unwrap(), q, &f).unwrap();
        let expect = m([0, 0, 2], a)
            .add(&m([1, 0, 1], b1), &f)
            .add(&m([0, 1, 1], b2), &f)
            .add(&m([1, 1, 0], d), &f);
        assert_eq!(conic.poly(), &expect);
        let bad = HomogeneousPlaneCurve::new(m([2, 0, 3], f.one())).unwrap();
        assert!(decompose_adjoint(&bad, q, &f).is_err());
    }

    #[test]
    fn divisors() {
        let c = CurveParams::with_c_one(3, 1).unwrap();
        let d = divisor_check(&c, 9).unwrap();
        assert_eq!(d.deg_g, 6);
        assert_eq!(d.deg_d, 12);
        assert_eq!(d.series_degree, 6);
        assert!(d.b_is_zero);
        assert!(d.line_orders.iter().all(|&o| o == 1));
        assert_eq!(d.p_part.len(), 3);
        assert_eq!(d.q_part.len(), 3);
    }
}
