//! Truncated univariate power series `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.

use crate::error::{Error, Result};
use crate::ff::{FieldElement, TowerField};
use crate::symbolic::poly::MultiPoly;

/// A power series known modulo `t^{N+1}`, where `N` is the precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<FieldElement>,
}

impl Series {
    /// Series with the given coefficients; precision is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Series { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        Series::new(vec![FieldElement::ZERO; precision + 1])
    }

    pub fn constant(c: FieldElement, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(FieldElement::ONE, precision)
    }

    /// `c t^k`.
    pub fn monomial(c: FieldElement, k: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k <= precision {
            s.coeffs[k] = c;
        }
        s
    }

    /// The local parameter `t`.
    pub fn t(precision: usize) -> Self {
        Self::monomial(FieldElement::ONE, 1, precision)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; `None` past the precision.
    pub fn coeff(&self, k: usize) -> Option<FieldElement> {
        self.coeffs.get(k).copied()
    }

    /// Order of vanishing, `None` when all known coefficients are zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        Series::new(self.coeffs[..=precision.min(self.precision())].to_vec())
    }

    pub fn add(&self, other: &Self, fld: &TowerField) -> Self {
        let n = self.precision().min(other.precision());
        Series::new((0..=n).map(|k| fld.add(self.coeffs[k], other.coeffs[k])).collect())
    }

    pub fn neg(&self, fld: &TowerField) -> Self {
        Series::new(self.coeffs.iter().map(|&c| fld.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self, fld: &TowerField) -> Self {
        self.add(&other.neg(fld), fld)
    }

    pub fn scale(&self, s: FieldElement, fld: &TowerField) -> Self {
        Series::new(self.coeffs.iter().map(|&c| fld.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Self, fld: &TowerField) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = vec![FieldElement::ZERO; n + 1];
        for (i, &a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = fld.add(out[i + j], fld.mul(a, b));
            }
        }
        Series::new(out)
    }

    pub fn pow(&self, k: u32, fld: &TowerField) -> Self {
        let mut acc = Series::one(self.precision());
        for _ in 0..k {
            acc = acc.mul(self, fld);
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self, fld: &TowerField) -> Result<Self> {
        let c0 = self.coeffs[0];
        let c0_inv = fld.inv(c0).ok_or(Error::NonInvertibleSeries)?;
        let n = self.precision();
        let mut out = vec![FieldElement::ZERO; n + 1];
        out[0] = c0_inv;
        for k in 1..=n {
            let mut acc = FieldElement::ZERO;
            for j in 1..=k {
                acc = fld.add(acc, fld.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = fld.neg(fld.mul(acc, c0_inv));
        }
        Ok(Series::new(out))
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self, fld: &TowerField) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::ComposePrecondition);
        }
        let n = self.precision().min(inner.precision());
        let inner = inner.truncate(n);
        let mut acc = Series::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner, fld).add(&Series::constant(self.coeffs[k], n), fld);
        }
        Ok(acc)
    }

    /// Divides by `t^k`, dropping the precision by `k`. The first `k`
    /// coefficients must vanish and `k` must not exceed the precision.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.precision() {
            return Err(Error::PrecisionInsufficient(self.precision()));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::Divisibility(format!("series not divisible by t^{k}")));
        }
        Ok(Series::new(self.coeffs[k..].to_vec()))
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        Series::new(self.coeffs.iter().map(|&c| f(c)).collect())
    }

    pub fn format(&self, fld: &TowerField) -> String {
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = fld.format(c);
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            parts.push(match k {
                0 => cs,
                1 => format!("{cs}*t"),
                _ => format!("{cs}*t^{k}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        format!("{} + O(t^{})", parts.join(" + "), self.precision() + 1)
    }
}

/// Evaluates `poly` along a branch, one series per variable.
pub fn substitute_branch(poly: &MultiPoly, branch: &[Series], fld: &TowerField) -> Result<Series> {
    if branch.len() != poly.nvars() {
        return Err(Error::InvalidParameter(format!(
            "{} series supplied for {} variables",
            branch.len(),
            poly.nvars()
        )));
    }
    let n = branch.iter().map(Series::precision).min().unwrap_or(0);
    let mut powers: Vec<Vec<Series>> = branch
        .iter()
        .map(|s| vec![Series::one(n), s.truncate(n)])
        .collect();
    let mut out = Series::zero(n);
    for (exps, c) in poly.terms() {
        let mut term = Series::constant(c, n);
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&powers[i][1], fld);
                powers[i].push(next);
            }
            term = term.mul(&powers[i][e as usize], fld);
        }
        out = out.add(&term, fld);
    }
    Ok(out)
}

/// Orders attained by linear combinations of the given series: the pivot
/// columns of the row-reduced `k x (N+1)` coefficient matrix, taken from the
/// lowest exponent upwards.
///
/// Fails with [`Error::PrecisionInsufficient`] when fewer than `k` pivots are
/// found up to `t^N`.
pub fn pivot_order_sequence(series: &[Series], precision: usize, fld: &TowerField) -> Result<Vec<usize>> {
    let n = series
        .iter()
        .map(Series::precision)
        .min()
        .unwrap_or(0)
        .min(precision);
    let mut rows: Vec<Vec<FieldElement>> = series.iter().map(|s| s.coeffs[..=n].to_vec()).collect();
    let mut live: Vec<usize> = (0..rows.len()).collect();
    let mut orders = Vec::with_capacity(rows.len());
    for col in 0..=n {
        let Some(pos) = live.iter().position(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        let pr = live.swap_remove(pos);
        let pinv = fld.inv(rows[pr][col]).expect("nonzero pivot");
        for &r in &live {
            let f = fld.mul(rows[r][col], pinv);
            if f.is_zero() {
                continue;
            }
            for k in col..=n {
                let sub = fld.mul(f, rows[pr][k]);
                rows[r][k] = fld.sub(rows[r][k], sub);
            }
        }
        orders.push(col);
        if live.is_empty() {
            break;
        }
    }
    if orders.len() < series.len() {
        return Err(Error::PrecisionInsufficient(n));
    }
    Ok(orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(f: &TowerField, c: &[i64]) -> Series {
        Series::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn geometric_inverse() {
        let f = TowerField::build(3, 1).unwrap();
        let inv = s(&f, &[1, 1, 0, 0]).invert(&f).unwrap();
        assert_eq!(inv, s(&f, &[1, -1, 1, -1]));
    }

    #[test]
    fn inverse_over_f3() {
        // 2 (1 + 2t + 2t^3)^{-1} expanded by hand
        let f = TowerField::build(3, 1).unwrap();
        let inv = s(&f, &[2, 1, 0, 1, 0]).invert(&f).unwrap();
        assert_eq!(inv, s(&f, &[2, 2, 2, 1, 0]));
    }

    #[test]
    fn inverse_of_nonunit_fails() {
        let f = TowerField::build(3, 1).unwrap();
        assert_eq!(Series::t(3).invert(&f), Err(Error::NonInvertibleSeries));
    }

    #[test]
    fn t_times_t() {
        let f = TowerField::build(2, 1).unwrap();
        assert_eq!(Series::t(4).mul(&Series::t(4), &f), Series::monomial(f.one(), 2, 4));
    }

    #[test]
    fn precision_is_conservative() {
        let f = TowerField::build(2, 1).unwrap();
        let a = Series::one(5);
        let b = Series::one(3);
        assert_eq!(a.add(&b, &f).precision(), 3);
        assert_eq!(a.mul(&b, &f).precision(), 3);
        assert_eq!(Series::monomial(f.one(), 2, 5).shift_down(2).unwrap().precision(), 3);
    }

    #[test]
    fn composition() {
        let f = TowerField::build(3, 1).unwrap();
        // (1 + t)^{-1} composed with t + t^2 against direct inversion
        let outer = s(&f, &[1, 1, 0, 0, 0, 0]).invert(&f).unwrap();
        let inner = s(&f, &[0, 1, 1, 0, 0, 0]);
        let direct = s(&f, &[1, 1, 1, 0, 0, 0]).invert(&f).unwrap();
        assert_eq!(outer.compose(&inner, &f).unwrap(), direct);
        assert_eq!(outer.compose(&Series::one(5), &f), Err(Error::ComposePrecondition));
    }

    #[test]
    fn pivots() {
        let f = TowerField::build(3, 1).unwrap();
        let mono = [Series::one(4), Series::t(4), Series::monomial(f.one(), 2, 4)];
        assert_eq!(pivot_order_sequence(&mono, 4, &f).unwrap(), vec![0, 1, 2]);
        let mixed = [s(&f, &[1, 1, 0, 0, 0]), s(&f, &[0, 1, 0, 1, 0]), s(&f, &[0, 0, 1, 0, 0])];
        assert_eq!(pivot_order_sequence(&mixed, 4, &f).unwrap(), vec![0, 1, 2]);
        let dependent = [Series::t(4), Series::t(4).scale(f.from_int(2), &f)];
        assert_eq!(
            pivot_order_sequence(&dependent, 4, &f),
            Err(Error::PrecisionInsufficient(4))
        );
    }

    #[test]
    fn substitution_of_a_coordinate() {
        let f = TowerField::build(3, 1).unwrap();
        let x = MultiPoly::var(&["X"], 0);
        let u = f.generator();
        let branch = [Series::constant(u, 3).add(&Series::t(3), &f)];
        assert_eq!(substitute_branch(&x, &branch, &f).unwrap(), branch[0]);
    }

    proptest::proptest! {
        #[test]
        fn pivots_invariant_under_mixing(
            rows in proptest::collection::vec(proptest::collection::vec(0u32..81, 9), 3),
            mix in proptest::collection::vec(0u32..81, 9),
        ) {
            let f = TowerField::build(3, 1).unwrap();
            let series: Vec<Series> = rows
                .iter()
                .map(|r| Series::new(r.iter().map(|&x| f.from_index(x).unwrap()).collect()))
                .collect();
            let m: Vec<FieldElement> = mix.iter().map(|&x| f.from_index(x).unwrap()).collect();
            let det = {
                let g = |i: usize, j: usize| m[3 * i + j];
                let t1 = f.mul(g(0, 0), f.sub(f.mul(g(1, 1), g(2, 2)), f.mul(g(1, 2), g(2, 1))));
                let t2 = f.mul(g(0, 1), f.sub(f.mul(g(1, 0), g(2, 2)), f.mul(g(1, 2), g(2, 0))));
                let t3 = f.mul(g(0, 2), f.sub(f.mul(g(1, 0), g(2, 1)), f.mul(g(1, 1), g(2, 0))));
                f.add(f.sub(t1, t2), t3)
            };
            proptest::prop_assume!(!det.is_zero());
            let mixed: Vec<Series> = (0..3)
                .map(|i| {
                    (0..3).fold(Series::zero(8), |acc, j| acc.add(&series[j].scale(m[3 * i + j], &f), &f))
                })
                .collect();
            proptest::prop_assert_eq!(
                pivot_order_sequence(&series, 8, &f),
                pivot_order_sequence(&mixed, 8, &f)
            );
        }
    }
}
