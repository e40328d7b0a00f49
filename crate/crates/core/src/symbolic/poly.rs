//! Sparse multivariate polynomials over the ambient field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ff::{FieldElement, TowerField};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in named variables. Zero coefficients are never stored.
///
/// Arithmetic between polynomials requires identical variable lists and
/// panics otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: FieldElement) -> Self {
        Self::monomial(vars, &vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &[&str], exps: &[u32], c: FieldElement) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps.to_vec()), c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(vars: &[&str], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, &e, FieldElement::ONE)
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> {
        self.terms.iter().map(|(m, &c)| (m.0.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElement {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .copied()
            .unwrap_or(FieldElement::ZERO)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Smallest total degree of a surviving term: the multiplicity of the
    /// origin on the zero set.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.min_total_degree(), self.total_degree()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut out = self.empty_like();
        for (m, &c) in &self.terms {
            if m.degree() == degree {
                out.terms.insert(m.clone(), c);
            }
        }
        out
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement, fld: &TowerField) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = fld.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self, fld: &TowerField) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c, fld);
        }
        out
    }

    pub fn neg(&self, fld: &TowerField) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = fld.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &Self, fld: &TowerField) -> Self {
        self.add(&other.neg(fld), fld)
    }

    pub fn scale(&self, s: FieldElement, fld: &TowerField) -> Self {
        let mut out = self.empty_like();
        if s.is_zero() {
            return out;
        }
        for (m, &c) in &self.terms {
            out.terms.insert(m.clone(), fld.mul(c, s));
        }
        out
    }

    pub fn mul(&self, other: &Self, fld: &TowerField) -> Self {
        self.check_vars(other);
        let mut out = self.empty_like();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), fld.mul(ca, cb), fld);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32, fld: &TowerField) -> Self {
        let mut acc = Self::constant(&self.vars(), FieldElement::ONE);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, fld);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, fld);
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElement], fld: &TowerField) -> FieldElement {
        assert_eq!(point.len(), self.nvars());
        self.terms.iter().fold(FieldElement::ZERO, |acc, (m, &c)| {
            let val = m
                .0
                .iter()
                .zip(point)
                .fold(c, |v, (&e, &x)| fld.mul(v, fld.pow(x, e as u64)));
            fld.add(acc, val)
        })
    }

    /// Substitutes `images[i]` for the `i`-th variable. All images share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, images: &[MultiPoly], fld: &TowerField) -> MultiPoly {
        assert_eq!(images.len(), self.nvars());
        let target = images[0].vars();
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|img| vec![MultiPoly::constant(&target, FieldElement::ONE), img.clone()])
            .collect();
        let mut out = MultiPoly::zero(&target);
        for (m, &c) in &self.terms {
            let mut term = MultiPoly::constant(&target, c);
            for (i, &e) in m.0.iter().enumerate() {
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i], fld);
                    cache[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&cache[i][e as usize], fld);
                }
            }
            out = out.add(&term, fld);
        }
        out
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize, fld: &TowerField) -> Self {
        let mut out = self.empty_like();
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let coef = fld.mul(c, fld.from_int(e as i64));
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), coef, fld);
        }
        out
    }

    /// Exact division by the monomial with exponent vector `exps`.
    pub fn div_monomial(&self, exps: &[u32]) -> Option<Self> {
        let mut out = self.empty_like();
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            for (a, &b) in e.iter_mut().zip(exps) {
                *a = a.checked_sub(b)?;
            }
            out.terms.insert(Monomial(e), c);
        }
        Some(out)
    }

    /// Re-expresses the polynomial over a new variable list, mapping variable
    /// `i` to `new_vars[positions[i]]`.
    pub fn rename(&self, new_vars: &[&str], positions: &[usize]) -> Self {
        let mut out = Self::zero(new_vars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; new_vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] += x;
            }
            out.terms.insert(Monomial(e), c);
        }
        out
    }

    pub fn format(&self, fld: &TowerField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, &c) in self.terms.iter().rev() {
            let mut mon = Vec::new();
            for (v, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => mon.push(v.clone()),
                    e => mon.push(format!("{v}^{e}")),
                }
            }
            let coef = fld.format(c);
            let coef = if coef.contains(' ') { format!("({coef})") } else { coef };
            parts.push(match (mon.is_empty(), c == FieldElement::ONE) {
                (true, _) => coef,
                (false, true) => mon.join("*"),
                (false, false) => format!("{coef}*{}", mon.join("*")),
            });
        }
        parts.join(" + ")
    }
}
