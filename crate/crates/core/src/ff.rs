//! The field tower `F_p ⊂ F_q ⊂ F_{q^2} ⊂ F_{q^4}` realized inside one ambient
//! field `F_{p^{4e}}`.
//!
//! Elements are stored as their coefficient vector in the power basis
//! `1, g, g^2, ..., g^{4e-1}` of `F_p[x]/(f)`, packed as a base-`p` integer.
//! Subfields are not separate types: `F_{q^k}` is the set of elements fixed
//! by `x -> x^{q^k}`.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest ambient field accepted by [`TowerField::build`].
pub const DEFAULT_SIZE_BUDGET: u64 = 1 << 20;

/// Ambient fields up to this size get log/antilog tables for multiplication.
pub const TABLE_THRESHOLD: u64 = 1 << 16;

/// An element of the ambient field, packed as `sum c_i p^i` over its
/// power-basis coefficients. Canonical by construction, so derived equality
/// and hashing are coefficient-vector equality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed base-`p` index of the coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Selects one level of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Subfield {
    Fq,
    Fq2,
    Fq4,
}

impl Subfield {
    /// Degree over `F_q`.
    pub fn degree(self) -> u32 {
        match self {
            Subfield::Fq => 1,
            Subfield::Fq2 => 2,
            Subfield::Fq4 => 4,
        }
    }

    pub fn from_degree(k: u32) -> Option<Self> {
        match k {
            1 => Some(Subfield::Fq),
            2 => Some(Subfield::Fq2),
            4 => Some(Subfield::Fq4),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subfield::Fq => "F_q",
            Subfield::Fq2 => "F_q^2",
            Subfield::Fq4 => "F_q^4",
        }
    }
}

struct Tables {
    log: Vec<u32>,
    // doubled so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u64,
    degree: usize,
    size: u64,
    modulus: Vec<u32>,
    tables: Option<Tables>,
    primitive: FieldElement,
    subfields: [OnceLock<Vec<FieldElement>>; 3],
}

/// The ambient field `F_{p^{4e}}` together with the tower data `q = p^e`.
///
/// Cloning is cheap (shared handle).
#[derive(Clone)]
pub struct TowerField(Arc<Inner>);

impl std::fmt::Debug for TowerField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TowerField")
            .field("p", &self.0.p)
            .field("e", &self.0.e)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for TowerField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus
    }
}

impl Eq for TowerField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl TowerField {
    /// Builds the tower for `q = p^e` with the default size budget.
    pub fn build(p: u32, e: u32) -> Result<Self> {
        Self::build_with_budget(p, e, DEFAULT_SIZE_BUDGET)
    }

    pub fn build_with_budget(p: u32, e: u32, budget: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("exponent e must be positive".into()));
        }
        let degree = 4 * e as usize;
        let size = (p as u64).checked_pow(degree as u32).unwrap_or(u64::MAX);
        if size > budget || size > u32::MAX as u64 {
            return Err(Error::SizeBudget { size, budget });
        }
        let modulus = fp_poly::least_irreducible(p, degree);
        let mut inner = Inner {
            p,
            e,
            q: (p as u64).pow(e),
            degree,
            size,
            modulus,
            tables: None,
            primitive: FieldElement::ONE,
            subfields: Default::default(),
        };
        // bootstrap with table-free arithmetic, then attach tables
        let probe = TowerField(Arc::new(Inner {
            modulus: inner.modulus.clone(),
            subfields: Default::default(),
            tables: None,
            ..inner
        }));
        inner.primitive = probe.find_primitive();
        if size <= TABLE_THRESHOLD {
            inner.tables = Some(probe.build_tables(inner.primitive));
        }
        Ok(TowerField(Arc::new(inner)))
    }

    fn find_primitive(&self) -> FieldElement {
        let order = self.0.size - 1;
        let factors = prime_factors(order);
        (1..self.0.size as u32)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_reference(g, order / r) != FieldElement::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self, g: FieldElement) -> Tables {
        let n = (self.0.size - 1) as usize;
        let mut log = vec![0u32; self.0.size as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut x = FieldElement::ONE;
        for k in 0..n {
            exp[k] = x.0;
            exp[k + n] = x.0;
            log[x.0 as usize] = k as u32;
            x = self.mul_reference(x, g);
        }
        Tables { log, exp }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Degree `4e` of the ambient field over `F_p`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Monic defining polynomial over `F_p`, constant term first.
    pub fn defining_polynomial(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.0.primitive
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `x` in `F_p[x]/(f)`.
    pub fn generator(&self) -> FieldElement {
        self.from_coeffs(&[0, 1])
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given power-basis coefficients (constant first).
    /// Longer vectors are reduced modulo the defining polynomial.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElement {
        let g = FieldElement(self.0.p);
        let mut acc = FieldElement::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, g), self.from_int(c));
        }
        acc
    }

    /// Element from a packed index; `None` if out of range.
    pub fn from_index(&self, idx: u32) -> Option<FieldElement> {
        ((idx as u64) < self.0.size).then_some(FieldElement(idx))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let p = self.0.p;
        let mut v = x.0;
        (0..self.0.degree)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    /// Human-readable polynomial in the generator `g`.
    pub fn format(&self, x: FieldElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs(x).iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match (i, *c) {
                (0, c) => write!(out, "{c}").unwrap(),
                (1, 1) => out.push('g'),
                (1, c) => write!(out, "{c}*g").unwrap(),
                (i, 1) => write!(out, "g^{i}").unwrap(),
                (i, c) => write!(out, "{c}*g^{i}").unwrap(),
            }
        }
        out
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut a, mut b) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 {
            let d = (p - a % p) % p;
            out += d * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.0.tables {
            Some(t) => {
                FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
            }
            None => self.mul_reference(a, b),
        }
    }

    /// Schoolbook multiplication in the power basis followed by reduction.
    /// Independent of the log tables.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p as u64;
        let n = self.0.degree;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (n..2 * n).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            // x^k = x^{k-n} * x^n and x^n = -sum m_i x^i
            for i in 0..n {
                let sub = top * m[i] as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
            }
            prod[k] = 0;
        }
        self.pack(&prod[..n])
    }

    fn pack(&self, digits: &[u64]) -> FieldElement {
        let p = self.0.p as u64;
        let v = digits.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        FieldElement(v as u32)
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        match &self.0.tables {
            Some(t) => {
                let n = (self.0.size - 1) as u32;
                let l = t.log[a.0 as usize];
                Some(FieldElement(t.exp[((n - l) % n) as usize]))
            }
            None => self.inv_reference(a),
        }
    }

    /// Inverse through the extended Euclidean algorithm on coefficient
    /// polynomials.
    pub fn inv_reference(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let ca: Vec<u32> = self.coeffs(a);
        let inv = fp_poly::inverse_mod(&ca, &self.0.modulus, self.0.p)?;
        Some(self.pack(&inv.iter().map(|&c| c as u64).collect::<Vec<_>>()))
    }

    /// `a / b`.
    ///
    /// Panics if `b` is zero.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b).expect("division by zero field element"))
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        if exp == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.size - 1;
            let l = t.log[a.0 as usize] as u64;
            let k = ((l as u128 * exp as u128) % n as u128) as usize;
            return FieldElement(t.exp[k]);
        }
        self.pow_reference(a, exp)
    }

    /// Square-and-multiply over [`Self::mul_reference`].
    pub fn pow_reference(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_reference(acc, base);
            }
            base = self.mul_reference(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Signed exponent; negative powers of zero panic.
    pub fn pow_i(&self, a: FieldElement, exp: i64) -> FieldElement {
        if exp >= 0 {
            self.pow(a, exp as u64)
        } else {
            let inv = self.inv(a).expect("negative power of zero");
            self.pow(inv, exp.unsigned_abs())
        }
    }

    /// `x^{q^k}`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        let k = k % 4;
        let mut y = x;
        for _ in 0..k {
            y = self.pow(y, self.0.q);
        }
        y
    }

    /// Relative trace `x^q + x`.
    pub fn trace_q(&self, x: FieldElement) -> FieldElement {
        self.add(self.frobenius(x, 1), x)
    }

    /// Absolute trace of `x` from `F_q` down to `F_p`: `sum_{j<e} x^{p^j}`.
    pub fn absolute_trace(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..self.0.e {
            acc = self.add(acc, y);
            y = self.pow(y, self.0.p as u64);
        }
        acc
    }

    /// Membership in `F_{q^k}`: `x^{q^k} = x`.
    pub fn is_in(&self, x: FieldElement, level: Subfield) -> bool {
        self.frobenius(x, level.degree() % 4) == x
    }

    /// Membership in `F_p`.
    pub fn is_prime_field(&self, x: FieldElement) -> bool {
        x.0 < self.0.p
    }

    /// Every element of the ambient field in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.size as u32).map(FieldElement)
    }

    /// Elements of the selected subfield, sorted by coefficient index.
    pub fn subfield_elements(&self, level: Subfield) -> &[FieldElement] {
        let slot = match level {
            Subfield::Fq => 0,
            Subfield::Fq2 => 1,
            Subfield::Fq4 => 2,
        };
        self.0.subfields[slot].get_or_init(|| {
            if level == Subfield::Fq4 {
                self.elements().collect()
            } else {
                // F_{q^k}^* = <g^{(N-1)/(q^k-1)}>
                let qk = self.0.q.pow(level.degree());
                let h = self.pow(self.0.primitive, (self.0.size - 1) / (qk - 1));
                let mut out = Vec::with_capacity(qk as usize);
                out.push(FieldElement::ZERO);
                let mut x = FieldElement::ONE;
                for _ in 0..qk - 1 {
                    out.push(x);
                    x = self.mul(x, h);
                }
                out.sort_unstable();
                out
            }
        })
    }

    /// All `x` in the selected subfield with `x^q + x = 0`.
    pub fn trace_zero_set(&self, within: Subfield) -> Vec<FieldElement> {
        self.subfield_elements(within)
            .iter()
            .copied()
            .filter(|&x| self.trace_q(x).is_zero())
            .collect()
    }

    /// The unique `gamma` with `gamma^q = c`, i.e. `c^{q^3}`.
    pub fn q_root(&self, c: FieldElement) -> FieldElement {
        self.frobenius(c, 3)
    }

    /// Generator of the cyclic group of `(q-1)`-th roots of unity.
    pub fn root_of_unity_generator(&self) -> FieldElement {
        self.pow(self.0.primitive, (self.0.size - 1) / (self.0.q - 1))
    }

    /// Elements `lambda` with `lambda^{q-1} = 1`, i.e. `F_q^*`, sorted.
    pub fn roots_of_unity(&self) -> Vec<FieldElement> {
        self.subfield_elements(Subfield::Fq)[1..].to_vec()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.0.size as u32))
    }

    pub fn random_in<R: Rng + ?Sized>(&self, level: Subfield, rng: &mut R) -> FieldElement {
        let elems = self.subfield_elements(level);
        elems[rng.gen_range(0..elems.len())]
    }

    /// The basis element `i` of `F_{q^2}` over `F_q` with its defining data.
    pub fn quad_ext_descriptor(&self) -> QuadExtDescriptor {
        let fq = self.subfield_elements(Subfield::Fq);
        let fq2 = self.subfield_elements(Subfield::Fq2);
        if self.0.p == 2 {
            let s = fq
                .iter()
                .copied()
                .find(|&s| self.absolute_trace(s) == FieldElement::ONE)
                .expect("F_q has elements of absolute trace 1");
            let i_gen = fq2
                .iter()
                .copied()
                .find(|&x| self.add(self.add(self.square(x), x), s).is_zero())
                .expect("x^2 + x + s splits in F_q^2");
            QuadExtDescriptor { s, i_gen }
        } else {
            let half = (self.0.q - 1) / 2;
            let s = fq
                .iter()
                .copied()
                .find(|&s| !s.is_zero() && self.pow(s, half) != FieldElement::ONE)
                .expect("F_q has non-squares for odd q");
            let i_gen = fq2
                .iter()
                .copied()
                .find(|&x| self.square(x) == s)
                .expect("non-squares of F_q are squares in F_q^2");
            QuadExtDescriptor { s, i_gen }
        }
    }
}

/// `F_{q^2} = F_q(i)` with `i^2 = s` (odd `p`, `s` a non-square) or
/// `i^2 = i + s` (`p = 2`, `s` of absolute trace 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadExtDescriptor {
    pub s: FieldElement,
    pub i_gen: FieldElement,
}

impl QuadExtDescriptor {
    /// Checks the descriptor's defining relations. For `p = 2` the conjugate
    /// of `i` is the other root of `x^2 + x + s`, namely `i + 1`.
    pub fn verify(&self, fld: &TowerField) -> bool {
        let Self { s, i_gen: i } = *self;
        if !fld.is_in(s, Subfield::Fq) || fld.is_in(i, Subfield::Fq) || !fld.is_in(i, Subfield::Fq2)
        {
            return false;
        }
        let iq = fld.frobenius(i, 1);
        if fld.p() == 2 {
            fld.absolute_trace(s) == FieldElement::ONE
                && fld.square(i) == fld.add(i, s)
                && iq == fld.add(i, FieldElement::ONE)
        } else {
            let half = (fld.q() - 1) / 2;
            fld.pow(s, half) != FieldElement::ONE && fld.square(i) == s && iq == fld.neg(i)
        }
    }

    /// Writes `x` in `F_{q^2}` as `a + i b` with `a, b` in `F_q`.
    pub fn decompose(&self, fld: &TowerField, x: FieldElement) -> Option<(FieldElement, FieldElement)> {
        if !fld.is_in(x, Subfield::Fq2) {
            return None;
        }
        let i = self.i_gen;
        let xq = fld.frobenius(x, 1);
        let iq = fld.frobenius(i, 1);
        // x = a + i b, x^q = a + i^q b  =>  b = (x - x^q)/(i - i^q)
        let b = fld.div(fld.sub(x, xq), fld.sub(i, iq));
        let a = fld.sub(x, fld.mul(i, b));
        Some((a, b))
    }
}

/// Dense polynomial arithmetic over `F_p` used to choose and invert modulo the
/// defining polynomial. Coefficients are stored constant term first.
pub mod fp_poly {
    fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn inv_mod_p(a: u32, p: u32) -> u32 {
        // Fermat
        let mut acc = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod_p(m[dm], p) as u64;
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let f = r[r.len() - 1] as u64 * lead_inv % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let s = f * mi as u64 % p as u64;
                r[k + i] = ((r[k + i] as u64 + p as u64 - s) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    fn divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod_p(m[dm], p) as u64;
        let mut quo = vec![0u32; r.len().saturating_sub(dm).max(1)];
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let f = r[r.len() - 1] as u64 * lead_inv % p as u64;
            quo[k] = f as u32;
            for (i, &mi) in m.iter().enumerate() {
                let s = f * mi as u64 % p as u64;
                r[k + i] = ((r[k + i] as u64 + p as u64 - s) % p as u64) as u32;
            }
            trim(&mut r);
        }
        trim(&mut quo);
        (quo, r)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0);
                let y = *b.get(i).unwrap_or(&0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let li = inv_mod_p(lead, p) as u64;
            for c in a.iter_mut() {
                *c = (*c as u64 * li % p as u64) as u32;
            }
        }
        a
    }

    /// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
    pub fn inverse_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
        let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        trim(&mut r0);
        while !r1.is_empty() {
            let (quo, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&quo, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let li = inv_mod_p(r0[0], p) as u64;
        let mut out: Vec<u32> = s0
            .iter()
            .map(|&c| (c as u64 * li % p as u64) as u32)
            .collect();
        out.resize(m.len() - 1, 0);
        Some(out)
    }

    fn pow_p_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut base = a.to_vec();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or test: `f` of degree `n` is irreducible iff
    /// `gcd(f, x^{p^k} - x) = 1` for every `1 <= k <= n/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut xp = rem(&x, f, p);
        for _ in 1..=n / 2 {
            xp = pow_p_mod(&xp, f, p);
            let d = gcd(f, &sub(&xp, &x, p), p);
            if d.len() > 1 {
                return false;
            }
        }
        true
    }

    /// Least monic irreducible of degree `n`, ordering candidates by the
    /// packed index `sum_{i<n} c_i p^i` of their non-leading coefficients.
    pub fn least_irreducible(p: u32, n: usize) -> Vec<u32> {
        let count = (p as u64).pow(n as u32);
        for idx in 0..count {
            let mut v = idx;
            let mut f: Vec<u32> = (0..n)
                .map(|_| {
                    let d = (v % p as u64) as u32;
                    v /= p as u64;
                    d
                })
                .collect();
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Trial division by every monic polynomial of degree <= n/2.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            for idx in 0..(p as u64).pow(d as u32) {
                let mut v = idx;
                let mut g: Vec<u32> = (0..d)
                    .map(|_| {
                        let c = (v % p as u64) as u32;
                        v /= p as u64;
                        c
                    })
                    .collect();
                g.push(1);
                if fp_poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn f3_quartic_is_least_irreducible() {
        let fld = TowerField::build(3, 1).unwrap();
        let f = fld.defining_polynomial().to_vec();
        assert!(irreducible_by_trial_division(&f, 3));
        // every smaller candidate is reducible
        let mut first = None;
        for idx in 0..81u64 {
            let mut v = idx;
            let mut g: Vec<u32> = (0..4)
                .map(|_| {
                    let c = (v % 3) as u32;
                    v /= 3;
                    c
                })
                .collect();
            g.push(1);
            if irreducible_by_trial_division(&g, 3) {
                first = Some(g);
                break;
            }
        }
        assert_eq!(first.unwrap(), f);
        assert_eq!(f, vec![2, 1, 0, 0, 1]);
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for (p, n) in [(2u32, 4usize), (2, 8), (3, 4), (5, 4)] {
            for idx in 0..(p as u64).pow(n as u32).min(2000) {
                let mut v = idx;
                let mut g: Vec<u32> = (0..n)
                    .map(|_| {
                        let c = (v % p as u64) as u32;
                        v /= p as u64;
                        c
                    })
                    .collect();
                g.push(1);
                assert_eq!(
                    fp_poly::is_irreducible(&g, p),
                    irreducible_by_trial_division(&g, p),
                    "p={p} g={g:?}"
                );
            }
        }
    }

    #[test]
    fn tower_sizes() {
        let f16 = TowerField::build(2, 1).unwrap();
        assert_eq!(f16.size(), 16);
        assert_eq!(f16.q(), 2);
        let f81 = TowerField::build(3, 1).unwrap();
        assert_eq!(f81.size(), 81);
        let fixed = f81.elements().filter(|&a| f81.pow(a, 3) == a).count();
        assert_eq!(fixed, 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(TowerField::build(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(TowerField::build(2, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(TowerField::build(101, 2), Err(Error::SizeBudget { .. })));
    }

    #[test]
    fn table_arithmetic_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let fld = TowerField::build(p, e).unwrap();
            assert!(fld.has_tables());
            for _ in 0..2000 {
                let a = fld.random(&mut rng);
                let b = fld.random(&mut rng);
                assert_eq!(fld.mul(a, b), fld.mul_reference(a, b));
                if !a.is_zero() {
                    assert_eq!(fld.inv(a), fld.inv_reference(a));
                    assert_eq!(fld.mul(a, fld.inv(a).unwrap()), fld.one());
                }
                assert_eq!(fld.pow(a, 1234), fld.pow_reference(a, 1234));
            }
        }
    }

    #[test]
    fn traces() {
        let f = TowerField::build(3, 1).unwrap();
        assert_eq!(f.trace_q(f.zero()), f.zero());
        let i = f.quad_ext_descriptor().i_gen;
        // s is the least non-square of F_3, namely 2 = -1
        assert_eq!(f.square(i), f.from_int(-1));
        assert_eq!(f.trace_q(i), f.zero());

        let f2 = TowerField::build(2, 1).unwrap();
        let omega = f2
            .subfield_elements(Subfield::Fq2)
            .iter()
            .copied()
            .find(|&w| f2.square(w) == f2.add(w, f2.one()))
            .unwrap();
        assert_eq!(f2.trace_q(omega), f2.one());
    }

    #[test]
    fn trace_zero_sets() {
        let f2 = TowerField::build(2, 1).unwrap();
        assert_eq!(f2.trace_zero_set(Subfield::Fq2), vec![f2.zero(), f2.one()]);
        let f3 = TowerField::build(3, 1).unwrap();
        let i = f3.quad_ext_descriptor().i_gen;
        let mut expect = vec![f3.zero(), i, f3.add(i, i)];
        expect.sort();
        assert_eq!(f3.trace_zero_set(Subfield::Fq2), expect);
        for (p, e) in [(2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = TowerField::build(p, e).unwrap();
            let tz = f.trace_zero_set(Subfield::Fq2);
            assert_eq!(tz.len() as u64, f.q());
            assert_eq!(f.trace_zero_set(Subfield::Fq4), tz);
            for &a in &tz {
                for &b in &tz {
                    assert!(tz.contains(&f.sub(a, b)));
                }
            }
        }
    }

    #[test]
    fn subfield_membership() {
        let f = TowerField::build(3, 1).unwrap();
        assert!(f.is_in(f.one(), Subfield::Fq));
        let i = f.quad_ext_descriptor().i_gen;
        assert!(!f.is_in(i, Subfield::Fq));
        assert!(f.is_in(i, Subfield::Fq2));
        assert!(f.elements().all(|x| f.is_in(x, Subfield::Fq4)));
        for level in [Subfield::Fq, Subfield::Fq2] {
            let by_scan: Vec<_> = f.elements().filter(|&x| f.is_in(x, level)).collect();
            assert_eq!(by_scan, f.subfield_elements(level));
        }
    }

    #[test]
    fn q_roots() {
        let f = TowerField::build(3, 1).unwrap();
        assert_eq!(f.q_root(f.one()), f.one());
        assert_eq!(f.q_root(f.from_int(2)), f.from_int(2));
        assert_eq!(f.q_root(f.zero()), f.zero());
        for (p, e) in [(2, 2), (3, 2), (7, 1)] {
            let f = TowerField::build(p, e).unwrap();
            for x in f.elements() {
                assert_eq!(f.q_root(f.pow(x, f.q())), x);
            }
        }
    }

    #[test]
    fn quad_descriptors_verify() {
        for (p, e) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = TowerField::build(p, e).unwrap();
            let d = f.quad_ext_descriptor();
            assert!(d.verify(&f), "p={p} e={e}");
            for &x in f.subfield_elements(Subfield::Fq2) {
                let (a, b) = d.decompose(&f, x).unwrap();
                assert!(f.is_in(a, Subfield::Fq) && f.is_in(b, Subfield::Fq));
                assert_eq!(f.add(a, f.mul(d.i_gen, b)), x);
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = TowerField::build(3, 2).unwrap();
        for x in f.elements().step_by(37) {
            let c: Vec<i64> = f.coeffs(x).iter().map(|&c| c as i64).collect();
            assert_eq!(f.from_coeffs(&c), x);
        }
        // g^8 reduces through the defining polynomial
        let g = f.generator();
        let mut c = vec![0i64; 9];
        c[8] = 1;
        assert_eq!(f.from_coeffs(&c), f.pow(g, 8));
    }

    proptest::proptest! {
        #[test]
        fn trace_is_additive(a in 0u32..6561, b in 0u32..6561) {
            let f = TowerField::build(3, 2).unwrap();
            let (a, b) = (f.from_index(a).unwrap(), f.from_index(b).unwrap());
            proptest::prop_assert_eq!(f.trace_q(f.add(a, b)), f.add(f.trace_q(a), f.trace_q(b)));
        }
    }
}
