//! Dense Gaussian elimination over the ambient field.

use crate::ff::{FieldElement, TowerField};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn rref(m: &mut Matrix, fld: &TowerField) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fld.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = fld.mul(*x, inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c];
            for j in c..cols {
                let s = fld.mul(f, m[r][j]);
                m[i][j] = fld.sub(m[i][j], s);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix, fld: &TowerField) -> usize {
    let mut m = m.clone();
    rref(&mut m, fld).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns, one vector
/// per free column.
pub fn nullspace(m: &Matrix, cols: usize, fld: &TowerField) -> Vec<Vec<FieldElement>> {
    let mut m = m.clone();
    let pivots = rref(&mut m, fld);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![FieldElement::ZERO; cols];
            v[fc] = FieldElement::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = fld.neg(m[row][fc]);
            }
            v
        })
        .collect()
}

pub fn det(m: &Matrix, fld: &TowerField) -> FieldElement {
    let n = m.len();
    let mut a = m.clone();
    let mut d = FieldElement::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return FieldElement::ZERO;
        };
        if pr != c {
            a.swap(pr, c);
            d = fld.neg(d);
        }
        d = fld.mul(d, a[c][c]);
        let inv = fld.inv(a[c][c]).expect("nonzero pivot");
        for i in c + 1..n {
            let f = fld.mul(a[i][c], inv);
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let s = fld.mul(f, a[c][j]);
                a[i][j] = fld.sub(a[i][j], s);
            }
        }
    }
    d
}
