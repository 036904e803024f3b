//! Matrices over the base field `K` and `O_K`-lattices in `K^m`.
//!
//! Lattices are lists of row vectors. Eliminations pivot on the entry of
//! least valuation, so every row operation is unimodular over `O_K`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local::{LocalElement, Tower, EXACT};

pub type Matrix = Vec<Vec<LocalElement>>;

fn zero(t: &Arc<Tower>) -> LocalElement {
    LocalElement::zero(t, EXACT)
}

fn pivot(rows: &Matrix, col: usize, start: usize) -> Option<(usize, i64)> {
    (start..rows.len()).filter_map(|r| rows[r][col].valuation().map(|v| (r, v))).min_by_key(|&(r, v)| (v, r))
}

/// Characteristic polynomial `det(x I - M)` by Berkowitz' division-free
/// algorithm; coefficients from the constant term upwards.
pub fn charpoly(m: &Matrix, tower: &Arc<Tower>) -> Vec<LocalElement> {
    let n = m.len();
    // vect holds the coefficients from the leading one downwards
    let mut vect = vec![LocalElement::one(tower)];
    for k in 0..n {
        // A = m[0..k][0..k], R = m[k][0..k], C = m[0..k][k], a = m[k][k]
        let a = &m[k][k];
        let mut col: Vec<LocalElement> = (0..k).map(|i| m[i][k].clone()).collect();
        let mut t = vec![LocalElement::one(tower), -a];
        for _ in 0..k {
            let dot = (0..k).fold(zero(tower), |acc, i| &acc + &(&m[k][i] * &col[i]));
            t.push(-&dot);
            col = (0..k).map(|i| (0..k).fold(zero(tower), |acc, j| &acc + &(&m[i][j] * &col[j]))).collect();
        }
        // vect <- Toeplitz(t) * vect
        let mut next = vec![zero(tower); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = &*slot + &(&t[i - j] * v);
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    vect
}

/// `v_K(det M)` of a square matrix.
pub fn det_valuation(m: &Matrix) -> Result<i64> {
    let n = m.len();
    let mut rows = m.clone();
    let mut total = 0;
    for c in 0..n {
        let (r, v) = pivot_full(&rows, c).ok_or(Error::SingularBasis)?;
        rows.swap(c, r.0);
        for row in rows.iter_mut() {
            row.swap(c, r.1);
        }
        total += v;
        let inv = rows[c][c].inv()?;
        for k in c + 1..n {
            if rows[k][c].is_zero() {
                continue;
            }
            let factor = &rows[k][c] * &inv;
            for j in c..n {
                let t = &factor * &rows[c][j];
                rows[k][j] = &rows[k][j] - &t;
            }
        }
    }
    Ok(total)
}

fn pivot_full(rows: &Matrix, c: usize) -> Option<((usize, usize), i64)> {
    let n = rows.len();
    let mut best: Option<((usize, usize), i64)> = None;
    for r in c..n {
        for j in c..n {
            if let Some(v) = rows[r][j].valuation() {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some(((r, j), v));
                }
            }
        }
    }
    best
}

/// Unimodular row reduction of an `r x n` matrix of rank `n` to an upper
/// triangular `n x n` matrix with the same row lattice.
pub fn hermite(rows: &Matrix, n: usize) -> Result<Matrix> {
    let mut rows = rows.clone();
    for c in 0..n {
        let (r, _) = pivot(&rows, c, c).ok_or(Error::SingularBasis)?;
        rows.swap(c, r);
        let inv = rows[c][c].inv()?;
        for k in c + 1..rows.len() {
            if rows[k][c].is_zero() {
                continue;
            }
            let factor = &rows[k][c] * &inv;
            for j in 0..n {
                let t = &factor * &rows[c][j];
                rows[k][j] = &rows[k][j] - &t;
            }
        }
    }
    rows.truncate(n);
    Ok(rows)
}

/// Inverse over `K` by Gauss-Jordan elimination.
pub fn inverse(m: &Matrix, tower: &Arc<Tower>) -> Result<Matrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: Matrix =
        (0..n).map(|i| (0..n).map(|j| if i == j { LocalElement::one(tower) } else { zero(tower) }).collect()).collect();
    for c in 0..n {
        let (r, _) = pivot(&a, c, c).ok_or(Error::SingularBasis)?;
        a.swap(c, r);
        inv.swap(c, r);
        let p = a[c][c].inv()?;
        for j in 0..n {
            a[c][j] = &a[c][j] * &p;
            inv[c][j] = &inv[c][j] * &p;
        }
        for k in 0..n {
            if k == c || a[k][c].is_zero() {
                continue;
            }
            let factor = a[k][c].clone();
            for j in 0..n {
                let t = &factor * &a[c][j];
                a[k][j] = &a[k][j] - &t;
                let t = &factor * &inv[c][j];
                inv[k][j] = &inv[k][j] - &t;
            }
        }
    }
    Ok(inv)
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, tower: &Arc<Tower>) -> Matrix {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).fold(zero(tower), |acc, (x, brow)| &acc + &(x * &brow[j])))
                .collect()
        })
        .collect()
}

/// Coordinates of `v` in the row basis `basis`: `c * basis = v`.
pub fn solve_in_basis(basis: &Matrix, v: &[LocalElement], tower: &Arc<Tower>) -> Result<Vec<LocalElement>> {
    let inv = inverse(&transpose(basis), tower)?;
    Ok(inv.iter().map(|row| row.iter().zip(v).fold(zero(tower), |acc, (a, b)| &acc + &(a * b))).collect())
}

/// Generalised index `[M : N] = P_K^k` for row bases spanning the same space.
pub fn module_index(m_basis: &Matrix, n_basis: &Matrix) -> Result<i64> {
    Ok(det_valuation(n_basis)? - det_valuation(m_basis)?)
}

/// Whether every row of `sub` lies in the lattice spanned by `sup`.
pub fn contains(sup: &Matrix, sub: &Matrix, tower: &Arc<Tower>) -> Result<bool> {
    for v in sub {
        let c = solve_in_basis(sup, v, tower)?;
        if c.iter().any(|x| x.valuation().is_some_and(|v| v < 0)) {
            return Ok(false);
        }
    }
    Ok(true)
}
