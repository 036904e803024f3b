//! The truncated ring `W_F / (pi_K^K)` of integers of the unramified
//! extension of degree `F` of the prime base (`Z_p` or `F_p[[t]]`).
//!
//! Elements are flat `Vec<i64>`:
//! * mixed characteristic: `F` integers mod `p^K`, the coordinates in the
//!   power basis of the generator `y` (a root of the lifted residue modulus);
//! * equal characteristic: `K` digits (powers of `t`), each an element of
//!   `F_{p^F}` stored as `F` coefficients mod `p`, laid out digit-major.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{FFElement, FFField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// Finite unramified extensions of `Q_p`.
    Padic,
    /// Laurent series fields `F_q((t))`.
    Laurent,
}

pub type WElem = Vec<i64>;

/// Largest `K` with `p^K < 2^62`.
pub fn max_cap(p: u64) -> u32 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        k += 1;
    }
    k
}

#[derive(Debug)]
pub struct UnramRing {
    kind: FieldKind,
    p: u64,
    degree: usize,
    modulus: Vec<i64>,
    cap: u32,
    pk: i64,
    residue: Arc<FFField>,
    // frob[j][k] = phi^j(y^k), stored as F base-ring scalars (digit 0 only in
    // equal characteristic, where Frobenius acts digitwise).
    frob: Vec<Vec<Vec<i64>>>,
}

impl UnramRing {
    pub fn new(kind: FieldKind, p: u64, degree: usize, cap: u32) -> Result<Self> {
        let residue = FFField::with_degree(p, degree)?;
        Self::with_residue(kind, residue, cap)
    }

    pub fn with_residue(kind: FieldKind, residue: Arc<FFField>, cap: u32) -> Result<Self> {
        let p = residue.characteristic();
        let degree = residue.degree();
        if cap == 0 {
            return Err(Error::PrecisionExhausted("working precision must be positive".into()));
        }
        let pk = match kind {
            FieldKind::Padic => {
                if cap > max_cap(p) {
                    return Err(Error::Unsupported(format!(
                        "{p}-adic precision {cap} exceeds the 64-bit cap {}",
                        max_cap(p)
                    )));
                }
                (p as i64).pow(cap)
            }
            FieldKind::Laurent => p as i64,
        };
        let modulus = residue.modulus().iter().map(|&c| c as i64).collect();
        let mut ring = UnramRing { kind, p, degree, modulus, cap, pk, residue, frob: Vec::new() };
        ring.frob = ring.frobenius_tables();
        Ok(ring)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn residue_field(&self) -> &Arc<FFField> {
        &self.residue
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn len(&self) -> usize {
        match self.kind {
            FieldKind::Padic => self.degree,
            FieldKind::Laurent => self.degree * self.cap as usize,
        }
    }

    pub fn zero(&self) -> WElem {
        vec![0; self.len()]
    }

    pub fn from_int(&self, n: i64) -> WElem {
        let mut z = self.zero();
        z[0] = match self.kind {
            FieldKind::Padic => n.rem_euclid(self.pk),
            FieldKind::Laurent => n.rem_euclid(self.p as i64),
        };
        z
    }

    pub fn one(&self) -> WElem {
        self.from_int(1)
    }

    /// The generator `y`.
    pub fn gen(&self) -> WElem {
        if self.degree == 1 {
            // y is the root of x, i.e. zero
            return self.zero();
        }
        let mut z = self.zero();
        z[1] = 1;
        z
    }

    /// `pi_K^k` (`p^k` or `t^k`), zero once `k >= K`.
    pub fn base_uniformizer_pow(&self, k: u32) -> WElem {
        self.scale_up(&self.one(), k)
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> WElem {
        let m = self.pk;
        a.iter().zip(b).map(|(x, y)| (x + y) % m).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> WElem {
        let m = self.pk;
        a.iter().zip(b).map(|(x, y)| (x - y).rem_euclid(m)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> WElem {
        let m = self.pk;
        a.iter().map(|x| (-x).rem_euclid(m)).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> WElem {
        match self.kind {
            FieldKind::Padic => self.mul_padic(a, b),
            FieldKind::Laurent => self.mul_laurent(a, b),
        }
    }

    fn mul_padic(&self, a: &[i64], b: &[i64]) -> WElem {
        let f = self.degree;
        let m = self.pk as u128;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = (prod[i + j] + (x as u128) * (y as u128) % m) % m;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..f {
                let g = self.modulus[i] as u128;
                if g != 0 {
                    prod[k - f + i] = (prod[k - f + i] + m - c * g % m) % m;
                }
            }
        }
        prod.truncate(f);
        prod.into_iter().map(|c| c as i64).collect()
    }

    fn mul_laurent(&self, a: &[i64], b: &[i64]) -> WElem {
        let f = self.degree;
        let k = self.cap as usize;
        let p = self.p as i64;
        let mut out = self.zero();
        let mut acc = vec![0i64; 2 * f - 1];
        for d in 0..k {
            acc.iter_mut().for_each(|c| *c = 0);
            let mut any = false;
            for d1 in 0..=d {
                let x = &a[d1 * f..(d1 + 1) * f];
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                let y = &b[(d - d1) * f..(d - d1 + 1) * f];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        acc[i + j] = (acc[i + j] + xi * yj) % p;
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            for top in (f..2 * f - 1).rev() {
                let c = acc[top];
                if c == 0 {
                    continue;
                }
                for i in 0..f {
                    acc[top - f + i] = (acc[top - f + i] - c * self.modulus[i]).rem_euclid(p);
                }
            }
            out[d * f..(d + 1) * f].copy_from_slice(&acc[..f]);
        }
        out
    }

    /// Multiplies by the base scalar `s` (an element of `Z/p^K` or a digit
    /// series), given as a ring element of degree-1 layout.
    pub fn mul_int(&self, a: &[i64], n: i64) -> WElem {
        let m = self.pk as i128;
        let n = (n as i128).rem_euclid(m);
        a.iter().map(|&x| ((x as i128) * n % m) as i64).collect()
    }

    /// Multiplication by `pi_K^k`.
    pub fn scale_up(&self, a: &[i64], k: u32) -> WElem {
        if k == 0 {
            return a.to_vec();
        }
        if k >= self.cap {
            return self.zero();
        }
        match self.kind {
            FieldKind::Padic => self.mul_int(a, (self.p as i64).pow(k)),
            FieldKind::Laurent => {
                let f = self.degree;
                let shift = k as usize * f;
                let mut out = self.zero();
                out[shift..].copy_from_slice(&a[..a.len() - shift]);
                out
            }
        }
    }

    /// Exact division by `pi_K^k`; the caller guarantees divisibility.
    pub fn div_exact(&self, a: &[i64], k: u32) -> WElem {
        if k == 0 {
            return a.to_vec();
        }
        match self.kind {
            FieldKind::Padic => {
                let d = (self.p as i64).pow(k);
                a.iter()
                    .map(|&x| {
                        debug_assert_eq!(x % d, 0);
                        x / d
                    })
                    .collect()
            }
            FieldKind::Laurent => {
                let f = self.degree;
                let shift = (k as usize * f).min(a.len());
                let mut out = self.zero();
                let n = a.len() - shift;
                out[..n].copy_from_slice(&a[shift..]);
                out
            }
        }
    }

    /// `pi_K`-adic valuation, `None` for zero.
    pub fn val(&self, a: &[i64]) -> Option<u32> {
        match self.kind {
            FieldKind::Padic => {
                let p = self.p as i64;
                a.iter()
                    .filter(|&&x| x != 0)
                    .map(|&x| {
                        let mut v = 0;
                        let mut y = x;
                        while y % p == 0 {
                            y /= p;
                            v += 1;
                        }
                        v
                    })
                    .min()
            }
            FieldKind::Laurent => {
                let f = self.degree;
                (0..self.cap as usize).find(|&d| a[d * f..(d + 1) * f].iter().any(|&c| c != 0)).map(|d| d as u32)
            }
        }
    }

    /// Reduction modulo `pi_K^k`.
    pub fn truncate(&self, a: &[i64], k: i64) -> WElem {
        if k <= 0 {
            return self.zero();
        }
        if k >= self.cap as i64 {
            return a.to_vec();
        }
        match self.kind {
            FieldKind::Padic => {
                let m = (self.p as i64).pow(k as u32);
                a.iter().map(|&x| x % m).collect()
            }
            FieldKind::Laurent => {
                let mut out = a.to_vec();
                out[k as usize * self.degree..].iter_mut().for_each(|c| *c = 0);
                out
            }
        }
    }

    pub fn residue(&self, a: &[i64]) -> FFElement {
        let p = self.p as i64;
        let coeffs: Vec<u64> = a[..self.degree].iter().map(|&x| x.rem_euclid(p) as u64).collect();
        self.residue.from_coeffs(&coeffs)
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn lift(&self, r: &FFElement) -> WElem {
        let mut z = self.zero();
        for (i, &c) in r.coeffs().iter().enumerate() {
            z[i] = c as i64;
        }
        z
    }

    /// Digits `a_0, a_1, ...` of `a = sum a_d pi_K^d` in equal characteristic,
    /// or the coordinate integers in mixed characteristic.
    pub fn raw(&self, a: &[i64]) -> Vec<i64> {
        a.to_vec()
    }

    /// Component `j` (coefficient of `y^j`) as an element of the degree-1 ring
    /// with the same cap, i.e. a base scalar.
    pub fn component(&self, a: &[i64], j: usize) -> WElem {
        match self.kind {
            FieldKind::Padic => vec![a[j]],
            FieldKind::Laurent => {
                let f = self.degree;
                (0..self.cap as usize).map(|d| a[d * f + j]).collect()
            }
        }
    }

    /// Inverse of [`component`](Self::component): `sum_j parts[j] * y^j`.
    pub fn from_components(&self, parts: &[WElem]) -> WElem {
        let mut z = self.zero();
        match self.kind {
            FieldKind::Padic => {
                for (j, c) in parts.iter().enumerate() {
                    z[j] = c[0].rem_euclid(self.pk);
                }
            }
            FieldKind::Laurent => {
                let f = self.degree;
                for (j, c) in parts.iter().enumerate() {
                    for (d, &v) in c.iter().enumerate().take(self.cap as usize) {
                        z[d * f + j] = v;
                    }
                }
            }
        }
        z
    }

    /// Inverse of a unit by Newton iteration.
    pub fn inv_unit(&self, a: &[i64]) -> Result<WElem> {
        let r = self.residue(a);
        let r_inv = r.inv()?;
        let mut z = self.lift(&r_inv);
        let two = self.from_int(2);
        let mut digits = 1u32;
        while digits < self.cap {
            let t = self.sub(&two, &self.mul(a, &z));
            z = self.mul(&z, &t);
            digits *= 2;
        }
        Ok(z)
    }

    /// Evaluates a polynomial with ring coefficients.
    pub fn eval(&self, poly: &[WElem], x: &[i64]) -> WElem {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Newton lift of a simple root: `poly(x0)` must vanish mod `pi_K` and
    /// `poly'(x0)` must be a unit.
    pub fn hensel_simple_root(&self, poly: &[WElem], x0: &[i64]) -> Result<WElem> {
        let deriv: Vec<WElem> = poly.iter().enumerate().skip(1).map(|(i, c)| self.mul_int(c, i as i64)).collect();
        if !self.residue(&self.eval(poly, x0)).is_zero() {
            return Err(Error::HenselFailure("approximation is not a residue root".into()));
        }
        if self.residue(&self.eval(&deriv, x0)).is_zero() {
            return Err(Error::HenselFailure("root is not simple modulo pi".into()));
        }
        let mut x = x0.to_vec();
        let mut digits = 1u32;
        while digits < self.cap {
            let fx = self.eval(poly, &x);
            let dx = self.eval(&deriv, &x);
            x = self.sub(&x, &self.mul(&fx, &self.inv_unit(&dx)?));
            digits *= 2;
        }
        Ok(x)
    }

    fn frobenius_tables(&self) -> Vec<Vec<Vec<i64>>> {
        let f = self.degree;
        let mut tables = Vec::with_capacity(f);
        match self.kind {
            FieldKind::Padic => {
                let id: Vec<Vec<i64>> = (0..f).map(|k| self.y_pow(k)).collect();
                if f == 1 {
                    return vec![id];
                }
                // Y = phi(y): the root of the modulus congruent to y^p.
                let y = self.gen();
                let mut yp = self.one();
                for _ in 0..self.p {
                    yp = self.mul(&yp, &y);
                }
                let poly: Vec<WElem> = self.modulus.iter().map(|&c| self.from_int(c)).collect();
                let big_y = self.hensel_simple_root(&poly, &yp).expect("separable modulus");
                let mut current = self.gen();
                tables.push(id);
                for _ in 1..f {
                    // phi^{j}(y) = phi(phi^{j-1}(y)) = sum_k c_k Y^k
                    let mut next = self.zero();
                    let mut ypow = self.one();
                    for &c in current.iter() {
                        next = self.add(&next, &self.mul_int(&ypow, c));
                        ypow = self.mul(&ypow, &big_y);
                    }
                    let row: Vec<Vec<i64>> = (0..f)
                        .map(|k| {
                            let mut acc = self.one();
                            for _ in 0..k {
                                acc = self.mul(&acc, &next);
                            }
                            acc
                        })
                        .collect();
                    tables.push(row);
                    current = next;
                }
            }
            FieldKind::Laurent => {
                let w = self.residue.generator();
                for j in 0..f {
                    let wj = w.frob_pow(j);
                    let row: Vec<Vec<i64>> =
                        (0..f).map(|k| wj.pow(k as u64).coeffs().iter().map(|&c| c as i64).collect()).collect();
                    tables.push(row);
                }
            }
        }
        tables
    }

    fn y_pow(&self, k: usize) -> WElem {
        let mut z = self.zero();
        z[k] = 1;
        z
    }

    /// The arithmetic Frobenius `phi^j`, acting on the coefficients of `y`.
    pub fn frob(&self, a: &[i64], j: usize) -> WElem {
        let f = self.degree;
        let j = j % f;
        if j == 0 {
            return a.to_vec();
        }
        let table = &self.frob[j];
        match self.kind {
            FieldKind::Padic => {
                let mut out = self.zero();
                for (k, &c) in a.iter().enumerate() {
                    if c != 0 {
                        out = self.add(&out, &self.mul_int(&table[k], c));
                    }
                }
                out
            }
            FieldKind::Laurent => {
                let p = self.p as i64;
                let mut out = self.zero();
                for d in 0..self.cap as usize {
                    let digit = &a[d * f..(d + 1) * f];
                    for (k, &c) in digit.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for i in 0..f {
                            out[d * f + i] = (out[d * f + i] + c * table[k][i]) % p;
                        }
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_arithmetic_mod_pk() {
        let r = UnramRing::new(FieldKind::Padic, 3, 1, 5).unwrap();
        let six = r.from_int(6);
        let prod = r.mul(&six, &six);
        assert_eq!(prod, vec![36]);
        assert_eq!(r.val(&prod), Some(2));
        let inv2 = r.inv_unit(&r.from_int(2)).unwrap();
        assert_eq!(r.mul(&inv2, &r.from_int(2)), r.one());
    }

    #[test]
    fn laurent_geometric_series() {
        let r = UnramRing::new(FieldKind::Laurent, 2, 1, 6).unwrap();
        let one_plus_t = r.add(&r.one(), &r.base_uniformizer_pow(1));
        let inv = r.inv_unit(&one_plus_t).unwrap();
        assert_eq!(inv, vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn frobenius_has_order_f() {
        for kind in [FieldKind::Padic, FieldKind::Laurent] {
            let r = UnramRing::new(kind, 3, 2, 6).unwrap();
            let y = r.gen();
            let fy = r.frob(&y, 1);
            assert_ne!(fy, y);
            assert_eq!(r.frob(&fy, 1), y);
            // ring homomorphism on a product
            let a = r.add(&y, &r.from_int(2));
            let b = r.add(&r.mul(&y, &y), &r.from_int(1));
            assert_eq!(r.frob(&r.mul(&a, &b), 1), r.mul(&r.frob(&a, 1), &r.frob(&b, 1)));
            // phi(y) is a root of the modulus
            let poly: Vec<WElem> = r.modulus().iter().map(|&c| r.from_int(c)).collect();
            assert!(r.is_zero(&r.eval(&poly, &fy)));
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(UnramRing::new(FieldKind::Padic, 3, 1, max_cap(3) + 1).is_err());
        assert!(3u128.pow(max_cap(3)) < 1 << 62);
    }
}
