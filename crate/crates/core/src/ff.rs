//! Exact arithmetic in finite fields `F_{p^f}`.
//!
//! A field is presented as `F_p[w]/(m(w))` for a monic irreducible `m`. When
//! no modulus is given the smallest irreducible one is chosen, ordering
//! candidates by the integer `sum c_i p^i` of their coefficient vector, so
//! runs are reproducible.
//!
//! Elements are enumerated in the same canonical order (`index`), which is
//! what every exhaustive search in the crate iterates over.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Polynomials over `F_p`, coefficients low to high, trailing zeros trimmed.
pub(crate) mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                for i in 0..=dm {
                    let idx = top - dm + i;
                    r[idx] = (r[idx] + p - c * m[i] % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        result
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
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
            let li = inv_mod(lead, p);
            for c in a.iter_mut() {
                *c = *c * li % p;
            }
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// Rabin-style test: `x^{p^f} = x mod m` and `gcd(x^{p^k} - x, m) = 1`
    /// for every `k < f`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let f = m.len() - 1;
        if f == 0 {
            return false;
        }
        if f == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = rem(&x, m, p);
        for k in 1..=f {
            xp = pow_mod(&xp, p, m, p);
            let diff = sub(&xp, &rem(&x, m, p), p);
            if k < f {
                let g = gcd(&diff, m, p);
                if g.len() > 1 {
                    return false;
                }
            } else if !diff.is_empty() {
                return false;
            }
        }
        true
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The finite field `F_p[w]/(modulus)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FFField {
    p: u64,
    modulus: Vec<u64>,
}

impl fmt::Debug for FFField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.degree(), self.modulus)
    }
}

impl FFField {
    /// Builds a field from an explicit monic modulus (coefficients low to high).
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidDegree(format!("{p} is not prime")));
        }
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        fp_poly::trim(&mut modulus);
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::NotIrreducible);
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::NotIrreducible);
        }
        Ok(Arc::new(FFField { p, modulus }))
    }

    /// The field of order `p^f` with the canonical modulus.
    pub fn with_degree(p: u64, f: usize) -> Result<Arc<Self>> {
        Self::new(p, canonical_modulus(p, f)?)
    }

    pub fn prime(p: u64) -> Result<Arc<Self>> {
        Self::new(p, vec![0, 1])
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FFElement {
        FFElement { field: self.clone(), coeffs: vec![0; self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> FFElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FFElement {
        let mut z = self.zero();
        z.coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        z
    }

    /// The class of `w`, the generator of the presentation.
    pub fn generator(self: &Arc<Self>) -> FFElement {
        self.from_coeffs(&[0, 1])
    }

    /// Element with the given coefficients in the power basis; longer inputs
    /// are reduced modulo the modulus.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FFElement {
        let raw: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        let mut r = fp_poly::rem(&raw, &self.modulus, self.p);
        r.resize(self.degree(), 0);
        FFElement { field: self.clone(), coeffs: r }
    }

    /// The element whose coefficient vector is the base-`p` expansion of `index`.
    pub fn element_at(self: &Arc<Self>, mut index: u64) -> FFElement {
        let mut coeffs = vec![0; self.degree()];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FFElement { field: self.clone(), coeffs }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// All roots in this field of a polynomial with coefficients in this
    /// field, in canonical element order (exhaustive scan).
    pub fn roots_of(self: &Arc<Self>, poly: &[FFElement]) -> Vec<FFElement> {
        self.elements().filter(|x| poly_eval(poly, x).is_zero()).collect()
    }
}

fn canonical_modulus(p: u64, f: usize) -> Result<Vec<u64>> {
    if f == 0 {
        return Err(Error::InvalidDegree("degree must be positive".into()));
    }
    if f == 1 {
        return Ok(vec![0, 1]);
    }
    let count = p.pow(f as u32);
    for idx in 0..count {
        let mut m = Vec::with_capacity(f + 1);
        let mut n = idx;
        for _ in 0..f {
            m.push(n % p);
            n /= p;
        }
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::NotIrreducible)
}

/// An element of a finite field.
#[derive(Clone)]
pub struct FFElement {
    field: Arc<FFField>,
    coeffs: Vec<u64>,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for FFElement {}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}*w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}*w^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FFElement {
    pub fn field(&self) -> &Arc<FFField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration.
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.field.p + c)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect();
        Ok(FFElement { field: self.field.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + p - b) % p).collect();
        Ok(FFElement { field: self.field.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let prod = fp_poly::mul(&self.coeffs, &other.coeffs, self.field.p);
        Ok(self.field.from_coeffs(&prod))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, exp: u64) -> Self {
        if self.field.degree() == 1 {
            let c = fp_poly::pow_mod(&self.coeffs, exp, &[0, 1], self.field.p);
            return self.field.from_coeffs(&c);
        }
        let c = fp_poly::pow_mod(&self.coeffs, exp, &self.field.modulus, self.field.p);
        self.field.from_coeffs(&c)
    }

    /// `x^n` for any integer `n`; negative powers require `x != 0`.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    fn check_base(&self, base_degree: usize) -> Result<()> {
        let f = self.field.degree();
        if base_degree == 0 || !f.is_multiple_of(base_degree) {
            return Err(Error::InvalidDegree(format!("{base_degree} does not divide {f}")));
        }
        Ok(())
    }

    /// `x^{p^base_degree}`, the Frobenius of `F_{p^f}` over `F_{p^base_degree}`.
    pub fn frobenius(&self, base_degree: usize) -> Result<Self> {
        self.check_base(base_degree)?;
        Ok(self.frob_pow(base_degree))
    }

    /// `x^{p^k}` for any `k >= 0`.
    pub fn frob_pow(&self, k: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.pow(self.field.p);
        }
        x
    }

    /// Trace from `F_{p^f}` down to the subfield of degree `base_degree`.
    pub fn trace(&self, base_degree: usize) -> Result<Self> {
        self.check_base(base_degree)?;
        let n = self.field.degree() / base_degree;
        let mut acc = self.field.zero();
        let mut x = self.clone();
        for _ in 0..n {
            acc = &acc + &x;
            x = x.frob_pow(base_degree);
        }
        Ok(acc)
    }

    /// Whether `x` lies in the subfield of degree `d`.
    pub fn in_subfield(&self, d: usize) -> bool {
        self.field.degree().is_multiple_of(d) && self.frob_pow(d) == *self
    }
}

impl Add for &FFElement {
    type Output = FFElement;
    fn add(self, rhs: &FFElement) -> FFElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FFElement {
    type Output = FFElement;
    fn sub(self, rhs: &FFElement) -> FFElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FFElement {
    type Output = FFElement;
    fn mul(self, rhs: &FFElement) -> FFElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FFElement {
    type Output = FFElement;
    fn neg(self) -> FFElement {
        &self.field.zero() - self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FFOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// Checked field arithmetic; `Inv` ignores `y`.
pub fn ff_arithmetic(x: &FFElement, y: &FFElement, op: FFOp) -> Result<FFElement> {
    match op {
        FFOp::Add => x.try_add(y),
        FFOp::Sub => x.try_sub(y),
        FFOp::Mul => x.try_mul(y),
        FFOp::Inv => x.inv(),
    }
}

pub fn poly_eval(poly: &[FFElement], x: &FFElement) -> FFElement {
    let mut acc = x.field.zero();
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Whether `x` generates a normal basis of `F_{q^ext}` over `F_q`, where
/// `q = p^base_degree` and `F_{q^ext}` is the subfield of degree
/// `ext_degree * base_degree` of the ambient field.
pub fn ff_is_normal(x: &FFElement, ext_degree: usize, base_degree: usize) -> Result<bool> {
    let f = x.field.degree();
    let sub = ext_degree * base_degree;
    if ext_degree == 0 || base_degree == 0 || !f.is_multiple_of(sub) {
        return Err(Error::InvalidDegree(format!("{ext_degree}*{base_degree} does not divide {f}")));
    }
    if !x.in_subfield(sub) || x.is_zero() {
        return Ok(false);
    }
    let conjugates: Vec<FFElement> =
        std::iter::successors(Some(x.clone()), |c| Some(c.frob_pow(base_degree))).take(ext_degree).collect();
    if base_degree == 1 {
        let fp = FFField::prime(x.field.p)?;
        let rows: Vec<Vec<FFElement>> =
            conjugates.iter().map(|c| c.coeffs.iter().map(|&a| fp.from_int(a as i64)).collect()).collect();
        return Ok(rank(&rows) == ext_degree);
    }
    // det(sigma_i sigma_j x) != 0 characterises normal elements.
    let mut m = Vec::with_capacity(ext_degree);
    for i in 0..ext_degree {
        let row: Vec<FFElement> = (0..ext_degree).map(|j| conjugates[(i + j) % ext_degree].clone()).collect();
        m.push(row);
    }
    Ok(!det(&m).is_zero())
}

/// Deterministic search for a normal element: scans the canonical
/// enumeration starting at `seed` and returns the first element accepted by
/// [`ff_is_normal`].
pub fn ff_normal_basis_element(
    field: &Arc<FFField>,
    ext_degree: usize,
    base_degree: usize,
    seed: u64,
) -> Result<FFElement> {
    let q = field.order();
    for k in 0..q {
        let x = field.element_at((seed.wrapping_add(k)) % q);
        if ff_is_normal(&x, ext_degree, base_degree)? {
            return Ok(x);
        }
    }
    Err(Error::InvalidDegree("no normal element found".into()))
}

/// Determinant by Gaussian elimination. Panics on an empty or ragged matrix.
pub fn det(rows: &[Vec<FFElement>]) -> FFElement {
    let n = rows.len();
    let field = rows[0][0].field.clone();
    let mut m: Vec<Vec<FFElement>> = rows.to_vec();
    let mut acc = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return field.zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -&acc;
        }
        let pinv = m[col][col].inv().expect("nonzero pivot");
        acc = &acc * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &pinv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    acc
}

/// Rank by row reduction.
pub fn rank(rows: &[Vec<FFElement>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<FFElement>> = rows.to_vec();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let pinv = m[r][col].inv().expect("nonzero pivot");
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &pinv;
            for c in col..ncols {
                let t = &factor * &m[r][c];
                m[i][c] = &m[i][c] - &t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Polynomials over `F_q` as coefficient vectors (low to high).
pub(crate) mod fq_poly {
    use super::FFElement;
    use std::sync::Arc;

    use super::FFField;

    pub fn trim(a: &mut Vec<FFElement>) {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }

    #[cfg(test)]
    pub fn add(a: &[FFElement], b: &[FFElement], k: &Arc<FFField>) -> Vec<FFElement> {
        let n = a.len().max(b.len());
        let z = k.zero();
        let mut out: Vec<FFElement> = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[FFElement], b: &[FFElement], k: &Arc<FFField>) -> Vec<FFElement> {
        let n = a.len().max(b.len());
        let z = k.zero();
        let mut out: Vec<FFElement> = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[FFElement], b: &[FFElement], k: &Arc<FFField>) -> Vec<FFElement> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        trim(&mut out);
        out
    }

    pub fn divrem(a: &[FFElement], b: &[FFElement], k: &Arc<FFField>) -> (Vec<FFElement>, Vec<FFElement>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let li = b[db].inv().expect("nonzero divisor");
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut q = vec![k.zero(); r.len() - db];
        while r.len() > db {
            let top = r.len() - 1;
            let c = &r[top] * &li;
            for i in 0..=db {
                let t = &c * &b[i];
                r[top - db + i] = &r[top - db + i] - &t;
            }
            q[top - db] = c;
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(
        a: &[FFElement],
        b: &[FFElement],
        k: &Arc<FFField>,
    ) -> (Vec<FFElement>, Vec<FFElement>, Vec<FFElement>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![k.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![k.one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, k);
            let s2 = sub(&s0, &mul(&q, &s1, k), k);
            let t2 = sub(&t0, &mul(&q, &t1, k), k);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let li = r0.last().expect("nonzero gcd").inv().expect("unit");
        let scale = |v: Vec<FFElement>| v.iter().map(|c| c * &li).collect::<Vec<_>>();
        (scale(r0), scale(s0), scale(t0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FFField> {
        FFField::with_degree(2, 2).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f4().modulus(), &[1, 1, 1]);
        assert_eq!(FFField::with_degree(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FFField::with_degree(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert_eq!(FFField::new(2, vec![1, 0, 1]).unwrap_err(), Error::NotIrreducible);
        assert!(FFField::new(4, vec![0, 1]).is_err());
    }

    #[test]
    fn f4_arithmetic() {
        let k = f4();
        let w = k.generator();
        let w1 = &w + &k.one();
        assert_eq!(&w * &w1, k.one());
        let f3 = FFField::prime(3).unwrap();
        assert_eq!(ff_arithmetic(&f3.from_int(2), &f3.zero(), FFOp::Inv).unwrap(), f3.from_int(2));
        let f2 = FFField::prime(2).unwrap();
        assert!((&f2.one() + &f2.one()).is_zero());
        assert_eq!(k.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(ff_arithmetic(&k.one(), &f2.one(), FFOp::Add).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn frobenius_and_trace() {
        let k = f4();
        let w = k.generator();
        assert_eq!(w.frobenius(1).unwrap(), &w + &k.one());
        assert_eq!(w.trace(1).unwrap(), k.one());
        assert!(k.one().trace(1).unwrap().is_zero());
        let f9 = FFField::with_degree(3, 2).unwrap();
        assert_eq!(f9.one().trace(1).unwrap(), f9.from_int(2));
        assert_eq!(f9.from_int(2).frobenius(1).unwrap(), f9.from_int(2));
        assert!(matches!(w.frobenius(3), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn normal_elements() {
        let k = f4();
        assert!(ff_is_normal(&k.generator(), 2, 1).unwrap());
        assert!(!ff_is_normal(&k.one(), 2, 1).unwrap());
        assert!(!ff_is_normal(&k.zero(), 2, 1).unwrap());
        assert_eq!(ff_normal_basis_element(&k, 2, 1, 0).unwrap(), k.generator());
        let f27 = FFField::with_degree(3, 3).unwrap();
        let b = ff_normal_basis_element(&f27, 3, 1, 7).unwrap();
        assert!(!b.trace(1).unwrap().is_zero());
    }

    #[test]
    fn relative_normality_uses_base_subfield() {
        // F_16 over F_4: 2 conjugates under x -> x^4
        let f16 = FFField::with_degree(2, 4).unwrap();
        let b = ff_normal_basis_element(&f16, 2, 2, 0).unwrap();
        assert!(ff_is_normal(&b, 2, 2).unwrap());
        let t = b.trace(2).unwrap();
        assert!(!t.is_zero());
    }

    #[test]
    fn det_and_rank() {
        let f3 = FFField::prime(3).unwrap();
        let m = vec![vec![f3.from_int(1), f3.from_int(2)], vec![f3.from_int(2), f3.from_int(1)]];
        // 1 - 4 = -3 = 0
        assert!(det(&m).is_zero());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn ext_gcd_bezout() {
        let k = FFField::prime(5).unwrap();
        let a: Vec<_> = [1, 0, 1].iter().map(|&c| k.from_int(c)).collect();
        let b: Vec<_> = [1, 1].iter().map(|&c| k.from_int(c)).collect();
        let (g, s, t) = fq_poly::ext_gcd(&a, &b, &k);
        assert_eq!(g, vec![k.one()]);
        let lhs = fq_poly::add(&fq_poly::mul(&s, &a, &k), &fq_poly::mul(&t, &b, &k), &k);
        assert_eq!(lhs, vec![k.one()]);
    }
}
