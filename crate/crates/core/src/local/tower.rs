//! A totally ramified Eisenstein layer over an unramified ring:
//! `O_L / (pi_K^K) = W_F[pi] / (E(pi), pi_K^K)`.
//!
//! Data vectors hold the `e` coefficients of `1, pi, ..., pi^{e-1}`; all
//! operations here are exact in the finite ring. Precision bookkeeping lives
//! in [`LocalElement`](super::LocalElement).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::FFElement;

use super::ring::{FieldKind, UnramRing, WElem};

pub type Data = Vec<WElem>;

pub struct Tower {
    ring: UnramRing,
    e: usize,
    eisenstein: Vec<WElem>,
    // pi^{-1} = pi_K^{-1} * pi_inv
    pi_inv: Data,
    w0_residue: FFElement,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("kind", &self.ring.kind())
            .field("p", &self.ring.p())
            .field("f", &self.ring.degree())
            .field("e", &self.e)
            .field("cap", &self.ring.cap())
            .finish()
    }
}

impl Tower {
    /// `eisenstein` lists `a_0, ..., a_{e-1}` of the monic polynomial
    /// `x^e + a_{e-1} x^{e-1} + ... + a_0`.
    pub fn new(ring: UnramRing, eisenstein: Vec<WElem>) -> Result<Arc<Self>> {
        let e = eisenstein.len();
        if e == 0 {
            return Err(Error::InvalidDegree("Eisenstein degree must be positive".into()));
        }
        for (i, a) in eisenstein.iter().enumerate() {
            let v = ring.val(a);
            let ok = if i == 0 { v == Some(1) } else { v.is_none_or(|v| v >= 1) };
            if !ok {
                return Err(Error::Unsupported(format!("coefficient {i} violates the Eisenstein condition")));
            }
        }
        // w0 = pi^e / pi_K = -(a_0 + a_1 pi + ...) / pi_K, a unit
        let w0: Data = eisenstein.iter().map(|a| ring.neg(&ring.div_exact(a, 1))).collect();
        let w0_residue = ring.residue(&w0[0]);
        let mut t = Tower { ring, e, eisenstein, pi_inv: Vec::new(), w0_residue };
        let w0_inv = t.dinv_unit(&w0)?;
        let mut pi_pow = t.dzero();
        pi_pow[0] = t.ring.one();
        for _ in 0..e - 1 {
            pi_pow = t.dmul_pi(&pi_pow);
        }
        t.pi_inv = t.dmul(&pi_pow, &w0_inv);
        Ok(Arc::new(t))
    }

    /// The trivial layer `e = 1`, `E(x) = x - pi_K`.
    pub fn unramified(ring: UnramRing) -> Result<Arc<Self>> {
        let a0 = ring.neg(&ring.base_uniformizer_pow(1));
        Self::new(ring, vec![a0])
    }

    pub fn ring(&self) -> &UnramRing {
        &self.ring
    }

    pub fn kind(&self) -> FieldKind {
        self.ring.kind()
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.ring.degree()
    }

    pub fn degree(&self) -> usize {
        self.e * self.f()
    }

    pub fn eisenstein(&self) -> &[WElem] {
        &self.eisenstein
    }

    /// Largest absolute precision representable at shift 0.
    pub fn cap_prec(&self) -> i64 {
        self.e as i64 * self.ring.cap() as i64
    }

    pub(crate) fn w0_residue(&self) -> &FFElement {
        &self.w0_residue
    }

    pub(crate) fn pi_inv_data(&self) -> &Data {
        &self.pi_inv
    }

    pub fn dzero(&self) -> Data {
        vec![self.ring.zero(); self.e]
    }

    pub fn done(&self) -> Data {
        let mut d = self.dzero();
        d[0] = self.ring.one();
        d
    }

    pub fn dadd(&self, a: &Data, b: &Data) -> Data {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn dsub(&self, a: &Data, b: &Data) -> Data {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn dneg(&self, a: &Data) -> Data {
        a.iter().map(|x| self.ring.neg(x)).collect()
    }

    fn dmul_pi(&self, a: &Data) -> Data {
        let e = self.e;
        let top = a[e - 1].clone();
        let mut out = self.dzero();
        out[1..e].clone_from_slice(&a[..e - 1]);
        if !self.ring.is_zero(&top) {
            for (o, g) in out.iter_mut().zip(&self.eisenstein) {
                *o = self.ring.sub(o, &self.ring.mul(&top, g));
            }
        }
        out
    }

    pub fn dmul(&self, a: &Data, b: &Data) -> Data {
        let e = self.e;
        let r = &self.ring;
        let mut prod = vec![r.zero(); 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                prod[i + j] = r.add(&prod[i + j], &r.mul(x, y));
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = std::mem::replace(&mut prod[k], r.zero());
            if r.is_zero(&c) {
                continue;
            }
            for i in 0..e {
                prod[k - e + i] = r.sub(&prod[k - e + i], &r.mul(&c, &self.eisenstein[i]));
            }
        }
        prod.truncate(e);
        prod
    }

    /// `min_i (e * v(c_i) + i)`, `None` for zero.
    pub fn dval(&self, a: &Data) -> Option<i64> {
        a.iter().enumerate().filter_map(|(i, c)| self.ring.val(c).map(|v| self.e as i64 * v as i64 + i as i64)).min()
    }

    pub fn dscale_up(&self, a: &Data, k: i64) -> Data {
        if k >= self.ring.cap() as i64 {
            return self.dzero();
        }
        a.iter().map(|c| self.ring.scale_up(c, k as u32)).collect()
    }

    pub fn ddiv(&self, a: &Data, k: i64) -> Data {
        a.iter().map(|c| self.ring.div_exact(c, k as u32)).collect()
    }

    /// Drops every term of valuation `>= rel`.
    pub fn dtruncate(&self, a: &Data, rel: i64) -> Data {
        let e = self.e as i64;
        a.iter()
            .enumerate()
            .map(|(i, c)| {
                let digits = (rel - i as i64 + e - 1).div_euclid(e);
                self.ring.truncate(c, digits)
            })
            .collect()
    }

    pub fn dinv_unit(&self, a: &Data) -> Result<Data> {
        let r0 = self.ring.residue(&a[0]);
        let z0 = self.ring.lift(&r0.inv()?);
        let mut z = self.dzero();
        z[0] = z0;
        let mut two = self.dzero();
        two[0] = self.ring.from_int(2);
        let mut digits = 1i64;
        while digits < self.cap_prec() {
            let t = self.dsub(&two, &self.dmul(a, &z));
            z = self.dmul(&z, &t);
            digits *= 2;
        }
        Ok(z)
    }

    pub fn dfrob(&self, a: &Data, j: usize) -> Data {
        a.iter().map(|c| self.ring.frob(c, j)).collect()
    }

    pub fn dpow(&self, a: &Data, mut n: u64) -> Data {
        let mut result = self.done();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.dmul(&result, &base);
            }
            base = self.dmul(&base, &base);
            n >>= 1;
        }
        result
    }
}
