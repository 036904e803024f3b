//! Elements of a local field with absolute precision.
//!
//! An element is `pi_K^shift * sum_i c_i pi^i` with `c_i` in the truncated
//! unramified ring, known modulo `pi^prec` (valuations in units of `v_L`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::FFElement;

use super::ring::{FieldKind, WElem};
use super::tower::{Data, Tower};

/// Precision requested for exact constants; clamped to the tower cap.
pub(crate) const EXACT: i64 = i64::MAX / 8;

#[derive(Clone)]
pub struct LocalElement {
    tower: Arc<Tower>,
    shift: i64,
    data: Data,
    prec: i64,
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_element(self))
    }
}

impl LocalElement {
    /// Builds `pi_K^shift * data + O(pi^prec)` and normalizes it.
    pub fn from_parts(tower: &Arc<Tower>, shift: i64, data: Data, prec: i64) -> Self {
        let e = tower.e() as i64;
        let prec = prec.min(e * shift + tower.cap_prec());
        let rel = prec - e * shift;
        if rel <= 0 {
            return Self::zero(tower, prec);
        }
        let data = tower.dtruncate(&data, rel);
        match tower.dval(&data) {
            None => Self::zero(tower, prec),
            Some(v) => {
                let k = v / e;
                let (shift, data) = if k > 0 { (shift + k, tower.ddiv(&data, k)) } else { (shift, data) };
                LocalElement { tower: tower.clone(), shift, data, prec }
            }
        }
    }

    /// Zero known modulo `pi^prec`.
    pub fn zero(tower: &Arc<Tower>, prec: i64) -> Self {
        let e = tower.e() as i64;
        let prec = prec.min(EXACT);
        LocalElement { tower: tower.clone(), shift: prec.div_euclid(e), data: tower.dzero(), prec }
    }

    pub fn one(tower: &Arc<Tower>) -> Self {
        Self::from_parts(tower, 0, tower.done(), EXACT)
    }

    pub fn from_int(tower: &Arc<Tower>, n: i64) -> Self {
        if tower.kind() == FieldKind::Laurent {
            return Self::from_unram(tower, &tower.ring().from_int(n));
        }
        // keep the p-part in the shift so large |n| survives a small cap
        if n == 0 {
            return Self::zero(tower, EXACT);
        }
        let p = tower.p() as i64;
        let (mut m, mut k) = (n, 0i64);
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let mut d = tower.dzero();
        d[0] = tower.ring().from_int(m);
        Self::from_parts(tower, k, d, EXACT)
    }

    /// An element of the unramified ring `W_F`.
    pub fn from_unram(tower: &Arc<Tower>, w: &[i64]) -> Self {
        let mut d = tower.dzero();
        d[0] = w.to_vec();
        Self::from_parts(tower, 0, d, EXACT)
    }

    /// The Teichmüller-free lift of a residue with coordinates in `[0, p)`.
    pub fn lift_residue(tower: &Arc<Tower>, r: &FFElement) -> Self {
        Self::from_unram(tower, &tower.ring().lift(r))
    }

    /// The uniformizer `pi` of the Eisenstein layer.
    pub fn pi(tower: &Arc<Tower>) -> Self {
        if tower.e() == 1 {
            return Self::base_uniformizer(tower);
        }
        let mut d = tower.dzero();
        d[1] = tower.ring().one();
        Self::from_parts(tower, 0, d, EXACT)
    }

    /// `p` or `t`.
    pub fn base_uniformizer(tower: &Arc<Tower>) -> Self {
        Self::from_parts(tower, 1, tower.done(), EXACT)
    }

    /// The generator `y` of the unramified layer.
    pub fn gen(tower: &Arc<Tower>) -> Self {
        Self::from_unram(tower, &tower.ring().gen())
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    /// `v_L`, or `None` if the element is zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        self.tower.dval(&self.data).map(|v| v + self.tower.e() as i64 * self.shift)
    }

    /// `v_L`, failing when the element is indistinguishable from zero.
    pub fn val(&self) -> Result<i64> {
        self.valuation().ok_or_else(|| Error::PrecisionExhausted(format!("element vanishes modulo pi^{}", self.prec)))
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower)
    }

    /// Equality at the lower of the two precisions.
    pub fn eq_mod(&self, other: &Self) -> bool {
        self.same_field(other) && (self - other).is_zero()
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        Self::from_parts(&self.tower, self.shift, self.data.clone(), self.prec.min(prec))
    }

    /// Text form at precision `min(N, v + 2e)`, so the printed digits do not
    /// depend on the working precision once it is large enough.
    pub fn display_stable(&self) -> String {
        let v = self.valuation().unwrap_or(0);
        self.with_precision(v + 2 * self.tower.e() as i64).to_string()
    }

    /// The same representative, treated as exact.
    pub fn exact(&self) -> Self {
        Self::from_parts(&self.tower, self.shift, self.data.clone(), EXACT)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        let t = &self.tower;
        let s = self.shift.min(other.shift);
        let a = t.dscale_up(&self.data, self.shift - s);
        let b = t.dscale_up(&other.data, other.shift - s);
        Ok(Self::from_parts(t, s, t.dadd(&a, &b), self.prec.min(other.prec)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LocalElement {
            tower: self.tower.clone(),
            shift: self.shift,
            data: self.tower.dneg(&self.data),
            prec: self.prec,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        let vx = self.valuation().unwrap_or(self.prec);
        let vy = other.valuation().unwrap_or(other.prec);
        let prec = (self.prec + vy).min(other.prec + vx);
        let t = &self.tower;
        Ok(Self::from_parts(t, self.shift + other.shift, t.dmul(&self.data, &other.data), prec))
    }

    pub fn inv(&self) -> Result<Self> {
        let t = &self.tower;
        let e = t.e() as i64;
        let vx = self.valuation().ok_or(Error::DivisionByZero)?;
        let vd = vx - e * self.shift;
        let pinv = t.dpow(t.pi_inv_data(), vd as u64);
        // x = pi_K^shift * pi^vd * u, and pi^-vd = pi_K^-vd * pinv
        let u = t.ddiv(&t.dmul(&self.data, &pinv), vd);
        let uinv = t.dinv_unit(&u)?;
        let shift = -self.shift - vd;
        let prec = (self.prec - 2 * vx).min(e * shift + t.cap_prec() - vd);
        Ok(Self::from_parts(t, shift, t.dmul(&pinv, &uinv), prec))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut result = Self::one(&self.tower);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(result)
    }

    /// Multiplication by `pi_K^k`.
    pub fn scale_base(&self, k: i64) -> Self {
        let e = self.tower.e() as i64;
        Self::from_parts(&self.tower, self.shift + k, self.data.clone(), self.prec + e * k)
    }

    /// The Frobenius `phi^j` on coefficients, fixing `pi`.
    pub fn frob(&self, j: usize) -> Self {
        LocalElement {
            tower: self.tower.clone(),
            shift: self.shift,
            data: self.tower.dfrob(&self.data, j),
            prec: self.prec,
        }
    }

    /// Residue of `x / pi^{v(x)}`.
    pub fn leading_residue(&self) -> Result<FFElement> {
        let t = &self.tower;
        let r = t.ring();
        let e = t.e() as i64;
        let v = self.val()? - e * self.shift;
        let i0 = v.rem_euclid(e) as usize;
        let c = &self.data[i0];
        let kp = r.val(c).expect("leading coefficient is nonzero");
        let unit = r.residue(&r.div_exact(c, kp));
        let k = self.shift + kp as i64;
        unit.try_mul(&t.w0_residue().powi(-k)?)
    }

    /// Image in the residue field of an integral element.
    pub fn residue(&self) -> Result<FFElement> {
        let field = self.tower.ring().residue_field().clone();
        match self.valuation() {
            Some(v) if v < 0 => Err(Error::NotInIdeal(0)),
            Some(0) => self.leading_residue(),
            Some(_) => Ok(field.zero()),
            None if self.prec >= 1 => Ok(field.zero()),
            None => Err(Error::PrecisionExhausted("residue of an unknown element".into())),
        }
    }

    /// Coefficient data scaled to shift 0 when the element is integral at the
    /// base level, i.e. `x = sum_i c_i pi^i` with `c_i` in `W_F`.
    pub fn integral_data(&self) -> Result<Data> {
        if self.shift < 0 {
            return Err(Error::NotInIdeal(0));
        }
        Ok(self.tower.dscale_up(&self.data, self.shift))
    }

    /// Coefficients `c_i in W_F` (as unramified ring elements) of
    /// `x = pi_K^shift * sum_i c_i pi^i`.
    pub fn coefficient(&self, i: usize) -> &WElem {
        &self.data[i]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&LocalElement> for &LocalElement {
            type Output = LocalElement;
            fn $method(self, rhs: &LocalElement) -> LocalElement {
                self.$inner(rhs).expect("operands must lie in the same field")
            }
        }
        impl $trait<LocalElement> for LocalElement {
            type Output = LocalElement;
            fn $method(self, rhs: LocalElement) -> LocalElement {
                (&self).$inner(&rhs).expect("operands must lie in the same field")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement::neg(self)
    }
}

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        LocalElement::neg(&self)
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.eq_mod(other)
    }
}

/// `v_L(x)`.
pub fn lf_valuation(x: &LocalElement) -> Result<i64> {
    x.val()
}

/// The chosen uniformizer of the field.
pub fn lf_uniformizer(tower: &Arc<Tower>) -> LocalElement {
    LocalElement::pi(tower)
}
