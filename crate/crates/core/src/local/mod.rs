//! Local fields: finite unramified extensions of `Q_p` and `F_q((t))`, and
//! totally ramified Eisenstein layers over them.

mod element;
pub mod parse;
pub mod poly;
mod ring;
mod tower;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::is_prime;

pub(crate) use element::EXACT;
pub use element::{lf_uniformizer, lf_valuation, LocalElement};
pub use poly::{lf_hensel_root, LocalPoly};
pub use ring::{max_cap, FieldKind, UnramRing, WElem};
pub use tower::{Data, Tower};

/// A base field `K`: `Q_{p^f}` or `F_{p^f}((t))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseField {
    pub kind: FieldKind,
    pub p: u64,
    pub f: usize,
    pub default_precision: i64,
}

impl BaseField {
    pub fn new(kind: FieldKind, p: u64, f: usize, default_precision: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidDegree(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::InvalidDegree("residue degree must be positive".into()));
        }
        if default_precision <= 0 {
            return Err(Error::PrecisionExhausted("precision must be positive".into()));
        }
        Ok(BaseField { kind, p, f, default_precision })
    }

    pub fn padic(p: u64, f: usize, precision: i64) -> Result<Self> {
        Self::new(FieldKind::Padic, p, f, precision)
    }

    pub fn laurent(p: u64, f: usize, precision: i64) -> Result<Self> {
        Self::new(FieldKind::Laurent, p, f, precision)
    }

    /// The field as a trivial tower whose digits reach `precision`.
    pub fn tower(&self, precision: i64) -> Result<Arc<Tower>> {
        let cap = working_cap(self.kind, self.p, precision, 1)?;
        let ring = UnramRing::new(self.kind, self.p, self.f, cap)?;
        Tower::unramified(ring)
    }
}

/// Digits of `pi_K` needed to hold `precision` units of `v_L` in a layer of
/// ramification `e`, with headroom for cancellation.
pub fn working_cap(kind: FieldKind, p: u64, precision: i64, e: usize) -> Result<u32> {
    let e = e as i64;
    let base = ((precision.max(1) + e - 1) / e).max(1);
    let cap = base + (base / 2).max(4);
    if kind == FieldKind::Padic {
        let limit = max_cap(p) as i64;
        if base > limit {
            return Err(Error::PrecisionExhausted(format!(
                "{p}-adic precision {precision} needs {base} digits, above the limit {limit}"
            )));
        }
        return Ok(cap.min(limit) as u32);
    }
    Ok(cap as u32)
}
