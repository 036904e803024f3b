//! Polynomials with local-field coefficients and Hensel lifting.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::element::{LocalElement, EXACT};
use super::tower::Tower;

/// Coefficients from the constant term upwards.
pub type LocalPoly = Vec<LocalElement>;

pub fn eval(poly: &[LocalElement], x: &LocalElement) -> LocalElement {
    let mut acc = LocalElement::zero(x.tower(), EXACT);
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn derivative(poly: &[LocalElement]) -> LocalPoly {
    poly.iter().enumerate().skip(1).map(|(i, c)| c * &LocalElement::from_int(c.tower(), i as i64)).collect()
}

/// `g(x + c)`.
pub fn taylor_shift(poly: &[LocalElement], c: &LocalElement) -> LocalPoly {
    let mut out: LocalPoly = poly.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &out[j + 1] * c;
            out[j] = &out[j] + &t;
        }
    }
    out
}

pub fn add(a: &[LocalElement], b: &[LocalElement], tower: &Arc<Tower>) -> LocalPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => LocalElement::zero(tower, EXACT),
        })
        .collect()
}

pub fn mul(a: &[LocalElement], b: &[LocalElement], tower: &Arc<Tower>) -> LocalPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![LocalElement::zero(tower, EXACT); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Embeds an element of a degree-one base tower (prime base field) into a
/// tower over it. Valuations scale by the target ramification index.
pub fn embed_base(x: &LocalElement, target: &Arc<Tower>) -> Result<LocalElement> {
    let src = x.tower();
    if src.degree() != 1 || src.kind() != target.kind() || src.p() != target.p() {
        return Err(Error::FieldMismatch);
    }
    let ring = target.ring();
    let mut d = target.dzero();
    d[0] = ring.from_components(&[x.data()[0].clone()]);
    let e = target.e() as i64;
    let prec = x.precision().saturating_mul(e).min(EXACT);
    Ok(LocalElement::from_parts(target, x.shift(), d, prec))
}

/// Newton lift of a root of `g` from `x0`, under `v(g(x0)) > 2 v(g'(x0))`.
///
/// The result carries the a posteriori precision
/// `v(g(x)) - v(g'(x))` of the final iterate.
pub fn lf_hensel_root(g: &[LocalElement], x0: &LocalElement) -> Result<LocalElement> {
    let dg = derivative(g);
    let vd = eval(&dg, x0)
        .valuation()
        .ok_or_else(|| Error::HenselFailure("derivative vanishes at the approximation".into()))?;
    let g0 = eval(g, x0);
    if let Some(vg) = g0.valuation() {
        if vg <= 2 * vd {
            return Err(Error::HenselFailure(format!("v(g(x0)) = {vg} is not above 2 v(g'(x0)) = {}", 2 * vd)));
        }
    }
    let mut x = x0.exact();
    for _ in 0..128 {
        let gx = eval(g, &x);
        if gx.is_zero() {
            let bound = gx.precision() - vd;
            return Ok(x.with_precision(bound));
        }
        let step = gx.try_div(&eval(&dg, &x))?;
        let next = (&x - &step).exact();
        if next.eq_mod(&x) {
            let bound = gx.valuation().unwrap_or(gx.precision()) - vd;
            return Ok(x.with_precision(bound));
        }
        x = next;
    }
    Err(Error::PrecisionExhausted("Newton iteration did not stabilise".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::ring::{FieldKind, UnramRing};

    #[test]
    fn sqrt_of_minus_one_in_q5() {
        let ring = UnramRing::new(FieldKind::Padic, 5, 1, 12).unwrap();
        let t = Tower::unramified(ring).unwrap();
        let g = vec![LocalElement::from_int(&t, 1), LocalElement::from_int(&t, 0), LocalElement::from_int(&t, 1)];
        let r = lf_hensel_root(&g, &LocalElement::from_int(&t, 2)).unwrap();
        assert!(eval(&g, &r).is_zero());
        assert!(r.precision() >= 10);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let ring = UnramRing::new(FieldKind::Padic, 3, 1, 10).unwrap();
        let t = Tower::unramified(ring).unwrap();
        let g: LocalPoly = [3, -1, 0, 2].iter().map(|&c| LocalElement::from_int(&t, c)).collect();
        let c = LocalElement::from_int(&t, 4);
        let h = taylor_shift(&g, &c);
        for x in 0..5 {
            let xe = LocalElement::from_int(&t, x);
            assert!(eval(&h, &xe).eq_mod(&eval(&g, &(&xe + &c))));
        }
    }
}
