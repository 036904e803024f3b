use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{fq_poly, poly_eval, FFElement, FFField};
use crate::local::parse::parse_polynomial;
use crate::local::poly::eval;
use crate::local::{max_cap, working_cap, BaseField, FieldKind, LocalElement, LocalPoly, Tower, UnramRing, WElem};

use super::ExtensionTower;

/// The substitution turning the input polynomial `g` into a monic integral
/// model `h`; a root `r` of `h` gives the root `x` of `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// `h = g`, `x = r`.
    Identity,
    /// `h = x^d g(1/x) / g(0)`, `x = 1/r`.
    Reciprocal,
    /// `h = pi_K^{kd} g(x / pi_K^k)`, `x = r / pi_K^k`.
    Scale { k: u32 },
}

const MAX_SCALE: u32 = 8;

/// Builds `L = K[x]/(g)` at the base field's default precision.
pub fn ext_create(base: &BaseField, poly: &str) -> Result<ExtensionTower> {
    ext_create_with_precision(base, poly, base.default_precision)
}

pub fn ext_create_with_precision(base: &BaseField, poly: &str, precision: i64) -> Result<ExtensionTower> {
    if base.f != 1 {
        return Err(Error::Unsupported("extensions are built over a base with prime residue field".into()));
    }
    let parse_cap = match base.kind {
        FieldKind::Padic => max_cap(base.p),
        FieldKind::Laurent => working_cap(base.kind, base.p, 2 * precision, 1)?,
    };
    let parse_ring = UnramRing::new(base.kind, base.p, 1, parse_cap)?;
    let k = Tower::unramified(parse_ring)?;
    let g = parse_polynomial(poly, &k)?;
    let d = g.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::InvalidDegree("polynomial is constant".into()));
    }
    if !g[d].eq_mod(&LocalElement::one(&k)) {
        return Err(Error::Parse("polynomial must be monic".into()));
    }
    let mut models = vec![Model::Identity, Model::Reciprocal];
    models.extend((1..=MAX_SCALE).map(|k| Model::Scale { k }));
    for model in models {
        let Some(h) = apply_model(&g, &model, &k)? else { continue };
        match build(base, precision, &h, &model, poly) {
            Err(Error::Unsupported(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Unsupported("no integral Eisenstein-compatible model found".into()))
}

fn is_integral(c: &LocalElement) -> bool {
    c.valuation().is_none_or(|v| v >= 0)
}

fn apply_model(g: &LocalPoly, model: &Model, k: &Arc<Tower>) -> Result<Option<LocalPoly>> {
    let d = g.len() - 1;
    let h: LocalPoly = match model {
        Model::Identity => g.clone(),
        Model::Reciprocal => {
            if g[0].is_zero() {
                return Ok(None);
            }
            let lead = g[0].inv()?;
            g.iter().rev().map(|c| c * &lead).collect()
        }
        Model::Scale { k: s } => {
            let pk = LocalElement::base_uniformizer(k);
            g.iter()
                .enumerate()
                .map(|(i, c)| c * &pk.pow((*s as i64) * (d - i) as i64).expect("positive power"))
                .collect()
        }
    };
    Ok(h.iter().all(is_integral).then_some(h))
}

/// `W_F`-polynomial arithmetic (coefficients low to high).
struct WPoly<'a> {
    ring: &'a UnramRing,
}

impl WPoly<'_> {
    fn trim(&self, mut a: Vec<WElem>) -> Vec<WElem> {
        while a.len() > 1 && a.last().is_some_and(|c| self.ring.is_zero(c)) {
            a.pop();
        }
        a
    }

    fn add(&self, a: &[WElem], b: &[WElem]) -> Vec<WElem> {
        let r = self.ring;
        let n = a.len().max(b.len());
        let z = r.zero();
        self.trim((0..n).map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn sub(&self, a: &[WElem], b: &[WElem]) -> Vec<WElem> {
        let r = self.ring;
        let n = a.len().max(b.len());
        let z = r.zero();
        self.trim((0..n).map(|i| r.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn mul(&self, a: &[WElem], b: &[WElem]) -> Vec<WElem> {
        let r = self.ring;
        let mut out = vec![r.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = r.add(&out[i + j], &r.mul(x, y));
            }
        }
        self.trim(out)
    }

    /// Division by a monic polynomial.
    fn divrem(&self, a: &[WElem], m: &[WElem]) -> (Vec<WElem>, Vec<WElem>) {
        let r = self.ring;
        let dm = m.len() - 1;
        let mut rem = a.to_vec();
        if rem.len() <= dm {
            return (vec![r.zero()], rem);
        }
        let mut q = vec![r.zero(); rem.len() - dm];
        for top in (dm..rem.len()).rev() {
            let c = rem[top].clone();
            if r.is_zero(&c) {
                continue;
            }
            q[top - dm] = c.clone();
            for i in 0..=dm {
                rem[top - dm + i] = r.sub(&rem[top - dm + i], &r.mul(&c, &m[i]));
            }
        }
        rem.truncate(dm.max(1));
        (self.trim(q), self.trim(rem))
    }

    fn lift(&self, a: &[FFElement]) -> Vec<WElem> {
        if a.is_empty() {
            return vec![self.ring.zero()];
        }
        a.iter().map(|c| self.ring.lift(c)).collect()
    }

    /// `a(x + c)`.
    fn shift(&self, a: &[WElem], c: &WElem) -> Vec<WElem> {
        let r = self.ring;
        let mut out = a.to_vec();
        let n = out.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = r.mul(&out[j + 1], c);
                out[j] = r.add(&out[j], &t);
            }
        }
        out
    }
}

fn divisors(d: usize) -> Vec<usize> {
    (1..=d).filter(|k| d.is_multiple_of(*k)).collect()
}

/// A root of `hbar` generating `F_{p^f}` for the least possible `f`.
fn residue_root(hbar: &[FFElement], p: u64, d: usize) -> Result<Option<(usize, FFElement)>> {
    for f in divisors(d) {
        let field = FFField::with_degree(p, f)?;
        let lifted: Vec<FFElement> = hbar.iter().map(|c| field.from_coeffs(c.coeffs())).collect();
        let proper: Vec<usize> = divisors(f).into_iter().filter(|&s| s < f).collect();
        for x in field.elements() {
            if proper.iter().any(|&s| x.in_subfield(s)) {
                continue;
            }
            if poly_eval(&lifted, &x).is_zero() {
                return Ok(Some((f, x)));
            }
        }
    }
    Ok(None)
}

fn build(base: &BaseField, precision: i64, h: &LocalPoly, model: &Model, defining: &str) -> Result<ExtensionTower> {
    let p = base.p;
    let d = h.len() - 1;
    let fp = FFField::prime(p)?;
    let hbar: Vec<FFElement> =
        h.iter().map(|c| c.residue().map(|r| fp.from_coeffs(r.coeffs()))).collect::<Result<_>>()?;
    let Some((f, xi)) = residue_root(&hbar, p, d)? else {
        return Err(Error::ReduciblePolynomial("no residue root in F_{p^f} for f | d".into()));
    };
    let e = d / f;
    let field = xi.field().clone();
    // phi = minimal polynomial of xi; require hbar = phi^e
    let mut phi = vec![field.one()];
    for k in 0..f {
        phi = fq_poly::mul(&phi, &[-&xi.frob_pow(k), field.one()], &field);
    }
    let mut phi_e = vec![field.one()];
    for _ in 0..e {
        phi_e = fq_poly::mul(&phi_e, &phi, &field);
    }
    let hbar_f: Vec<FFElement> = hbar.iter().map(|c| field.from_coeffs(c.coeffs())).collect();
    if phi_e != hbar_f {
        return Err(Error::ReduciblePolynomial("reduction is not a power of an irreducible polynomial".into()));
    }
    if d == 1 {
        return build_trivial(base, precision, h, model, defining);
    }
    let cap = working_cap(base.kind, p, precision, e)?;
    let ring = UnramRing::new(base.kind, p, f, cap)?;
    let wp = WPoly { ring: &ring };
    let hw: Vec<WElem> = h.iter().map(|c| to_unram(c, &ring)).collect();
    let xi_hat = ring.lift(&xi);
    if e == 1 {
        let theta = ring.hensel_simple_root(&hw, &xi_hat)?;
        let tower = Tower::unramified(ring)?;
        let root = model_root(&LocalElement::from_unram(&tower, &theta), model)?;
        return ExtensionTower::assemble(base.clone(), precision, tower, model.clone(), defining.into(), root);
    }
    // Hensel-factor h = A * B with A = (x - xi)^e mod p
    let linear = [-&xi, field.one()];
    let mut abar = vec![field.one()];
    for _ in 0..e {
        abar = fq_poly::mul(&abar, &linear, &field);
    }
    let (bbar, rbar) = fq_poly::divrem(&hbar_f, &abar, &field);
    debug_assert!(rbar.is_empty());
    let (_, s, t) = fq_poly::ext_gcd(&abar, &bbar, &field);
    let (s, t) = (wp.lift(&s), wp.lift(&t));
    let mut a = wp.lift(&abar);
    let mut b = wp.lift(&bbar);
    for _ in 0..cap {
        let delta = wp.sub(&hw, &wp.mul(&a, &b));
        if delta.iter().all(|c| ring.is_zero(c)) {
            break;
        }
        let (q, da) = wp.divrem(&wp.mul(&t, &delta), &a);
        let db = wp.add(&wp.mul(&s, &delta), &wp.mul(&q, &b));
        a = wp.add(&a, &da);
        b = wp.add(&b, &db);
    }
    let big_e = wp.shift(&a, &xi_hat);
    check_newton_polygon(&ring, &big_e)?;
    let tower = Tower::new(ring, big_e[..e].to_vec())?;
    check_separable(&tower)?;
    let pi = LocalElement::pi(&tower);
    let r = &pi + &LocalElement::from_unram(&tower, &xi_hat);
    let root = model_root(&r, model)?;
    ExtensionTower::assemble(base.clone(), precision, tower, model.clone(), defining.into(), root)
}

fn build_trivial(
    base: &BaseField,
    precision: i64,
    h: &LocalPoly,
    model: &Model,
    defining: &str,
) -> Result<ExtensionTower> {
    let cap = working_cap(base.kind, base.p, precision, 1)?;
    let ring = UnramRing::new(base.kind, base.p, 1, cap)?;
    let c = to_unram(&h[0], &ring);
    let tower = Tower::unramified(ring)?;
    let r = -LocalElement::from_unram(&tower, &c);
    let root = model_root(&r, model)?;
    ExtensionTower::assemble(base.clone(), precision, tower, model.clone(), defining.into(), root)
}

/// Re-reads an integral base element in the unramified ring `ring`.
fn to_unram(c: &LocalElement, ring: &UnramRing) -> WElem {
    if c.is_zero() {
        return ring.zero();
    }
    let w = ring.from_components(&[c.data()[0].clone()]);
    ring.scale_up(&w, c.shift().clamp(0, ring.cap() as i64) as u32)
}

fn check_newton_polygon(ring: &UnramRing, big_e: &[WElem]) -> Result<()> {
    let e = big_e.len() - 1;
    let Some(v0) = ring.val(&big_e[0]) else {
        return Err(Error::ReduciblePolynomial("x divides the shifted polynomial".into()));
    };
    if v0 == 1 {
        return Ok(());
    }
    // single segment from (0, v0) to (e, 0) iff every point lies on or above it
    let single = (1..e).all(|i| ring.val(&big_e[i]).is_none_or(|v| (v as usize) * e >= (v0 as usize) * (e - i)));
    if !single {
        return Err(Error::ReduciblePolynomial("Newton polygon has several segments".into()));
    }
    if (v0 as usize).is_multiple_of(e) {
        // x = pi_K^s z: the residual polynomial splits off distinct roots
        let s = v0 as usize / e;
        let residual: Vec<FFElement> = big_e
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (s * (e - i)) as u32;
                match ring.val(c) {
                    Some(v) if v >= k => ring.residue(&ring.div_exact(c, k)),
                    _ => ring.residue_field().zero(),
                }
            })
            .collect();
        let roots = ring.residue_field().roots_of(&residual);
        if roots.len() > 1 {
            return Err(Error::ReduciblePolynomial("residual polynomial has distinct roots".into()));
        }
    }
    Err(Error::Unsupported(format!("totally ramified of slope {v0}/{e}; no Eisenstein translate found")))
}

fn check_separable(tower: &Arc<Tower>) -> Result<()> {
    let e = tower.e();
    let mut deriv: LocalPoly = tower
        .eisenstein()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| &LocalElement::from_unram(tower, a) * &LocalElement::from_int(tower, i as i64))
        .collect();
    deriv.push(LocalElement::from_int(tower, e as i64));
    if eval(&deriv, &LocalElement::pi(tower)).is_zero() {
        return Err(Error::Inseparable);
    }
    Ok(())
}

fn model_root(r: &LocalElement, model: &Model) -> Result<LocalElement> {
    match model {
        Model::Identity => Ok(r.clone()),
        Model::Reciprocal => r.inv(),
        Model::Scale { k } => Ok(r.scale_base(-(*k as i64))),
    }
}

/// Exact defining polynomial over the field's own tower.
#[cfg(test)]
pub(crate) fn defining_over(ext: &ExtensionTower) -> Result<LocalPoly> {
    let g = parse_polynomial(ext.defining_polynomial(), ext.tower())?;
    Ok(g.into_iter().map(|c| c.with_precision(crate::local::EXACT)).collect())
}
