//! Explicit candidates for free generators of `P_L^n` over `O_K[G]`.
//!
//! Every function returns the candidate together with the choices made on
//! the way; certification is left to [`gm_is_free_generator`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{
    ext_automorphisms, ext_compositum, ext_ramification, ext_tame_kummer_uniformizer, ext_trace,
    fixed_field_uniformizer, ExtensionTower, Galois, RamificationData,
};
use crate::ff::ff_normal_basis_element;
use crate::group::{grp_complements, grp_doubly_split_with, FiniteGroup, SplitData, Subgroup};
use crate::local::LocalElement;
use crate::module::{gm_is_free_generator, FreenessCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Unramified,
    TotTame,
    TotWeakP,
    TotWeak,
    DoublySplit,
    TraceDescent,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionTrace {
    pub method: Method,
    pub n: i64,
    /// `|W| = p^r`.
    pub r: u32,
    /// `|C|`.
    pub c: usize,
    /// Bezout pair with `a p^r + b c = 1`, `0 <= a < c`.
    pub a: i64,
    pub b: i64,
    pub u: Vec<i64>,
    pub split: Option<SplitData>,
    pub pi_s: Option<String>,
    pub pi_t: Option<String>,
    pub beta: Option<String>,
    /// Intermediate fields, as fixed fields of the recorded subgroups.
    pub fields: Vec<String>,
    /// Set when the direct decomposition failed and the construction went
    /// through the unramified compositum instead.
    pub fallback: bool,
    pub inner: Option<Box<ConstructionTrace>>,
}

impl ConstructionTrace {
    fn new(method: Method, n: i64) -> Self {
        ConstructionTrace {
            method,
            n,
            r: 0,
            c: 1,
            a: 0,
            b: 1,
            u: Vec::new(),
            split: None,
            pi_s: None,
            pi_t: None,
            beta: None,
            fields: Vec::new(),
            fallback: false,
            inner: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub element: LocalElement,
    pub trace: ConstructionTrace,
}

impl Candidate {
    pub fn certify(&self, ext: &ExtensionTower, gal: &Galois) -> Result<FreenessCertificate> {
        gm_is_free_generator(ext, gal, &self.element, self.trace.n)
    }
}

/// `(a, b)` with `a x + b c = 1` and `0 <= a < c`.
pub fn bezout(x: i64, c: i64) -> Result<(i64, i64)> {
    let (mut r0, mut r1, mut s0, mut s1) = (x, c, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::WildDegree(c as u64));
    }
    let a = s0.rem_euclid(c);
    Ok((a, (1 - a * x) / c))
}

fn p_exponent(p: u64, mut k: usize) -> u32 {
    let mut r = 0;
    while k > 1 && k.is_multiple_of(p as usize) {
        k /= p as usize;
        r += 1;
    }
    r
}

fn require_weak(ram: &RamificationData) -> Result<()> {
    if ram.weakly_ramified {
        Ok(())
    } else {
        Err(Error::NotWeaklyRamified)
    }
}

fn require_exponent(n: i64, modulus: usize) -> Result<()> {
    if n.rem_euclid(modulus as i64) == 1 % modulus as i64 {
        Ok(())
    } else {
        Err(Error::BadExponent { n, modulus })
    }
}

fn units(u: &[i64], len: usize) -> Vec<i64> {
    (0..len).map(|i| u.get(i).copied().unwrap_or(1)).collect()
}

/// `sum u_i x^i`.
fn unit_poly(ext: &ExtensionTower, u: &[i64], x: &LocalElement) -> LocalElement {
    let mut acc = LocalElement::zero(ext.tower(), crate::local::EXACT);
    let mut pw = ext.one();
    for &c in u {
        acc = &acc + &(&ext.from_int(c) * &pw);
        pw = &pw * x;
    }
    acc
}

/// Lift of a normal element of the residue extension.
fn residue_normal_lift(ext: &ExtensionTower, seed: u64) -> Result<LocalElement> {
    if ext.f() == 1 {
        return Ok(ext.one());
    }
    let field = ext.tower().ring().residue_field().clone();
    let x = ff_normal_basis_element(&field, ext.f(), 1, seed)?;
    Ok(LocalElement::lift_residue(ext.tower(), &x))
}

pub fn gen_unramified(ext: &ExtensionTower, seed: u64) -> Result<Candidate> {
    if ext.e() != 1 {
        return Err(Error::Unsupported("extension is ramified".into()));
    }
    let beta = residue_normal_lift(ext, seed)?;
    let mut trace = ConstructionTrace::new(Method::Unramified, 0);
    trace.beta = Some(beta.display_stable());
    Ok(Candidate { element: beta, trace })
}

/// `pi^n (u_0 + u_1 pi + ... + u_{e-1} pi^{e-1})` with `pi^e / pi_K` in `K`.
pub fn gen_tot_tame(ext: &ExtensionTower, n: i64, u: &[i64]) -> Result<Candidate> {
    let e = ext.e();
    if ext.f() != 1 {
        return Err(Error::NotTotallyRamified);
    }
    let pi = ext_tame_kummer_uniformizer(ext, &ext.pi(), e)?;
    let u = units(u, e);
    let delta = &pi.pow(n)? * &unit_poly(ext, &u, &pi);
    let mut trace = ConstructionTrace::new(Method::TotTame, n);
    trace.c = e;
    trace.u = u;
    trace.pi_s = Some(pi.display_stable());
    Ok(Candidate { element: delta, trace })
}

/// `pi_L^n` for a totally and weakly ramified `p`-extension.
pub fn gen_tot_weak_p(ext: &ExtensionTower, ram: &RamificationData, n: i64) -> Result<Candidate> {
    require_weak(ram)?;
    let order = ram.e * ram.f;
    if ram.f != 1 {
        return Err(Error::NotTotallyRamified);
    }
    if ram.wild_order != order {
        return Err(Error::Unsupported("Galois group is not a p-group".into()));
    }
    require_exponent(n, order)?;
    let mut trace = ConstructionTrace::new(Method::TotWeakP, n);
    trace.r = p_exponent(ext.p(), order);
    trace.a = 1;
    trace.b = 0;
    Ok(Candidate { element: ext.pi().pow(n)?, trace })
}

/// `pi_F^{nb} pi_E^{na} alpha` with `E = L^W`, `F = L^C`.
pub fn gen_tot_weak(
    ext: &ExtensionTower,
    gal: &Galois,
    ram: &RamificationData,
    n: i64,
    u: &[i64],
    choice: usize,
) -> Result<Candidate> {
    require_weak(ram)?;
    if ram.f != 1 {
        return Err(Error::NotTotallyRamified);
    }
    let g = FiniteGroup::from_galois(gal)?;
    let wild = ram.wild_inertia();
    let inertia = ram.inertia();
    let complements = grp_complements(&g, &inertia, &wild);
    if complements.is_empty() {
        return Err(Error::NoComplement);
    }
    let c_group = complements[choice % complements.len()].clone();
    require_exponent(n, wild.len())?;
    let c = c_group.len();
    let pr = wild.len();
    let (a, b) = bezout(pr as i64, c as i64)?;
    let pi_e0 = fixed_field_uniformizer(ext, gal, ram, &wild)?;
    let pi_e = ext_tame_kummer_uniformizer(ext, &pi_e0.element, c)?;
    let pi_f = fixed_field_uniformizer(ext, gal, ram, &c_group)?;
    let unit_check = &pi_f.element.pow(b)? * &pi_e.pow(a)?;
    if unit_check.val()? != 1 {
        return Err(Error::TheoremViolation("pi_F^b pi_E^a is not a uniformizer".into()));
    }
    let u = units(u, c);
    let alpha = unit_poly(ext, &u, &pi_e);
    let delta = &(&pi_f.element.pow(n * b)? * &pi_e.pow(n * a)?) * &alpha;
    let mut trace = ConstructionTrace::new(Method::TotWeak, n);
    trace.r = p_exponent(ext.p(), pr);
    trace.c = c;
    trace.a = a;
    trace.b = b;
    trace.u = u;
    trace.pi_s = Some(pi_e.display_stable());
    trace.pi_t = Some(pi_f.element.display_stable());
    trace.split = Some(SplitData {
        w: wild.clone(),
        i: inertia,
        t: c_group.clone(),
        c: c_group,
        u: g.trivial(),
        s: wild,
        tau: g.identity(),
    });
    trace.fields = vec!["E = L^W".into(), "F = L^C".into()];
    Ok(Candidate { element: delta, trace })
}

/// `pi_T^{nb} pi_S^{na} alpha beta` for a doubly split extension.
pub fn gen_doubly_split(
    ext: &ExtensionTower,
    gal: &Galois,
    ram: &RamificationData,
    split: &SplitData,
    n: i64,
    u: &[i64],
    seed: u64,
) -> Result<Candidate> {
    require_weak(ram)?;
    require_exponent(n, split.w.len())?;
    let c = split.c.len();
    let pr = split.w.len();
    let (a, b) = bezout(pr as i64, c as i64)?;
    let pi_s0 = fixed_field_uniformizer(ext, gal, ram, &split.s)?;
    let pi_s = ext_tame_kummer_uniformizer(ext, &pi_s0.element, c)?;
    let pi_t = fixed_field_uniformizer(ext, gal, ram, &split.t)?;
    let u = units(u, c);
    let alpha = unit_poly(ext, &u, &pi_s);
    let beta = residue_normal_lift(ext, seed)?;
    let eps = &(&(&pi_t.element.pow(n * b)? * &pi_s.pow(n * a)?) * &alpha) * &beta;
    let mut trace = ConstructionTrace::new(Method::DoublySplit, n);
    trace.r = p_exponent(ext.p(), pr);
    trace.c = c;
    trace.a = a;
    trace.b = b;
    trace.u = u;
    trace.split = Some(split.clone());
    trace.pi_s = Some(pi_s.display_stable());
    trace.pi_t = Some(pi_t.element.display_stable());
    trace.beta = Some(beta.display_stable());
    trace.fields = vec!["L^S".into(), "L^T".into(), "L^I".into()];
    Ok(Candidate { element: eps, trace })
}

/// `Tr_{L'/L}(eps')` for `L' = L K'` with `[K':K] = [L:K]`.
pub fn gen_general(ext: &ExtensionTower, ram: &RamificationData, n: i64, u: &[i64], seed: u64) -> Result<Candidate> {
    require_weak(ram)?;
    require_exponent(n, ram.wild_order)?;
    let d = ext.degree();
    let comp = ext_compositum(ext, d)?;
    let big = comp.field();
    let gal = ext_automorphisms(big)?;
    let big_ram = ext_ramification(big, &gal)?;
    let g = FiniteGroup::from_galois(&gal)?;
    let split = grp_doubly_split_with(&g, &gal, &big_ram, seed as usize)?;
    let inner = gen_doubly_split(big, &gal, &big_ram, &split, n, u, seed)?;
    let relative: Subgroup = comp.relative_group(&gal);
    if relative.len() != big.degree() / ext.degree() {
        return Err(Error::TheoremViolation("Gal(L'/L) has the wrong order".into()));
    }
    let traced = ext_trace(&gal, &inner.element, &relative);
    let eps = comp.pullback(&traced)?;
    let mut trace = ConstructionTrace::new(Method::TraceDescent, n);
    trace.r = inner.trace.r;
    trace.c = inner.trace.c;
    trace.a = inner.trace.a;
    trace.b = inner.trace.b;
    trace.u = inner.trace.u.clone();
    trace.fields = vec![format!("L' = L K', [K':K] = {d}")];
    trace.inner = Some(Box::new(inner.trace));
    Ok(Candidate { element: eps, trace })
}

/// Direct construction when `G` decomposes, otherwise the trace descent.
pub fn gen_auto(
    ext: &ExtensionTower,
    gal: &Galois,
    ram: &RamificationData,
    n: i64,
    u: &[i64],
    seed: u64,
) -> Result<Candidate> {
    require_weak(ram)?;
    require_exponent(n, ram.wild_order)?;
    let g = FiniteGroup::from_galois(gal)?;
    match grp_doubly_split_with(&g, gal, ram, seed as usize) {
        Ok(split) => gen_doubly_split(ext, gal, ram, &split, n, u, seed),
        Err(Error::NotDoublySplit(_)) | Err(Error::NoComplement) => {
            let mut cand = gen_general(ext, ram, n, u, seed)?;
            cand.trace.fallback = true;
            Ok(cand)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_pairs() {
        assert_eq!(bezout(3, 2).unwrap(), (1, -1));
        assert_eq!(bezout(9, 4).unwrap(), (1, -2));
        assert_eq!(bezout(3, 1).unwrap(), (0, 1));
        assert_eq!(bezout(1, 1).unwrap(), (0, 1));
        assert!(bezout(3, 6).is_err());
    }
}
