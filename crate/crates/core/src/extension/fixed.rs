use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::{lf_hensel_root, LocalElement, EXACT};

use super::{ExtensionTower, Galois, RamificationData};

/// `sum_{h in H} h(x)`.
pub fn ext_trace(gal: &Galois, x: &LocalElement, subgroup: &[usize]) -> LocalElement {
    let mut acc = LocalElement::zero(x.tower(), EXACT);
    for &h in subgroup {
        acc = &acc + &gal.apply(h, x);
    }
    acc
}

/// `prod_{h in H} h(x)`.
pub fn ext_norm(gal: &Galois, x: &LocalElement, subgroup: &[usize]) -> LocalElement {
    let mut acc = LocalElement::one(x.tower());
    for &h in subgroup {
        acc = &acc * &gal.apply(h, x);
    }
    acc
}

/// A uniformizer of `L^H` found as a trace `Tr_H(y^j pi^i)`.
#[derive(Debug, Clone)]
pub struct FixedUniformizer {
    pub element: LocalElement,
    /// `(i, j)` of the traced basis element `y^j pi^i`.
    pub source: (i64, usize),
    /// `v_L` of the uniformizer, i.e. `e(L / L^H)`.
    pub valuation: i64,
}

#[derive(Serialize)]
struct SourceView {
    pi_exponent: i64,
    w_exponent: usize,
}

impl Serialize for FixedUniformizer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SourceView { pi_exponent: self.source.0, w_exponent: self.source.1 }.serialize(s)
    }
}

fn check_fixed(gal: &Galois, x: &LocalElement, subgroup: &[usize]) -> Result<()> {
    for &h in subgroup {
        if !gal.apply(h, x).eq_mod(x) {
            return Err(Error::TheoremViolation("trace is not fixed by the subgroup".into()));
        }
    }
    Ok(())
}

/// The traces of `P_L^i` attain the valuation `e(L/L^H)` for a suitable `i`,
/// so scanning the standard basis elements finds a uniformizer of `L^H`.
pub fn fixed_field_uniformizer(
    ext: &ExtensionTower,
    gal: &Galois,
    ram: &RamificationData,
    subgroup: &[usize],
) -> Result<FixedUniformizer> {
    let inertia = ram.inertia();
    let target = subgroup.iter().filter(|h| inertia.contains(h)).count() as i64;
    let m = ext.degree() as i64;
    let pi = ext.pi();
    let y = ext.y();
    for i in -2 * m..=2 * m {
        let pi_i = pi.pow(i)?;
        let mut yj = ext.one();
        for j in 0..ext.f() {
            let x = ext_trace(gal, &(&yj * &pi_i), subgroup);
            if x.valuation() == Some(target) {
                check_fixed(gal, &x, subgroup)?;
                return Ok(FixedUniformizer { element: x, source: (i, j), valuation: target });
            }
            yj = &yj * &y;
        }
    }
    Err(Error::PrecisionExhausted("no trace attains the uniformizer valuation".into()))
}

/// Given a uniformizer `pi_sub` of a totally tamely ramified subextension of
/// degree `c`, returns `pi_S = pi_sub * w` with `pi_S^c = u_0 pi_K`, `u_0`
/// the integer lift of the residue of `pi_sub^c / pi_K`.
pub fn ext_tame_kummer_uniformizer(ext: &ExtensionTower, pi_sub: &LocalElement, c: usize) -> Result<LocalElement> {
    let p = ext.p();
    if (c as u64).is_multiple_of(p) {
        return Err(Error::WildDegree(c as u64));
    }
    let pi_k = ext.pi_k();
    if c == 1 {
        return Ok(pi_k);
    }
    let u = pi_sub.pow(c as i64)?.try_div(&pi_k)?;
    let ubar = u.residue()?;
    if ubar.is_zero() || !ubar.in_subfield(1) {
        return Err(Error::TheoremViolation("subextension is not totally ramified of the given degree".into()));
    }
    let u0 = LocalElement::lift_residue(pi_sub.tower(), &ubar);
    let v = u0.try_div(&u)?;
    // w^c = v with w = 1 mod pi
    let tower = pi_sub.tower();
    let mut g = vec![-&v];
    g.extend((1..c).map(|_| LocalElement::zero(tower, EXACT)));
    g.push(LocalElement::one(tower));
    let w = lf_hensel_root(&g, &LocalElement::one(tower))?;
    Ok(pi_sub * &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{ext_automorphisms, ext_create, ext_ramification};
    use crate::local::BaseField;

    #[test]
    fn trace_of_one_and_norm_of_pi() {
        let k = BaseField::padic(3, 1, 40).unwrap();
        let l = ext_create(&k, "x^3 - 3*x + 1").unwrap();
        let g = ext_automorphisms(&l).unwrap();
        let all: Vec<usize> = (0..3).collect();
        assert!(ext_trace(&g, &l.one(), &all).eq_mod(&l.from_int(3)));
        // E = x^3 + 6x^2 + 9x + 3, so N(pi) = -3
        assert!(ext_norm(&g, &l.pi(), &all).eq_mod(&l.from_int(-3)));
    }

    #[test]
    fn kummer_uniformizer_over_q3() {
        let k = BaseField::padic(3, 1, 30).unwrap();
        let l = ext_create(&k, "x^2 - 6").unwrap();
        let g = ext_automorphisms(&l).unwrap();
        let pi_s = ext_tame_kummer_uniformizer(&l, &l.pi(), 2).unwrap();
        let q = pi_s.pow(2).unwrap().try_div(&l.pi_k()).unwrap();
        assert_eq!(q.val().unwrap(), 0);
        assert!(l.restrict_to_base(&q).is_ok());
        let other = (0..2).find(|&i| i != g.identity()).unwrap();
        assert!(g.apply(other, &pi_s).eq_mod(&-&pi_s));
        let r = ext_ramification(&l, &g).unwrap();
        let u = fixed_field_uniformizer(&l, &g, &r, &[g.identity()]).unwrap();
        assert_eq!(u.valuation, 1);
        assert!(matches!(ext_tame_kummer_uniformizer(&l, &l.pi(), 3), Err(Error::WildDegree(3))));
    }
}
