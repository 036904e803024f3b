use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{poly_eval, FFElement};
use crate::local::poly::{derivative, taylor_shift};
use crate::local::{lf_hensel_root, LocalElement, LocalPoly, Tower, EXACT};

use super::ExtensionTower;

/// `sigma(pi_K^s sum c_i pi^i) = pi_K^s sum phi^j(c_i) rho^i`.
#[derive(Clone, Debug)]
pub struct Automorphism {
    frob: usize,
    path: Vec<u64>,
    image_pi: LocalElement,
    image_alpha: LocalElement,
    pi_powers: Vec<LocalElement>,
}

impl Automorphism {
    fn new(ext: &ExtensionTower, frob: usize, path: Vec<u64>, image_pi: LocalElement) -> Self {
        let mut pi_powers = vec![ext.one()];
        for _ in 1..ext.e() {
            let next = pi_powers.last().expect("nonempty") * &image_pi;
            pi_powers.push(next);
        }
        let image_alpha = if ext.f() > 1 { &image_pi + &ext.y().frob(frob) } else { image_pi.clone() };
        Automorphism { frob, path, image_pi, image_alpha, pi_powers }
    }

    /// `j` with `sigma|_{W_F} = phi^j`.
    pub fn frobenius_power(&self) -> usize {
        self.frob
    }

    pub fn image_pi(&self) -> &LocalElement {
        &self.image_pi
    }

    pub fn image_alpha(&self) -> &LocalElement {
        &self.image_alpha
    }

    /// Residue digits that located `sigma(pi)` among the conjugates.
    pub fn path(&self) -> &[u64] {
        &self.path
    }

    pub fn apply(&self, x: &LocalElement) -> LocalElement {
        let tower = x.tower();
        let mut acc = LocalElement::zero(tower, EXACT);
        for (i, c) in x.data().iter().enumerate() {
            if tower.ring().is_zero(c) {
                continue;
            }
            let coeff = LocalElement::from_unram(tower, &tower.ring().frob(c, self.frob));
            acc = &acc + &(&coeff * &self.pi_powers[i]);
        }
        acc.scale_base(x.shift()).with_precision(x.precision())
    }
}

/// The automorphism group with its composition table.
#[derive(Clone, Debug)]
pub struct Galois {
    auts: Vec<Automorphism>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl Galois {
    pub fn order(&self) -> usize {
        self.auts.len()
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.auts
    }

    pub fn get(&self, i: usize) -> &Automorphism {
        &self.auts[i]
    }

    pub fn apply(&self, i: usize, x: &LocalElement) -> LocalElement {
        self.auts[i].apply(x)
    }

    /// `table[a][b]` is the index of `sigma_a o sigma_b`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// Roots in `O_L` of a polynomial over `L`, each with its residue path.
pub(crate) fn integral_roots(poly: &LocalPoly, tower: &Arc<Tower>) -> Result<Vec<(Vec<u64>, LocalElement)>> {
    let mut out = Vec::new();
    let pi = LocalElement::pi(tower);
    descend(poly, tower, &pi, LocalElement::zero(tower, EXACT), 0, Vec::new(), &mut out)?;
    Ok(out)
}

fn descend(
    poly: &LocalPoly,
    tower: &Arc<Tower>,
    pi: &LocalElement,
    prefix: LocalElement,
    level: i64,
    path: Vec<u64>,
    out: &mut Vec<(Vec<u64>, LocalElement)>,
) -> Result<()> {
    if level > tower.cap_prec() / 2 {
        return Err(Error::PrecisionExhausted("conjugate roots do not separate".into()));
    }
    // Q(z) = P(prefix + pi^level z), normalised to minimal valuation 0
    let shifted = taylor_shift(poly, &prefix);
    let step = pi.pow(level)?;
    let mut scale = LocalElement::one(tower);
    let mut q: LocalPoly = Vec::with_capacity(shifted.len());
    for c in &shifted {
        q.push(c * &scale);
        scale = &scale * &step;
    }
    let m = q
        .iter()
        .filter_map(LocalElement::valuation)
        .min()
        .ok_or_else(|| Error::PrecisionExhausted("polynomial vanishes identically".into()))?;
    let unscale = pi.pow(-m)?;
    let q: LocalPoly = q.iter().map(|c| c * &unscale).collect();
    let qbar: Vec<FFElement> = q.iter().map(LocalElement::residue).collect::<Result<_>>()?;
    let dbar: Vec<FFElement> = derivative(&q).iter().map(LocalElement::residue).collect::<Result<_>>()?;
    let field = tower.ring().residue_field().clone();
    if qbar.iter().skip(1).all(FFElement::is_zero) {
        return Ok(());
    }
    let lift_step = pi.pow(level)?;
    for r in field.elements() {
        if !poly_eval(&qbar, &r).is_zero() {
            continue;
        }
        let mut p2 = path.clone();
        p2.push(r.index());
        let z0 = LocalElement::lift_residue(tower, &r);
        if !poly_eval(&dbar, &r).is_zero() {
            let z = lf_hensel_root(&q, &z0)?;
            out.push((p2, &prefix + &(&lift_step * &z)));
        } else {
            let next = (&prefix + &(&lift_step * &z0)).exact();
            descend(poly, tower, pi, next, level + 1, p2, out)?;
        }
    }
    Ok(())
}

/// All `K`-automorphisms of `L`, canonically ordered.
pub fn ext_automorphisms(ext: &ExtensionTower) -> Result<Galois> {
    let tower = ext.tower();
    let (e, f) = (ext.e(), ext.f());
    let mut auts = Vec::with_capacity(ext.degree());
    for j in 0..f {
        let mut poly: LocalPoly =
            tower.eisenstein().iter().map(|a| LocalElement::from_unram(tower, &tower.ring().frob(a, j))).collect();
        poly.push(ext.one());
        let mut roots = integral_roots(&poly, tower)?;
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        for (path, rho) in roots {
            auts.push(Automorphism::new(ext, j, path, rho));
        }
    }
    if auts.len() != e * f {
        return Err(Error::NotGalois { found: auts.len(), expected: e * f });
    }
    let identity = auts
        .iter()
        .position(|s| s.frob == 0 && s.image_pi.eq_mod(&ext.pi()))
        .ok_or_else(|| Error::TheoremViolation("identity not among the roots".into()))?;
    let table = composition_table(ext, &auts)?;
    Ok(Galois { auts, table, identity })
}

fn composition_table(ext: &ExtensionTower, auts: &[Automorphism]) -> Result<Vec<Vec<usize>>> {
    let f = ext.f();
    // largest v(rho_a - rho_b) among distinct conjugates of the same Frobenius class
    let mut separation = 0;
    for (a, sa) in auts.iter().enumerate() {
        for sb in &auts[a + 1..] {
            if sa.frob == sb.frob {
                separation = separation.max((&sa.image_pi - &sb.image_pi).val()?);
            }
        }
    }
    let n = auts.len();
    let mut table = vec![vec![0; n]; n];
    for (a, sa) in auts.iter().enumerate() {
        for (b, sb) in auts.iter().enumerate() {
            let image = sa.apply(&sb.image_pi);
            let frob = (sa.frob + sb.frob) % f;
            let mut best: Option<(usize, Option<i64>)> = None;
            for (c, sc) in auts.iter().enumerate() {
                if sc.frob != frob {
                    continue;
                }
                let v = (&image - &sc.image_pi).valuation();
                let better = match (&best, v) {
                    (None, _) => true,
                    (Some((_, None)), _) => false,
                    (Some(_), None) => true,
                    (Some((_, Some(bv))), Some(v)) => v > *bv,
                };
                if better {
                    best = Some((c, v));
                }
            }
            let (c, v) = best.expect("Frobenius class is nonempty");
            if v.is_some_and(|v| v <= separation) {
                return Err(Error::PrecisionExhausted("cannot identify a composite".into()));
            }
            table[a][b] = c;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::ext_create;
    use crate::local::BaseField;

    fn is_group(table: &[Vec<usize>], id: usize) -> bool {
        let n = table.len();
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| table[table[a][b]][c] == table[a][table[b][c]])));
        let ident = (0..n).all(|a| table[id][a] == a && table[a][id] == a);
        let inv = (0..n).all(|a| (0..n).any(|b| table[a][b] == id));
        assoc && ident && inv
    }

    #[test]
    fn flagship_group_is_s3() {
        let k = BaseField::padic(3, 1, 40).unwrap();
        let l = ext_create(&k, "x^6 + 6*x^2 + 6").unwrap();
        let g = ext_automorphisms(&l).unwrap();
        assert_eq!(g.order(), 6);
        assert!(is_group(g.table(), g.identity()));
        let t = g.table();
        let abelian = (0..6).all(|a| (0..6).all(|b| t[a][b] == t[b][a]));
        assert!(!abelian);
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        let k = BaseField::padic(3, 1, 30).unwrap();
        let l = ext_create(&k, "x^4 + 2*x^2 + 4").ok();
        // non-Galois inputs are rejected; Galois ones respect products
        let l2 = ext_create(&k, "x^2 + 1").unwrap();
        let g = ext_automorphisms(&l2).unwrap();
        assert_eq!(g.order(), 2);
        let x = l2.parse("1 + 2*w").unwrap();
        let y = l2.parse("5 + w").unwrap();
        for s in g.automorphisms() {
            assert!(s.apply(&(&x * &y)).eq_mod(&(&s.apply(&x) * &s.apply(&y))));
        }
        if let Some(l) = l {
            let r = ext_automorphisms(&l);
            assert!(r.is_ok() || matches!(r, Err(Error::NotGalois { .. })));
        }
    }

    #[test]
    fn non_galois_cubic_is_rejected() {
        let k = BaseField::padic(5, 1, 30).unwrap();
        let l = ext_create(&k, "x^3 - 5").unwrap();
        assert!(matches!(ext_automorphisms(&l), Err(Error::NotGalois { found: 1, expected: 3 })));
    }
}
