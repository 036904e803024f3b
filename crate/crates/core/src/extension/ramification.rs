use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{charpoly, Matrix};
use crate::local::poly::{derivative, eval};
use crate::local::{LocalElement, LocalPoly};

use super::{ExtensionTower, Galois};

/// Lower ramification filtration `G_{-1} ⊇ G_0 ⊇ G_1 ⊇ ...`.
#[derive(Debug, Clone, Serialize)]
pub struct RamificationData {
    /// `groups[k]` is `G_{k-1}`, down to the first trivial group.
    pub groups: Vec<Vec<usize>>,
    /// `i_G(sigma) = v_L(sigma(alpha) - alpha)`, `None` for the identity.
    pub lower_numbers: Vec<Option<i64>>,
    pub e: usize,
    pub f: usize,
    pub wild_order: usize,
    pub weakly_ramified: bool,
    /// `sum_{i >= 0} (|G_i| - 1)`.
    pub different_valuation: i64,
    /// `v_L(g'(alpha))` for the minimal polynomial `g` of `alpha`.
    pub different_check: i64,
}

impl RamificationData {
    /// `G_i` for `i >= -1`; trivial beyond the stored range.
    pub fn group(&self, i: i64) -> Vec<usize> {
        let k = (i + 1).max(0) as usize;
        self.groups.get(k).cloned().unwrap_or_else(|| self.groups.last().cloned().unwrap_or_default())
    }

    pub fn orders(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn inertia(&self) -> Vec<usize> {
        self.group(0)
    }

    pub fn wild_inertia(&self) -> Vec<usize> {
        self.group(1)
    }

    pub fn is_tame(&self) -> bool {
        self.wild_order == 1
    }
}

/// The minimal polynomial of `x` over `K` as a characteristic polynomial of
/// multiplication by `x` on the standard basis.
pub fn minimal_polynomial(ext: &ExtensionTower, x: &LocalElement) -> Result<LocalPoly> {
    let basis = ext.standard_basis();
    let rows = basis.iter().map(|b| ext.coordinates(&(x * b))).collect::<Result<Vec<_>>>()?;
    // multiplication matrix acts on column coordinate vectors
    let m: Matrix = crate::lattice::transpose(&rows);
    Ok(charpoly(&m, ext.base_tower()))
}

pub fn ext_ramification(ext: &ExtensionTower, gal: &Galois) -> Result<RamificationData> {
    let alpha = ext.alpha();
    let lower_numbers = gal
        .automorphisms()
        .iter()
        .enumerate()
        .map(|(i, s)| if i == gal.identity() { Ok(None) } else { (s.image_alpha() - alpha).val().map(Some) })
        .collect::<Result<Vec<_>>>()?;
    let mut groups = vec![(0..gal.order()).collect::<Vec<_>>()];
    let mut i = 0;
    loop {
        let gi: Vec<usize> = (0..gal.order()).filter(|&k| lower_numbers[k].is_none_or(|v| v > i)).collect();
        let done = gi.len() == 1;
        groups.push(gi);
        if done {
            break;
        }
        i += 1;
    }
    let e = groups[1].len();
    if e != ext.e() {
        return Err(Error::TheoremViolation(format!(
            "inertia order {e} differs from the ramification index {}",
            ext.e()
        )));
    }
    let wild_order = groups.get(2).map_or(1, Vec::len);
    let weakly_ramified = groups.get(3).is_none_or(|g| g.len() == 1);
    let different_valuation = groups[1..].iter().map(|g| g.len() as i64 - 1).sum();
    let g = minimal_polynomial(ext, alpha)?;
    let g_l = g.iter().map(|c| ext.embed_base(c)).collect::<Result<Vec<_>>>()?;
    let different_check = eval(&derivative(&g_l), alpha).val()?;
    Ok(RamificationData {
        groups,
        lower_numbers,
        e,
        f: gal.order() / e,
        wild_order,
        weakly_ramified,
        different_valuation,
        different_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{ext_automorphisms, ext_create};
    use crate::local::BaseField;

    #[test]
    fn flagship_filtration() {
        let k = BaseField::padic(3, 1, 40).unwrap();
        let l = ext_create(&k, "x^6 + 6*x^2 + 6").unwrap();
        let g = ext_automorphisms(&l).unwrap();
        let r = ext_ramification(&l, &g).unwrap();
        assert_eq!(r.orders(), vec![6, 6, 3, 1]);
        assert!(r.weakly_ramified);
        assert_eq!(r.different_valuation, 7);
        assert_eq!(r.different_check, 7);
    }

    #[test]
    fn unramified_has_trivial_inertia() {
        let k = BaseField::padic(3, 1, 30).unwrap();
        let l = ext_create(&k, "x^2 + 1").unwrap();
        let g = ext_automorphisms(&l).unwrap();
        let r = ext_ramification(&l, &g).unwrap();
        assert_eq!(r.orders(), vec![2, 1]);
        assert_eq!((r.e, r.f), (1, 2));
        assert_eq!(r.different_check, 0);
    }
}
