//! Table-based finite groups, Sylow subgroups, complements and the
//! doubly split decomposition `G = W ⋊ (C ⋊ U)`.
//!
//! Elements are the indices `0..n` of a composition table; subgroups are
//! sorted index lists. Every search runs over the elements in index order, so
//! all choices are reproducible.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{Galois, RamificationData};

pub type Subgroup = Vec<usize>;

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<usize>,
}

impl FiniteGroup {
    /// Checks the group axioms exhaustively.
    pub fn from_table(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Error::TheoremViolation(format!("composition table: {m}"));
        if n == 0 || identity >= n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("malformed"));
        }
        if (0..n).any(|a| table[identity][a] != a || table[a][identity] != a) {
            return Err(bad("identity"));
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n).find(|&b| table[a][b] == identity).ok_or_else(|| bad("inverse"))?;
            if table[b][a] != identity {
                return Err(bad("inverse"));
            }
            inverses.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(bad("associativity"));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverses, labels: (0..n).collect() })
    }

    pub fn from_galois(gal: &Galois) -> Result<Self> {
        Self::from_table(gal.table().to_vec(), gal.identity())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Automorphism index of each element.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        (0..self.order()).collect()
    }

    pub fn trivial(&self) -> Subgroup {
        vec![self.identity]
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        h.contains(&self.identity) && h.iter().all(|&a| h.iter().all(|&b| h.contains(&self.mul(a, b))))
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set = vec![false; self.order()];
        set[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set[y] {
                    set[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| set[i]).collect()
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn normalizes(&self, g: usize, h: &[usize]) -> bool {
        h.iter().all(|&x| h.contains(&self.conjugate(g, x)))
    }

    pub fn normalizer(&self, h: &[usize]) -> Subgroup {
        (0..self.order()).filter(|&g| self.normalizes(g, h)).collect()
    }

    pub fn is_normal_in(&self, n: &[usize], g: &[usize]) -> bool {
        g.iter().all(|&x| self.normalizes(x, n))
    }

    pub fn intersection(&self, a: &[usize], b: &[usize]) -> Subgroup {
        a.iter().copied().filter(|x| b.contains(x)).collect()
    }

    /// All products `ab`, with repetitions.
    pub fn products(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul(x, y))).collect()
    }
}

/// Elements of `p`-power order in `within`, which must form a subgroup.
pub fn grp_sylow_p(g: &FiniteGroup, within: &[usize], p: u64) -> Result<Subgroup> {
    let is_p_power = |mut k: usize| {
        while k.is_multiple_of(p as usize) {
            k /= p as usize;
        }
        k == 1
    };
    let s: Subgroup = within.iter().copied().filter(|&x| is_p_power(g.element_order(x))).collect();
    if !g.is_subgroup(&s) || !g.is_normal_in(&s, within) {
        return Err(Error::NotNormalSylow);
    }
    Ok(s)
}

/// Every complement of the normal subgroup `n` in `within`, in the order a
/// depth-first search over coset representatives (in index order) finds them.
pub fn grp_complements(g: &FiniteGroup, within: &[usize], n: &[usize]) -> Vec<Subgroup> {
    if !within.len().is_multiple_of(n.len()) {
        return Vec::new();
    }
    let target = within.len() / n.len();
    let mut found = Vec::new();
    complement_search(g, within, n, target, &g.trivial(), &mut found, false);
    found
}

/// The first complement found by [`grp_complements`].
pub fn grp_complement(g: &FiniteGroup, within: &[usize], n: &[usize]) -> Result<Subgroup> {
    if !within.len().is_multiple_of(n.len()) {
        return Err(Error::NoComplement);
    }
    let target = within.len() / n.len();
    let mut found = Vec::new();
    complement_search(g, within, n, target, &g.trivial(), &mut found, true);
    found.pop().ok_or(Error::NoComplement)
}

fn complement_search(
    g: &FiniteGroup,
    within: &[usize],
    n: &[usize],
    target: usize,
    h: &Subgroup,
    found: &mut Vec<Subgroup>,
    first_only: bool,
) {
    if h.len() == target {
        if !found.contains(h) {
            found.push(h.clone());
        }
        return;
    }
    let covered = g.products(n, h);
    let Some(rep) = within.iter().copied().find(|x| !covered.contains(x)) else {
        return;
    };
    let mut candidates: Vec<usize> = n.iter().map(|&m| g.mul(m, rep)).collect();
    candidates.sort_unstable();
    for x in candidates {
        let mut gens = h.clone();
        gens.push(x);
        let next = g.generated(&gens);
        if next.len() > target || !target.is_multiple_of(next.len()) || g.intersection(&next, n).len() != 1 {
            continue;
        }
        complement_search(g, within, n, target, &next, found, first_only);
        if first_only && !found.is_empty() {
            return;
        }
    }
}

/// `tau` with `rho(tau) = 1`, `tau^d = e` and `tau C tau^{-1} = C`, of the
/// form `i^{-1} tau_0` for the first lift `tau_0` of the generator.
///
/// `rho[x]` is the image of `x` in `Z/d`, with kernel `inertia`.
pub fn grp_frobenius_lift_in_normalizer(
    g: &FiniteGroup,
    inertia: &[usize],
    c: &[usize],
    rho: &[usize],
    d: usize,
) -> Result<usize> {
    if d == 1 {
        return Ok(g.identity());
    }
    let tau0 = (0..g.order())
        .find(|&x| rho[x] % d == 1)
        .ok_or_else(|| Error::NotDoublySplit("no lift of the Frobenius generator".into()))?;
    for &i in inertia {
        let tau = g.mul(g.inv(i), tau0);
        if g.normalizes(tau, c) && g.pow(tau, d) == g.identity() {
            return Ok(tau);
        }
    }
    Err(Error::NotDoublySplit("no Frobenius lift of order d normalises C".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitData {
    pub w: Subgroup,
    pub i: Subgroup,
    pub c: Subgroup,
    pub u: Subgroup,
    pub t: Subgroup,
    pub s: Subgroup,
    pub tau: usize,
}

/// `whole = n ⋊ h` as a literal set product with unique expressions.
fn check_semidirect(g: &FiniteGroup, whole: &[usize], n: &[usize], h: &[usize], what: &str) -> Result<()> {
    let fail = || Error::NotDoublySplit(what.to_string());
    if !g.is_subgroup(n) || !g.is_subgroup(h) || !g.is_normal_in(n, whole) {
        return Err(fail());
    }
    let mut prod = g.products(n, h);
    prod.sort_unstable();
    let len = prod.len();
    prod.dedup();
    if prod.len() != len || prod != whole {
        return Err(fail());
    }
    Ok(())
}

pub fn grp_doubly_split(g: &FiniteGroup, gal: &Galois, ram: &RamificationData) -> Result<SplitData> {
    grp_doubly_split_with(g, gal, ram, 0)
}

/// As [`grp_doubly_split`], taking complement number `choice` (cyclically)
/// of `W` in `I`.
pub fn grp_doubly_split_with(
    g: &FiniteGroup,
    gal: &Galois,
    ram: &RamificationData,
    choice: usize,
) -> Result<SplitData> {
    let whole = g.whole();
    let inertia = ram.inertia();
    let wild = ram.wild_inertia();
    let all = grp_complements(g, &inertia, &wild);
    if all.is_empty() {
        return Err(Error::NoComplement);
    }
    let c = all[choice % all.len()].clone();
    let d = g.order() / inertia.len();
    let rho: Vec<usize> = (0..g.order()).map(|x| gal.get(g.labels()[x]).frobenius_power()).collect();
    let tau = grp_frobenius_lift_in_normalizer(g, &inertia, &c, &rho, d)?;
    let u = g.generated(&[tau]);
    let mut cu = c.clone();
    cu.push(tau);
    let t = g.generated(&cu);
    let mut wu = wild.clone();
    wu.push(tau);
    let s = g.generated(&wu);
    check_semidirect(g, &inertia, &wild, &c, "I = W C")?;
    check_semidirect(g, &whole, &inertia, &u, "G = I U")?;
    check_semidirect(g, &t, &c, &u, "T = C U")?;
    check_semidirect(g, &whole, &wild, &t, "G = W T")?;
    if s.len() != wild.len() * u.len() {
        return Err(Error::NotDoublySplit("S = W U".into()));
    }
    Ok(SplitData { w: wild, i: inertia, c, u, t, s, tau })
}

#[cfg(test)]
mod tests {
    use super::*;

    // S_3 as permutations of {0,1,2}, listed in a fixed order
    fn s3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let compose = |a: &[usize; 3], b: &[usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| perms.iter().position(|c| *c == compose(a, b)).unwrap()).collect())
            .collect();
        FiniteGroup::from_table(table, 0).unwrap()
    }

    fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0).unwrap()
    }

    #[test]
    fn sylow_subgroups() {
        let g = s3();
        assert_eq!(grp_sylow_p(&g, &g.whole(), 3).unwrap(), vec![0, 1, 2]);
        assert!(matches!(grp_sylow_p(&g, &g.whole(), 2), Err(Error::NotNormalSylow)));
        let c = cyclic(3);
        assert_eq!(grp_sylow_p(&c, &c.whole(), 3).unwrap(), c.whole());
        assert_eq!(grp_sylow_p(&c, &c.whole(), 2).unwrap(), vec![0]);
    }

    #[test]
    fn complements() {
        let g = s3();
        let h = grp_complement(&g, &g.whole(), &[0, 1, 2]).unwrap();
        assert_eq!(h.len(), 2);
        let c6 = cyclic(6);
        assert_eq!(grp_complement(&c6, &c6.whole(), &[0, 2, 4]).unwrap(), vec![0, 3]);
        let all = grp_complements(&g, &g.whole(), &[0, 1, 2]);
        assert_eq!(all.len(), 3);
        assert_eq!(all[0], h);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], 0).is_err());
    }
}
