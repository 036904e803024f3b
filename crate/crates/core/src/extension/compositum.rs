use crate::error::{Error, Result};
use crate::ff::{poly_eval, rank};
use crate::lattice::{inverse, Matrix};
use crate::local::{working_cap, BaseField, LocalElement, Tower, UnramRing, WElem, EXACT};

use super::{ExtensionTower, Galois, Model};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn modulus_string(modulus: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in modulus.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => c.to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(if c != 1 && i > 0 { format!("{c}*{mono}") } else { mono });
    }
    terms.join(" + ")
}

/// The unramified extension of degree `d`, generated by a lift of the
/// canonical residue modulus.
pub fn ext_unramified(base: &BaseField, d: usize, precision: i64) -> Result<ExtensionTower> {
    if d == 0 {
        return Err(Error::InvalidDegree("degree must be positive".into()));
    }
    let cap = working_cap(base.kind, base.p, precision, 1)?;
    let ring = UnramRing::new(base.kind, base.p, d, cap)?;
    let defining = modulus_string(ring.residue_field().modulus());
    let tower = Tower::unramified(ring)?;
    let root = LocalElement::gen(&tower);
    ExtensionTower::assemble(base.clone(), precision, tower, Model::Identity, defining, root)
}

// sum_j c_j iota(y)^j for c in the small ring
fn iota(small: &UnramRing, big: &UnramRing, iota_y: &[i64], c: &[i64]) -> WElem {
    let mut acc = big.zero();
    let mut pw = big.one();
    for j in 0..small.degree() {
        let comp = big.from_components(&[small.component(c, j)]);
        acc = big.add(&acc, &big.mul(&comp, &pw));
        pw = big.mul(&pw, iota_y);
    }
    acc
}

/// `L' = L K'` with `K'/K` unramified of degree `d`, together with the
/// embedding `L -> L'`.
#[derive(Clone, Debug)]
pub struct Compositum {
    small: ExtensionTower,
    big: ExtensionTower,
    d: usize,
    // image of the generator of W_f in W_{F'}
    iota_y: WElem,
}

impl Compositum {
    pub fn field(&self) -> &ExtensionTower {
        &self.big
    }

    pub fn subfield(&self) -> &ExtensionTower {
        &self.small
    }

    pub fn unramified_degree(&self) -> usize {
        self.d
    }

    /// `L -> L'`.
    pub fn embed(&self, x: &LocalElement) -> LocalElement {
        let (s, b) = (self.small.tower().ring(), self.big.tower().ring());
        let data = x.data().iter().map(|c| iota(s, b, &self.iota_y, c)).collect();
        LocalElement::from_parts(self.big.tower(), x.shift(), data, x.precision())
    }

    /// The element of `L` whose image is `x`, if `x` lies in `L`.
    pub fn pullback(&self, x: &LocalElement) -> Result<LocalElement> {
        let big_ring = self.big.tower().ring();
        let kt = self.big.base_tower();
        let f = self.small.f();
        let fbig = self.big.f();
        let scalar = |w: &[i64], k: usize| {
            let mut d = kt.dzero();
            d[0] = big_ring.component(w, k);
            LocalElement::from_parts(kt, 0, d, EXACT)
        };
        // rows: coordinates of iota(y)^j in the basis y'^k
        let mut ypow = big_ring.one();
        let mut rows: Matrix = Vec::with_capacity(f);
        for _ in 0..f {
            rows.push((0..fbig).map(|k| scalar(&ypow, k)).collect());
            ypow = big_ring.mul(&ypow, &self.iota_y);
        }
        // f columns with independent residues
        let mut cols: Vec<usize> = Vec::new();
        for k in 0..fbig {
            let mut trial = cols.clone();
            trial.push(k);
            let res = rows
                .iter()
                .map(|r| trial.iter().map(|&c| r[c].residue()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            if rank(&res) == trial.len() {
                cols = trial;
            }
            if cols.len() == f {
                break;
            }
        }
        let square: Matrix = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let inv = inverse(&square, kt)?;
        let st = self.small.tower();
        let mut data = st.dzero();
        for (i, c) in x.data().iter().enumerate() {
            let target: Vec<LocalElement> = (0..fbig).map(|k| scalar(c, k)).collect();
            // a * square = target restricted to cols
            let a: Vec<LocalElement> = (0..f)
                .map(|j| {
                    cols.iter()
                        .enumerate()
                        .fold(LocalElement::zero(kt, EXACT), |acc, (r, &col)| &acc + &(&target[col] * &inv[r][j]))
                })
                .collect();
            for (k, t) in target.iter().enumerate() {
                let recon = (0..f).fold(LocalElement::zero(kt, EXACT), |acc, j| &acc + &(&a[j] * &rows[j][k]));
                if !recon.eq_mod(t) {
                    return Err(Error::TheoremViolation("element does not lie in the subfield".into()));
                }
            }
            let mut parts = Vec::with_capacity(f);
            for s in &a {
                if s.is_zero() {
                    parts.push(kt.ring().zero());
                } else if s.shift() < 0 {
                    return Err(Error::TheoremViolation("non-integral subfield coordinates".into()));
                } else {
                    parts.push(kt.ring().scale_up(&s.data()[0], s.shift() as u32));
                }
            }
            data[i] = st.ring().from_components(&parts);
        }
        Ok(LocalElement::from_parts(st, x.shift(), data, x.precision()))
    }

    /// Indices of `Gal(L'/L)`: automorphisms fixing `pi` and `W_f`.
    pub fn relative_group(&self, gal: &Galois) -> Vec<usize> {
        let pi = self.big.pi();
        let f = self.small.f();
        (0..gal.order())
            .filter(|&i| {
                let s = gal.get(i);
                s.frobenius_power().is_multiple_of(f) && s.image_pi().eq_mod(&pi)
            })
            .collect()
    }

    /// Indices of `Gal(L'/K')`, the automorphisms acting trivially on `W_{F'}`.
    pub fn inertia_group(&self, gal: &Galois) -> Vec<usize> {
        (0..gal.order()).filter(|&i| gal.get(i).frobenius_power() == 0).collect()
    }
}

pub fn ext_compositum(small: &ExtensionTower, d: usize) -> Result<Compositum> {
    if d == 0 {
        return Err(Error::InvalidDegree("degree must be positive".into()));
    }
    let f = small.f();
    let fbig = f / gcd(f, d) * d;
    let sring = small.tower().ring();
    let ring = UnramRing::new(small.kind(), small.p(), fbig, sring.cap())?;
    // iota(y_f): the first residue root of the small modulus, Hensel lifted
    let iota_y = if f == 1 {
        ring.zero()
    } else {
        let field = ring.residue_field().clone();
        let residue_mod: Vec<_> = sring.modulus().iter().map(|&c| field.from_int(c)).collect();
        let r = field
            .elements()
            .find(|x| poly_eval(&residue_mod, x).is_zero())
            .ok_or_else(|| Error::TheoremViolation("residue modulus has no root".into()))?;
        let lifted: Vec<WElem> = sring.modulus().iter().map(|&c| ring.from_int(c)).collect();
        ring.hensel_simple_root(&lifted, &ring.lift(&r))?
    };
    let eis: Vec<WElem> = small.tower().eisenstein().iter().map(|a| iota(sring, &ring, &iota_y, a)).collect();
    let tower = if small.e() == 1 { Tower::unramified(ring)? } else { Tower::new(ring, eis)? };
    let label = format!("({}) * unramified({d})", small.defining_polynomial());
    let placeholder = LocalElement::zero(&tower, 0);
    let big = ExtensionTower::assemble(
        small.base().clone(),
        small.precision(),
        tower,
        small.model().clone(),
        label,
        placeholder,
    )?;
    let mut comp = Compositum { small: small.clone(), big, d, iota_y };
    comp.big.root = comp.embed(small.root());
    Ok(comp)
}
