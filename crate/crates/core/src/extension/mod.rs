//! Finite Galois extensions `L/K` presented as an Eisenstein layer over an
//! unramified layer, with automorphisms, ramification data, traces and
//! composita.

mod compositum;
mod create;
mod fixed;
mod galois;
mod ramification;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::local::{BaseField, FieldKind, LocalElement, Tower, UnramRing};

pub use compositum::{ext_compositum, ext_unramified, Compositum};
pub use create::{ext_create, ext_create_with_precision, Model};
pub use fixed::{ext_norm, ext_tame_kummer_uniformizer, ext_trace, fixed_field_uniformizer, FixedUniformizer};
pub use galois::{ext_automorphisms, Automorphism, Galois};
pub use ramification::{ext_ramification, minimal_polynomial, RamificationData};

/// `L/K` with `O_L = W_F[pi]`, `E(pi) = 0` Eisenstein over `W_F`.
#[derive(Clone)]
pub struct ExtensionTower {
    base: BaseField,
    precision: i64,
    tower: Arc<Tower>,
    base_tower: Arc<Tower>,
    model: Model,
    defining: String,
    root: LocalElement,
    alpha: LocalElement,
}

impl std::fmt::Debug for ExtensionTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtensionTower")
            .field("defining", &self.defining)
            .field("e", &self.e())
            .field("f", &self.f())
            .field("precision", &self.precision)
            .finish()
    }
}

/// Invariants printed in certificates.
#[derive(Debug, Clone, Serialize)]
pub struct TowerSummary {
    pub degree: usize,
    pub e: usize,
    pub f: usize,
    pub residue_modulus: Vec<u64>,
    pub eisenstein: String,
    pub model: Model,
    pub alpha: String,
}

impl ExtensionTower {
    pub(crate) fn assemble(
        base: BaseField,
        precision: i64,
        tower: Arc<Tower>,
        model: Model,
        defining: String,
        root: LocalElement,
    ) -> Result<Self> {
        let ring = UnramRing::new(tower.kind(), tower.p(), 1, tower.ring().cap())?;
        let base_tower = Tower::unramified(ring)?;
        let pi = LocalElement::pi(&tower);
        let alpha = if tower.f() > 1 { &pi + &LocalElement::gen(&tower) } else { pi };
        let ext = ExtensionTower { base, precision, tower, base_tower, model, defining, root, alpha };
        ext.certify_monogenic()?;
        Ok(ext)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn kind(&self) -> FieldKind {
        self.base.kind
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    /// Working precision `N` in units of `v_L`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn base_tower(&self) -> &Arc<Tower> {
        &self.base_tower
    }

    pub fn e(&self) -> usize {
        self.tower.e()
    }

    pub fn f(&self) -> usize {
        self.tower.f()
    }

    pub fn degree(&self) -> usize {
        self.tower.degree()
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn defining_polynomial(&self) -> &str {
        &self.defining
    }

    /// A root of the defining polynomial in `L`.
    pub fn root(&self) -> &LocalElement {
        &self.root
    }

    /// The monogenic generator `pi + y` (`pi` when `f = 1`).
    pub fn alpha(&self) -> &LocalElement {
        &self.alpha
    }

    pub fn pi(&self) -> LocalElement {
        LocalElement::pi(&self.tower)
    }

    /// The base uniformizer `p` or `t`, as an element of `L`.
    pub fn pi_k(&self) -> LocalElement {
        LocalElement::base_uniformizer(&self.tower)
    }

    pub fn y(&self) -> LocalElement {
        LocalElement::gen(&self.tower)
    }

    pub fn one(&self) -> LocalElement {
        LocalElement::one(&self.tower)
    }

    pub fn from_int(&self, n: i64) -> LocalElement {
        LocalElement::from_int(&self.tower, n)
    }

    pub fn parse(&self, s: &str) -> Result<LocalElement> {
        crate::local::parse::parse_element(s, &self.tower)
    }

    pub fn summary(&self) -> TowerSummary {
        let ring = self.tower.ring();
        let eis: Vec<LocalElement> =
            self.tower.eisenstein().iter().map(|a| LocalElement::from_unram(&self.tower, a)).collect();
        TowerSummary {
            degree: self.degree(),
            e: self.e(),
            f: self.f(),
            residue_modulus: ring.residue_field().modulus().to_vec(),
            eisenstein: format_eisenstein(&eis, self.e()),
            model: self.model.clone(),
            alpha: if self.f() > 1 { "pi + w".into() } else { "pi".into() },
        }
    }

    /// The standard basis element `y^j pi^i`, index `i * f + j`.
    pub fn basis_element(&self, index: usize) -> LocalElement {
        let f = self.f();
        let (i, j) = (index / f, index % f);
        let mut d = self.tower.dzero();
        let ring = self.tower.ring();
        d[i] = if f == 1 { ring.one() } else { ring_power(ring, &ring.gen(), j) };
        LocalElement::from_parts(&self.tower, 0, d, crate::local::EXACT)
    }

    pub fn standard_basis(&self) -> Vec<LocalElement> {
        (0..self.degree()).map(|k| self.basis_element(k)).collect()
    }

    /// `O_K`-coordinates in the standard basis, as elements of `K`.
    pub fn coordinates(&self, x: &LocalElement) -> Result<Vec<LocalElement>> {
        if !Arc::ptr_eq(x.tower(), &self.tower) {
            return Err(Error::FieldMismatch);
        }
        let e = self.e() as i64;
        let f = self.f();
        let ring = self.tower.ring();
        let mut out = Vec::with_capacity(self.degree());
        for i in 0..self.e() {
            let prec = (x.precision() - i as i64 + e - 1).div_euclid(e);
            for j in 0..f {
                let comp = ring.component(x.coefficient(i), j);
                let mut d = self.base_tower.dzero();
                d[0] = self.base_tower.ring().from_components(&[comp]);
                out.push(LocalElement::from_parts(&self.base_tower, x.shift(), d, prec));
            }
        }
        Ok(out)
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, coords: &[LocalElement]) -> Result<LocalElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for degree {}", coords.len(), self.degree())));
        }
        let mut acc = LocalElement::zero(&self.tower, crate::local::EXACT);
        for (k, c) in coords.iter().enumerate() {
            acc = &acc + &(&self.embed_base(c)? * &self.basis_element(k));
        }
        Ok(acc)
    }

    /// `K -> L`.
    pub fn embed_base(&self, x: &LocalElement) -> Result<LocalElement> {
        crate::local::poly::embed_base(x, &self.tower)
    }

    /// The base element `c` of `L` if `x` lies in `K` to its precision.
    pub fn restrict_to_base(&self, x: &LocalElement) -> Result<LocalElement> {
        let coords = self.coordinates(x)?;
        for c in &coords[1..] {
            if !c.is_zero() {
                return Err(Error::TheoremViolation("element does not lie in K".into()));
            }
        }
        Ok(coords[0].clone())
    }

    /// `{alpha^i}` spans `O_L` over `O_K`: unit determinant of its coordinates.
    fn certify_monogenic(&self) -> Result<()> {
        let m = self.degree();
        let fp = crate::ff::FFField::prime(self.p())?;
        let mut rows = Vec::with_capacity(m);
        let mut power = self.one();
        for _ in 0..m {
            let row = self
                .coordinates(&power)?
                .iter()
                .map(|c| c.residue().map(|r| fp.from_coeffs(r.coeffs())))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            power = &power * &self.alpha;
        }
        if crate::ff::det(&rows).is_zero() {
            return Err(Error::TheoremViolation("alpha does not generate O_L".into()));
        }
        Ok(())
    }
}

fn ring_power(ring: &UnramRing, x: &[i64], k: usize) -> Vec<i64> {
    let mut acc = ring.one();
    for _ in 0..k {
        acc = ring.mul(&acc, x);
    }
    acc
}

fn format_eisenstein(coeffs: &[LocalElement], e: usize) -> String {
    let mut terms = vec![match e {
        1 => "x".to_string(),
        _ => format!("x^{e}"),
    }];
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let body = c.display_stable();
        let body = body.rsplit_once(" + O(").map_or(body.as_str(), |(b, _)| b).to_string();
        let mono = match i {
            0 => format!("({body})"),
            1 => format!("({body})*x"),
            _ => format!("({body})*x^{i}"),
        };
        terms.push(mono);
    }
    terms.join(" + ")
}
