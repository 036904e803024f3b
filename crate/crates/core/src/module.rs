//! `O_K[G]`-lattices: ideal bases, freeness certificates, the trace
//! criterion for `k[G]`-modules and associated orders.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{ext_trace, ExtensionTower, Galois, RamificationData};
use crate::ff::{det, rank, FFElement, FFField};
use crate::group::FiniteGroup;
use crate::lattice::{contains, det_valuation, hermite, inverse, module_index, transpose, Matrix};
use crate::local::{LocalElement, EXACT};

/// `O_K`-basis `{ y^j pi^(n+i) }` of `P_L^n`, ordered like the standard basis.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    pub n: i64,
    pub basis: Vec<LocalElement>,
}

impl IdealBasis {
    pub fn valuations(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.valuation().unwrap_or(i64::MAX)).collect()
    }
}

pub fn gm_ideal_basis(ext: &ExtensionTower, n: i64) -> Result<IdealBasis> {
    let pi_n = ext.pi().pow(n)?;
    let basis = ext.standard_basis().iter().map(|b| b * &pi_n).collect();
    Ok(IdealBasis { n, basis })
}

/// `O_K`-coordinates of `x` in the basis of `P_L^n`.
pub fn ideal_coordinates(ext: &ExtensionTower, x: &LocalElement, n: i64) -> Result<Vec<LocalElement>> {
    if let Some(v) = x.valuation() {
        if v < n {
            return Err(Error::NotInIdeal(n));
        }
    }
    let scaled = x * &ext.pi().pow(-n)?;
    let coords = ext.coordinates(&scaled)?;
    if coords.iter().any(|c| c.valuation().is_some_and(|v| v < 0)) {
        return Err(Error::NotInIdeal(n));
    }
    Ok(coords)
}

fn residue_digit(c: &LocalElement) -> Result<u64> {
    match c.valuation() {
        Some(0) => Ok(c.residue()?.coeffs()[0]),
        Some(v) if v < 0 => Err(Error::NotInIdeal(0)),
        _ if c.precision() <= 0 => Err(Error::PrecisionExhausted("coordinate has no known digit".into())),
        _ => Ok(0),
    }
}

/// Residues mod `pi_K` of the ideal coordinates of `x`.
pub fn residue_vector(ext: &ExtensionTower, x: &LocalElement, n: i64) -> Result<Vec<u64>> {
    ideal_coordinates(ext, x, n)?.iter().map(residue_digit).collect()
}

/// Matrix over `F_p` of the images `sigma(delta)` in `P_L^n / pi_K P_L^n`.
#[derive(Debug, Clone, Serialize)]
pub struct FreenessCertificate {
    pub n: i64,
    pub candidate: String,
    /// Row `k` holds the residue coordinates of `sigma_k(delta)`.
    pub matrix: Vec<Vec<u64>>,
    pub det: u64,
    pub verdict: bool,
}

fn to_ff(fp: &std::sync::Arc<FFField>, rows: &[Vec<u64>]) -> Vec<Vec<FFElement>> {
    rows.iter().map(|r| r.iter().map(|&x| fp.from_int(x as i64)).collect()).collect()
}

pub fn gm_is_free_generator(
    ext: &ExtensionTower,
    gal: &Galois,
    delta: &LocalElement,
    n: i64,
) -> Result<FreenessCertificate> {
    let matrix = (0..gal.order()).map(|k| residue_vector(ext, &gal.apply(k, delta), n)).collect::<Result<Vec<_>>>()?;
    let fp = FFField::prime(ext.p())?;
    let d = det(&to_ff(&fp, &matrix));
    let det = d.coeffs()[0];
    Ok(FreenessCertificate { n, candidate: delta.display_stable(), matrix, det, verdict: det != 0 })
}

/// Whether `O_K[G] delta + pi_K P_L^n = P_L^n`, decided by enumerating the
/// `F_p`-span of the images (or by rank when the span is too large).
pub fn gm_spans_residue_module(ext: &ExtensionTower, gal: &Galois, delta: &LocalElement, n: i64) -> Result<bool> {
    let rows = (0..gal.order()).map(|k| residue_vector(ext, &gal.apply(k, delta), n)).collect::<Result<Vec<_>>>()?;
    Ok(spans(ext.p(), &rows, ext.degree()))
}

fn spans(p: u64, rows: &[Vec<u64>], dim: usize) -> bool {
    let total = (p as f64).powi(rows.len() as i32);
    if total > (1u64 << 20) as f64 {
        let fp = FFField::prime(p).expect("prime");
        return rank(&to_ff(&fp, rows)) == dim;
    }
    let mut seen = std::collections::HashSet::new();
    let mut coeffs = vec![0u64; rows.len()];
    loop {
        let v: Vec<u64> = (0..dim).map(|j| rows.iter().zip(&coeffs).map(|(r, c)| r[j] * c).sum::<u64>() % p).collect();
        seen.insert(v);
        let mut k = 0;
        while k < coeffs.len() {
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == coeffs.len() {
            break;
        }
    }
    seen.len() as f64 == (p as f64).powi(dim as i32)
}

/// A `k[G]`-module of dimension `|G|` given by the action matrices of the
/// group elements: `action[g][i][j]` is coordinate `i` of `g` applied to
/// basis vector `j`.
#[derive(Debug, Clone)]
pub struct ResidueModule {
    pub p: u64,
    pub action: Vec<Vec<Vec<u64>>>,
}

impl ResidueModule {
    /// `k[G]` with `g e_h = e_{gh}`.
    pub fn regular(g: &FiniteGroup, p: u64) -> Self {
        let n = g.order();
        let action = (0..n)
            .map(|a| {
                let mut m = vec![vec![0; n]; n];
                for h in 0..n {
                    m[g.mul(a, h)][h] = 1;
                }
                m
            })
            .collect();
        ResidueModule { p, action }
    }

    /// `P_L^n / pi_K P_L^n` with its Galois action.
    pub fn from_ideal(ext: &ExtensionTower, gal: &Galois, n: i64) -> Result<Self> {
        let basis = gm_ideal_basis(ext, n)?;
        let m = ext.degree();
        let mut action = Vec::with_capacity(gal.order());
        for k in 0..gal.order() {
            let cols =
                basis.basis.iter().map(|b| residue_vector(ext, &gal.apply(k, b), n)).collect::<Result<Vec<_>>>()?;
            action.push((0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect());
        }
        Ok(ResidueModule { p: ext.p(), action })
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }

    pub fn act(&self, g: usize, x: &[u64]) -> Vec<u64> {
        self.action[g].iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<u64>() % self.p).collect()
    }

    /// Brute-force test that `k[G] x` is the whole module.
    pub fn generates(&self, x: &[u64]) -> bool {
        let rows: Vec<Vec<u64>> = (0..self.action.len()).map(|g| self.act(g, x)).collect();
        spans(self.p, &rows, self.dim())
    }
}

/// `Tr_G x != 0`, which for a `p`-group `G` in characteristic `p` and a module
/// of dimension `|G|` is equivalent to `x` generating a free module.
pub fn gm_trace_criterion(g: &FiniteGroup, module: &ResidueModule, x: &[u64]) -> Result<bool> {
    let n = g.order();
    if module.action.len() != n || module.dim() != n || x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "group of order {n}, module of dimension {}, vector of length {}",
            module.dim(),
            x.len()
        )));
    }
    let mut k = n;
    while k.is_multiple_of(module.p as usize) {
        k /= module.p as usize;
    }
    if k != 1 {
        return Err(Error::DimensionMismatch(format!("group order {n} is not a power of {}", module.p)));
    }
    let mut tr = vec![0; n];
    for a in 0..n {
        for (t, v) in tr.iter_mut().zip(module.act(a, x)) {
            *t = (*t + v) % module.p;
        }
    }
    Ok(tr.iter().any(|&t| t != 0))
}

/// `[M : N]` as the exponent of `P_K`.
pub fn gm_module_index(m_basis: &Matrix, n_basis: &Matrix) -> Result<i64> {
    module_index(m_basis, n_basis)
}

/// `v_K(Tr_G(P_L^i))`, the minimum over an ideal basis.
pub fn gm_trace_ideal_valuation(ext: &ExtensionTower, gal: &Galois, i: i64) -> Result<i64> {
    let all: Vec<usize> = (0..gal.order()).collect();
    let basis = gm_ideal_basis(ext, i)?;
    let mut best: Option<i64> = None;
    for b in &basis.basis {
        let t = ext.restrict_to_base(&ext_trace(gal, b, &all))?;
        if let Some(v) = t.valuation() {
            best = Some(best.map_or(v, |x: i64| x.min(v)));
        }
    }
    best.ok_or_else(|| Error::PrecisionExhausted("all traces vanish to precision".into()))
}

/// Matrix of `sigma` on the standard basis: row `k` holds the coordinates of
/// `sigma(b_k)`.
fn action_matrix(ext: &ExtensionTower, gal: &Galois, s: usize) -> Result<Matrix> {
    ext.standard_basis().iter().map(|b| ext.coordinates(&gal.apply(s, b))).collect()
}

/// `{x in K[G] : x O_L ⊆ O_L}` as rows of coefficient vectors indexed by `G`.
///
/// With `B` the matrix whose row `g` is the flattened action of `g`, the
/// condition is `c B` integral. Reducing the columns of `B` to a triangular
/// basis `R` turns it into `c R` integral, so the order is `O_K^m R^{-1}`.
pub fn gm_associated_order(ext: &ExtensionTower, gal: &Galois) -> Result<Matrix> {
    let m = gal.order();
    let kt = ext.base_tower();
    let flat: Matrix =
        (0..m).map(|s| Ok(action_matrix(ext, gal, s)?.into_iter().flatten().collect())).collect::<Result<_>>()?;
    let columns = transpose(&flat);
    let r = hermite(&columns, m)?;
    Ok(transpose(&inverse(&r, kt)?))
}

/// An element `sum c_g g` of `K[G]`.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    pub coeffs: Vec<LocalElement>,
}

impl GroupRingElement {
    pub fn apply(&self, gal: &Galois, x: &LocalElement) -> Result<LocalElement> {
        let mut acc = LocalElement::zero(x.tower(), EXACT);
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scalar = crate::local::poly::embed_base(c, x.tower())?;
            acc = &acc + &(&scalar * &gal.apply(g, x));
        }
        Ok(acc)
    }
}

/// `O_K`-basis of `O_K[G][pi_K^{-1} Tr_{G_0}]`.
pub fn lambda_basis(ext: &ExtensionTower, gal: &Galois, ram: &RamificationData) -> Result<Matrix> {
    let m = gal.order();
    let kt = ext.base_tower();
    let g0 = ram.inertia();
    let zero = LocalElement::zero(kt, EXACT);
    let one = LocalElement::one(kt);
    let pi_inv = LocalElement::base_uniformizer(kt).inv()?;
    let scale2 = &(&pi_inv * &pi_inv) * &LocalElement::from_int(kt, g0.len() as i64);
    let mut rows: Matrix = Vec::with_capacity(3 * m);
    for g in 0..m {
        let mut v = vec![zero.clone(); m];
        v[g] = one.clone();
        rows.push(v);
    }
    for scale in [&pi_inv, &scale2] {
        for g in 0..m {
            let mut v = vec![zero.clone(); m];
            for &h in &g0 {
                let gh = gal.table()[g][h];
                v[gh] = &v[gh] + scale;
            }
            rows.push(v);
        }
    }
    hermite(&rows, m)
}

fn identity_matrix(ext: &ExtensionTower, m: usize) -> Matrix {
    let kt = ext.base_tower();
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { LocalElement::one(kt) } else { LocalElement::zero(kt, EXACT) }).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AssocOrderReport {
    /// `[O_L : O_K[G] eps]`.
    pub group_ring_image_index: i64,
    /// `[Lambda : O_K[G]]`, expected `|G / G_0|`.
    pub lambda_over_group_ring: i64,
    /// `[O_L : Lambda eps]`, expected 0.
    pub lambda_image_index: i64,
    /// `[A : Lambda]` for the oracle order `A`.
    pub oracle_over_lambda: i64,
    pub oracle_contains_lambda: bool,
    pub lambda_contains_oracle: bool,
    /// `min v_L(Tr_{G_0}(b))` over the standard basis.
    pub inertia_trace_valuation: i64,
    pub generates_ring_of_integers: bool,
    pub oracle_equals_lambda: bool,
    pub inertia_trace_in_prime: bool,
}

impl AssocOrderReport {
    pub fn passed(&self) -> bool {
        self.generates_ring_of_integers && self.oracle_equals_lambda && self.inertia_trace_in_prime
    }
}

/// Coordinates in `O_L` of `x eps` for each row `x` of a `K[G]`-lattice.
fn image_lattice(ext: &ExtensionTower, gal: &Galois, lattice: &Matrix, eps: &LocalElement) -> Result<Matrix> {
    lattice.iter().map(|row| ext.coordinates(&GroupRingElement { coeffs: row.clone() }.apply(gal, eps)?)).collect()
}

pub fn gm_verify_assoc_order_theorem(
    ext: &ExtensionTower,
    gal: &Galois,
    ram: &RamificationData,
    eps: &LocalElement,
) -> Result<AssocOrderReport> {
    if !ram.weakly_ramified {
        return Err(Error::NotWeaklyRamified);
    }
    if ram.is_tame() {
        return Err(Error::Unsupported("the extension is tamely ramified".into()));
    }
    let m = gal.order();
    let kt = ext.base_tower();
    let group_ring = identity_matrix(ext, m);
    let o_l = identity_matrix(ext, m);
    let lambda = lambda_basis(ext, gal, ram)?;
    let oracle = gm_associated_order(ext, gal)?;

    let group_ring_image = image_lattice(ext, gal, &group_ring, eps)?;
    let lambda_image = image_lattice(ext, gal, &lambda, eps)?;
    let group_ring_image_index = module_index(&o_l, &group_ring_image)?;
    let lambda_over_group_ring = module_index(&lambda, &group_ring)?;
    let lambda_image_index = module_index(&o_l, &lambda_image)?;
    let integral = lambda_image.iter().flatten().all(|c| c.valuation().is_none_or(|v| v >= 0));
    let generates_ring_of_integers = integral && lambda_image_index == 0;

    let oracle_over_lambda = module_index(&oracle, &lambda)?;
    let oracle_contains_lambda = contains(&oracle, &lambda, kt)?;
    let lambda_contains_oracle = contains(&lambda, &oracle, kt)?;
    let oracle_equals_lambda = oracle_over_lambda == 0 && oracle_contains_lambda && lambda_contains_oracle;

    let g0 = ram.inertia();
    let inertia_trace_valuation =
        ext.standard_basis().iter().filter_map(|b| ext_trace(gal, b, &g0).valuation()).min().unwrap_or(i64::MAX);
    let report = AssocOrderReport {
        group_ring_image_index,
        lambda_over_group_ring,
        lambda_image_index,
        oracle_over_lambda,
        oracle_contains_lambda,
        lambda_contains_oracle,
        inertia_trace_valuation,
        generates_ring_of_integers,
        oracle_equals_lambda,
        inertia_trace_in_prime: inertia_trace_valuation >= 1,
    };
    if !report.passed() {
        return Err(Error::TheoremViolation(format!("associated order checks failed: {report:?}")));
    }
    Ok(report)
}

/// `v_K(det)` of the oracle order relative to `O_K[G]`, i.e. `[A : O_K[G]]`.
pub fn assoc_order_index(ext: &ExtensionTower, gal: &Galois) -> Result<i64> {
    Ok(-det_valuation(&gm_associated_order(ext, gal)?)?)
}
