//! Job files and the certificate pipeline behind the command line tool.
//!
//! A job file has three sections:
//!
//! ```text
//! [base]
//! kind = padic        # or laurent
//! p = 3               # or q = 3; the residue field of the base must be prime
//!
//! [extension]
//! polynomial = x^6 + 6*x^2 + 6
//!
//! [task]
//! n = 1               # ideal exponent, default 1
//! element = pi^2      # for verify, and optionally assoc-order
//! precision = 60      # optional; otherwise derived from the extension
//! seed = 0            # selects among valid complements and normal elements
//! units = 1, 1        # the u_i, default all 1
//! method = auto       # auto or general (trace descent) for construct
//! ```

use std::fmt;
use std::str::FromStr;

use ini::Ini;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{
    ext_automorphisms, ext_create_with_precision, ext_ramification, ExtensionTower, Galois, RamificationData,
    TowerSummary,
};
use crate::generator::{gen_auto, gen_general, ConstructionTrace};
use crate::group::FiniteGroup;
use crate::local::{BaseField, FieldKind};
use crate::module::{
    assoc_order_index, gm_is_free_generator, gm_verify_assoc_order_theorem, AssocOrderReport, FreenessCertificate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Analyze,
    Construct,
    Verify,
    AssocOrder,
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "analyze" => Ok(Command::Analyze),
            "construct" => Ok(Command::Construct),
            "verify" => Ok(Command::Verify),
            "assoc-order" => Ok(Command::AssocOrder),
            other => Err(Error::Parse(format!("unknown command `{other}`"))),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Analyze => "analyze",
            Command::Construct => "construct",
            Command::Verify => "verify",
            Command::AssocOrder => "assoc-order",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructMethod {
    Auto,
    General,
}

#[derive(Debug, Clone, Serialize)]
pub struct JobSpec {
    pub kind: FieldKind,
    pub p: u64,
    pub polynomial: String,
    pub command: Option<Command>,
    pub n: i64,
    pub element: Option<String>,
    pub precision: Option<i64>,
    pub seed: u64,
    pub units: Vec<i64>,
    pub method: ConstructMethod,
}

fn parse_int<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Parse(format!("`{key}` expects an integer, got `{v}`")))
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        for (section, _) in ini.iter() {
            match section {
                Some("base") | Some("extension") | Some("task") => {}
                None => {}
                Some(other) => return Err(Error::Parse(format!("unknown section [{other}]"))),
            }
        }
        let base = ini.section(Some("base")).ok_or_else(|| Error::Parse("missing [base]".into()))?;
        let kind = match base.get("kind").map(str::trim) {
            Some("padic") => FieldKind::Padic,
            Some("laurent") => FieldKind::Laurent,
            Some(other) => return Err(Error::Parse(format!("unknown base kind `{other}`"))),
            None => return Err(Error::Parse("[base] needs `kind`".into())),
        };
        let (p, f) = match (base.get("p"), base.get("q")) {
            (Some(p), None) => (parse_int::<u64>("p", p)?, base.get("f").map_or(Ok(1), |f| parse_int("f", f))?),
            (None, Some(q)) => {
                let q = parse_int::<u64>("q", q)?;
                let (p, k) = prime_power(q).ok_or_else(|| Error::Parse(format!("q = {q} is not a prime power")))?;
                (p, k as usize)
            }
            _ => return Err(Error::Parse("[base] needs exactly one of `p` and `q`".into())),
        };
        if f != 1 {
            return Err(Error::Unsupported("the base residue field must be prime".into()));
        }
        let polynomial = ini
            .section(Some("extension"))
            .and_then(|s| s.get("polynomial"))
            .ok_or_else(|| Error::Parse("[extension] needs `polynomial`".into()))?
            .trim()
            .to_string();
        let task = ini.section(Some("task"));
        let get = |k: &str| task.and_then(|t| t.get(k));
        let units = match get("units") {
            Some(s) => s.split(',').map(|x| parse_int("units", x)).collect::<Result<Vec<i64>>>()?,
            None => Vec::new(),
        };
        let method = match get("method").map(str::trim) {
            None | Some("auto") => ConstructMethod::Auto,
            Some("general") => ConstructMethod::General,
            Some(other) => return Err(Error::Parse(format!("unknown method `{other}`"))),
        };
        Ok(JobSpec {
            kind,
            p,
            polynomial,
            command: get("command").map(str::parse).transpose()?,
            n: get("n").map_or(Ok(1), |v| parse_int("n", v))?,
            element: get("element").map(|s| s.trim().to_string()),
            precision: get("precision").map(|v| parse_int("precision", v)).transpose()?,
            seed: get("seed").map_or(Ok(0), |v| parse_int("seed", v))?,
            units,
            method,
        })
    }

    fn base(&self, precision: i64) -> Result<BaseField> {
        BaseField::new(self.kind, self.p, 1, precision)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub kind: FieldKind,
    pub p: u64,
    pub polynomial: String,
    pub n: i64,
    pub element: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionInfo {
    #[serde(flatten)]
    pub tower: TowerSummary,
    pub filtration_orders: Vec<usize>,
    pub wild_order: usize,
    pub weakly_ramified: bool,
    pub different_valuation: i64,
    pub different_check: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupInfo {
    pub order: usize,
    pub abelian: bool,
    pub filtration_orders: Vec<usize>,
    pub lower_numbers: Vec<Option<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub input: InputEcho,
    pub precision: i64,
    pub extension: ExtensionInfo,
    pub group: GroupInfo,
    pub construction: Option<ConstructionTrace>,
    pub freeness: Option<FreenessCertificate>,
    /// `[A : O_K[G]]` for the associated order `A`, zero exactly when tame.
    pub associated_order_index: Option<i64>,
    pub associated_order: Option<AssocOrderReport>,
    pub verdict: Option<bool>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize") + "\n"
    }

    /// `false` when the mathematical answer is negative.
    pub fn positive(&self) -> bool {
        self.verdict != Some(false)
    }
}

struct Analysed {
    ext: ExtensionTower,
    gal: Galois,
    ram: RamificationData,
}

fn analyse(spec: &JobSpec, precision: i64) -> Result<Analysed> {
    let base = spec.base(precision)?;
    let ext = ext_create_with_precision(&base, &spec.polynomial, precision)?;
    let gal = ext_automorphisms(&ext)?;
    let ram = ext_ramification(&ext, &gal)?;
    if ram.different_valuation != ram.different_check {
        return Err(Error::TheoremViolation(format!(
            "Hilbert different {} differs from v(g'(alpha)) = {}",
            ram.different_valuation, ram.different_check
        )));
    }
    Ok(Analysed { ext, gal, ram })
}

/// `2 d + e (|n| + 2) + 16` with `d = v_L(g'(alpha))`, measured on a
/// provisional tower.
pub fn default_precision(spec: &JobSpec) -> Result<i64> {
    let mut last = None;
    for provisional in [20, 40, 80] {
        match analyse(spec, provisional) {
            Ok(a) => {
                let e = a.ext.e() as i64;
                return Ok(2 * a.ram.different_check + e * (spec.n.abs() + 2) + 16);
            }
            Err(e @ Error::PrecisionExhausted(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// One pass of the pipeline at a fixed precision.
pub fn run_at(spec: &JobSpec, command: Command, precision: i64) -> Result<Certificate> {
    let Analysed { ext, gal, ram } = analyse(spec, precision)?;
    let group = FiniteGroup::from_galois(&gal)?;
    let mut cert = Certificate {
        schema: 1,
        tool: "weakram".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        input: InputEcho {
            kind: spec.kind,
            p: spec.p,
            polynomial: spec.polynomial.clone(),
            n: spec.n,
            element: spec.element.clone(),
            seed: spec.seed,
        },
        precision,
        extension: ExtensionInfo {
            tower: ext.summary(),
            filtration_orders: ram.orders(),
            wild_order: ram.wild_order,
            weakly_ramified: ram.weakly_ramified,
            different_valuation: ram.different_valuation,
            different_check: ram.different_check,
        },
        group: GroupInfo {
            order: group.order(),
            abelian: group.is_abelian(),
            filtration_orders: ram.orders(),
            lower_numbers: ram.lower_numbers.clone(),
        },
        construction: None,
        freeness: None,
        associated_order_index: None,
        associated_order: None,
        verdict: None,
    };
    match command {
        Command::Analyze => {}
        Command::Construct => {
            let cand = match spec.method {
                ConstructMethod::Auto => gen_auto(&ext, &gal, &ram, spec.n, &spec.units, spec.seed)?,
                ConstructMethod::General => gen_general(&ext, &ram, spec.n, &spec.units, spec.seed)?,
            };
            let free = cand.certify(&ext, &gal)?;
            cert.verdict = Some(free.verdict);
            cert.construction = Some(cand.trace);
            cert.freeness = Some(free);
        }
        Command::Verify => {
            let text = spec.element.as_deref().ok_or_else(|| Error::Parse("verify needs [task] element".into()))?;
            let delta = ext.parse(text)?;
            let free = gm_is_free_generator(&ext, &gal, &delta, spec.n)?;
            cert.verdict = Some(free.verdict);
            cert.freeness = Some(free);
        }
        Command::AssocOrder => {
            let eps = match spec.element.as_deref() {
                Some(text) => ext.parse(text)?,
                None => {
                    let cand = gen_auto(&ext, &gal, &ram, 1, &spec.units, spec.seed)?;
                    cert.construction = Some(cand.trace);
                    cand.element
                }
            };
            let free = gm_is_free_generator(&ext, &gal, &eps, 1)?;
            cert.verdict = Some(free.verdict);
            let positive = free.verdict;
            cert.freeness = Some(free);
            cert.associated_order_index = Some(assoc_order_index(&ext, &gal)?);
            if positive && !ram.is_tame() {
                cert.associated_order = Some(gm_verify_assoc_order_theorem(&ext, &gal, &ram, &eps)?);
            }
        }
    }
    Ok(cert)
}

/// Runs at the requested or derived precision `N`, retrying once at `2N`
/// when precision runs out.
pub fn run(spec: &JobSpec, command: Command) -> Result<Certificate> {
    if let Some(c) = spec.command {
        if c != command {
            return Err(Error::Parse(format!("job file is for `{c}`, not `{command}`")));
        }
    }
    let n = match spec.precision {
        Some(n) if n > 0 => n,
        Some(n) => return Err(Error::Parse(format!("precision must be positive, got {n}"))),
        None => default_precision(spec)?,
    };
    match run_at(spec, command, n) {
        Err(Error::PrecisionExhausted(_)) => run_at(spec, command, 2 * n),
        other => other,
    }
}

/// Exit status for a failed job: 3 for unreadable input, 4 when precision ran
/// out after the retry, 2 when a hypothesis does not hold, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => 3,
        Error::PrecisionExhausted(_) => 4,
        Error::NotIrreducible
        | Error::ReduciblePolynomial(_)
        | Error::Inseparable
        | Error::NotGalois { .. }
        | Error::NotWeaklyRamified
        | Error::NotTotallyRamified
        | Error::BadExponent { .. }
        | Error::NotInIdeal(_)
        | Error::NotDoublySplit(_)
        | Error::WildDegree(_)
        | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAGSHIP: &str = "[base]\nkind = padic\np = 3\n\n[extension]\npolynomial = x^6 + 6*x^2 + 6\n";

    #[test]
    fn parses_job_files() {
        let s = JobSpec::parse(FLAGSHIP).unwrap();
        assert_eq!((s.p, s.n, s.seed), (3, 1, 0));
        let s = JobSpec::parse(
            "[base]\nkind = laurent\nq = 2\n[extension]\npolynomial = x^2 - x - t^-1\n[task]\nn = 3\nunits = 1, 2\n",
        )
        .unwrap();
        assert_eq!((s.kind, s.p, s.n), (FieldKind::Laurent, 2, 3));
        assert_eq!(s.units, vec![1, 2]);
        assert!(matches!(JobSpec::parse("[base]\nkind = padic\n"), Err(Error::Parse(_))));
        assert!(matches!(
            JobSpec::parse("[base]\nkind = padic\nq = 9\n[extension]\npolynomial = x\n"),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn flagship_precision() {
        let s = JobSpec::parse(FLAGSHIP).unwrap();
        assert_eq!(default_precision(&s).unwrap(), 48);
    }
}
