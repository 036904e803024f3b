use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants that describe a mathematical verdict (`NotFree`-style outcomes are
/// not errors; they live in certificates) are kept apart from variants that
/// describe tool failure, so callers can map them onto distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("polynomial is not irreducible over F_p")]
    NotIrreducible,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("Hensel hypothesis fails: {0}")]
    HenselFailure(String),
    #[error("polynomial is reducible: {0}")]
    ReduciblePolynomial(String),
    #[error("polynomial is inseparable")]
    Inseparable,
    #[error("extension is not Galois: found {found} of {expected} automorphisms")]
    NotGalois { found: usize, expected: usize },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degree {0} is divisible by the residue characteristic")]
    WildDegree(u64),
    #[error("Sylow subgroup is not normal")]
    NotNormalSylow,
    #[error("no complement exists")]
    NoComplement,
    #[error("extension is not doubly split: {0}")]
    NotDoublySplit(String),
    #[error("element does not lie in the ideal P^{0}")]
    NotInIdeal(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis is singular")]
    SingularBasis,
    #[error("extension is not weakly ramified")]
    NotWeaklyRamified,
    #[error("extension is not totally ramified")]
    NotTotallyRamified,
    #[error("exponent {n} is not congruent to 1 modulo {modulus}")]
    BadExponent { n: i64, modulus: usize },
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
