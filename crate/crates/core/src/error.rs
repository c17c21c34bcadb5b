use crate::gaussian::GInt;

/// Data-dependent failures surfaced to callers.
///
/// Precondition violations that can only arise from programming errors
/// (dividing by zero, canonicalizing zero, gcd(0, 0)) panic instead, with the
/// same conventions as the standard integer types.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid Gaussian integer literal {0:?} (expected forms like \"3\", \"2i\", \"3+2i\", \"3-2i\")")]
    ParseGInt(String),

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(GInt, GInt),

    #[error("{0} is ramified (associate of 1+i) and has no multiplicative order")]
    RamifiedOrder(GInt),

    #[error("multiplicative order of 1+i modulo {0} does not fit in 64 bits")]
    OrderTooLarge(GInt),

    #[error("factorization of (1+i)^{0} - 1 is incomplete at the current effort budget")]
    IncompleteFactorization(u64),

    #[error("group order of the residue field modulo {0} could not be fully factored")]
    IncompleteGroupOrder(GInt),

    #[error("congruence system is empty")]
    EmptyCongruenceSystem,

    #[error("scan radius {radius} is below the modulus scale house(M) = {house_m:.1}")]
    ScanRadiusTooSmall { radius: f64, house_m: f64 },

    #[error("{zeta} = {prime} + (1+i)^{exponent} is a representation outside the exempt set")]
    ObstructionViolated { zeta: GInt, prime: GInt, exponent: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cache file is malformed at line {line}: {reason}")]
    MalformedCache { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
