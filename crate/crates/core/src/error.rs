use thiserror::Error;

/// Errors raised by the wedgelab computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eta quotient specification is empty or has no nonzero exponent")]
    EmptyEtaSpec,
    #[error("eta quotient factor scales must be distinct and positive (got {0})")]
    InvalidEtaScale(u64),
    #[error("unary theta exponent nu must be 0 or 1 (got {0})")]
    InvalidThetaNu(u32),
    #[error("precision shortfall: need coefficients up to index {needed}, have {available}")]
    PrecisionShortfall { needed: u64, available: u64 },
    #[error("series exponent offset {0} is not integral")]
    NonIntegralOffset(String),
    #[error("series offsets {0} and {1} differ by a non-integer")]
    OffsetMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("series has no invertible constant term")]
    NotInvertible,
    #[error("s = {s} lies outside the absolute-convergence range (need s > {bound})")]
    RangeViolation { s: f64, bound: f64 },
    #[error("form is not a Hecke eigenform at p = {p}: {detail}")]
    NotEigenform { p: u64, detail: String },
    #[error("unknown form '{0}'")]
    UnknownForm(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
