use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Mathematical failures that a verification run is expected to observe
/// (a witness with the wrong valuation, a semigroup with the wrong genus)
/// are not errors: they are reported as data. The variants here cover
/// malformed input and precondition violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u64>, u64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("field GF({p}^{n}) exceeds the supported size")]
    FieldTooLarge { p: u64, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields ({0} and {1})")]
    FieldMismatch(String, String),
    #[error("GF({0}^{1}) does not embed in GF({0}^{2})")]
    NoEmbedding(u64, u32, u32),
    #[error("the multiplicative order of zero is undefined")]
    ZeroOrder,
    #[error("no primitive cube root of unity in a field of order {0}")]
    NoCubeRoot(u64),
    #[error("degree {0} does not divide the extension degree {1}")]
    NotASubfield(u32, u32),
    #[error("excluded point: {0}")]
    ExcludedPoint(String),
    #[error("q = {0} is not admissible: {1}")]
    BadResidue(u64, String),
    #[error("witness construction failed: {0}")]
    Witness(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
