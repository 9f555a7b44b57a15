use thiserror::Error;

/// Errors surfaced by precondition checks and budget limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion algebra coefficients must be nonzero (got a = {a}, b = {b})")]
    ZeroAlgebraCoefficient { a: i64, b: i64 },

    #[error("ternary form coefficients must be nonzero")]
    ZeroFormCoefficient,

    #[error("real embedding requires a > 0 (got a = {a})")]
    EmbedRequiresPositiveA { a: i64 },

    #[error("not liftable at this precision: {0}")]
    NotLiftable(String),

    #[error("unit ternary solve requires an odd prime (got p = {p})")]
    DyadicPrime { p: u64 },

    #[error("unit ternary solve requires unit coefficients mod {p}")]
    NonUnitCoefficient { p: u64 },

    #[error("level must be >= 1 (got q = {q})")]
    InvalidLevel { q: u64 },

    #[error("direct enumeration budget exceeded for q = {q} (limit q <= {limit})")]
    DirectCountBudget { q: u64, limit: u64 },

    #[error("prime-power count requires p coprime to 2ab (got p = {p})")]
    RamifiedPrimePower { p: u64 },

    #[error("expected an odd prime level (got q = {q})")]
    OddPrimeRequired { q: u64 },

    #[error("level q = {q} must be coprime to 2ab = {two_ab}")]
    LevelNotCoprime { q: u64, two_ab: i64 },

    #[error("auxiliary prime p0 = {p0} must be prime and coprime to 2abq")]
    BadAuxiliaryPrime { p0: u64 },

    #[error("algebra ({a},{b}) is not an admissible Fuchsian input: {reason}")]
    NotFuchsian { a: i64, b: i64, reason: String },

    #[error("trace t = {t} is not hyperbolic (need |t| > 2)")]
    NonHyperbolicTrace { t: f64 },

    #[error("generator construction requires a prime p = 1 mod 4 (got p = {p})")]
    BadGeneratorPrime { p: u64 },

    #[error("invalid graph parameters: {0}")]
    BadGraphParams(String),

    #[error("search budget fields must be positive")]
    BadBudget,
}

pub type Result<T> = std::result::Result<T, Error>;
