use thiserror::Error;

/// Every failure the library can report.
///
/// Several variants (`ReciprocityViolation`, `NonRationalNorm`,
/// `SaturationFailed`, `NoZeroDivisor`, `DeterminantNotOne`,
/// `WitnessNotHyperbolic`) can only be produced by an internal inconsistency;
/// they exist so that a broken invariant surfaces as an error instead of a
/// wrong answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("product formula violated for ({a}, {b}): symbols {symbols}")]
    ReciprocityViolation { a: String, b: String, symbols: String },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("reduced norm has an irrational component: {0}")]
    NonRationalNorm(String),
    #[error("order saturation failed: {0}")]
    SaturationFailed(String),
    #[error("no zero divisor found modulo {0}")]
    NoZeroDivisor(u64),
    #[error("reduced matrix has determinant {det} mod {modulus}, expected 1")]
    DeterminantNotOne { det: u64, modulus: u64 },
    #[error("entry is not in the order localized at p: {0}")]
    NotInOrder(String),
    #[error("modulus {modulus} is not coprime to p = {p}")]
    ModulusNotCoprime { modulus: u64, p: u64 },
    #[error("singular lattice basis")]
    SingularBasis,
    #[error("vertex budget {budget} exceeded (needed at least {needed})")]
    BudgetExceeded { budget: usize, needed: usize },
    #[error("tree invariant violated: {0}")]
    TreeInvariant(String),
    #[error("witness is not hyperbolic: {0}")]
    WitnessNotHyperbolic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
