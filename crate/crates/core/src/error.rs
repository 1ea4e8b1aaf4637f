use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("no embedding of F_{{{from}}} into F_{{{to}}}")]
    NoEmbedding { from: u128, to: u128 },
    #[error("invalid field literal: {0}")]
    InvalidLiteral(String),

    #[error("polynomial system is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("system has no nonzero polynomial")]
    EmptySystem,
    #[error("every nonzero polynomial of the system is constant")]
    ConstantSystem,
    #[error("malformed system: {0}")]
    MalformedSystem(String),

    #[error("theorem not applicable: {0}")]
    Inapplicable(String),
    #[error("expected a system over a prime field")]
    NotPrimeField,
    #[error("precision mismatch between p-adic operands")]
    PrecisionMismatch,
    #[error("p-adic precision p^{precision} with p = {p} does not fit in 63 bits")]
    PrecisionTooLarge { p: u64, precision: u32 },
    #[error("valuation of zero requested")]
    ZeroInput,

    #[error("no rational function with the requested degree bounds matches the series")]
    NoSolution,
    #[error("reconstructed function disagrees with coefficient {index}")]
    NotVerified { index: usize },
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("inconsistent counts: {0}")]
    Inconsistent(String),

    #[error("polynomial or valuation list is not normalized (constant term must be 1)")]
    Unnormalized,
    #[error("empty list of Hodge numbers")]
    EmptyHodge,
    #[error("point {0} lies outside the polygon domain")]
    OutOfDomain(String),
    #[error("polygons have different lengths ({0} vs {1})")]
    LengthMismatch(u64, u64),
    #[error("invalid complete-intersection dimensions: {0}")]
    InvalidDimensions(String),
    #[error("Hodge level {hodge:?} disagrees with the closed-form bound {formula}")]
    CorollaryViolation { hodge: Option<u32>, formula: u32 },

    #[error("slope {num}/{den} is not in lowest terms with positive denominator")]
    NotLowestTerms { num: i64, den: i64 },
    #[error("isocrystals are defined over different bases")]
    BaseMismatch,
    #[error("Frobenius matrix is singular or not square")]
    SingularMatrix,
    #[error("zero vector")]
    ZeroVector,
    #[error("slope {slope} has multiplicity {multiplicity}, not divisible by its denominator")]
    IndivisibleMultiplicity { slope: String, multiplicity: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
