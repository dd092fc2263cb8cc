use thiserror::Error;

/// Errors raised by field construction, polynomial algebra, code construction
/// and the distance oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} exceeds the table-arithmetic limit 2^16")]
    FieldTooLarge(u64),
    #[error("extension of order {q}^{m} exceeds the supported limit")]
    ExtensionTooLarge { q: u64, m: u32 },
    #[error("r = {r} does not divide q - 1 = {qm1}")]
    RNotDivisor { r: u64, qm1: u64 },
    #[error("zero element has no multiplicative order or inverse")]
    ZeroElement,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("residue {c} is not in [0, {r})")]
    BadResidue { c: u64, r: u64 },
    #[error("order s = {s} outside [0, {max}]")]
    OrderOutOfRange { s: u64, max: u64 },
    #[error("parameters not admissible: {0}")]
    NotAdmissible(String),
    #[error("r = {r} is outside the intermediate range 2 < r < q - 1 = {qm1}")]
    NotIntermediate { r: u64, qm1: u64 },
    #[error("b = {b} is not congruent to r - 1 = {rm1} mod r")]
    WrongResidue { b: u64, rm1: u64 },
    #[error("polynomial mixes several residue classes")]
    MixedResidue,
    #[error("b = {b} is not congruent to c = {c} mod r")]
    ResidueMismatch { b: u64, c: u64 },
    #[error("construction needs {needed} variables, only {m} available")]
    TooFewVariables { needed: usize, m: usize },
    #[error("pencil slopes must be distinct")]
    DuplicateTheta,
    #[error("invalid flag: {0}")]
    BadFlag(String),
    #[error("second weight undefined outside 0 <= a <= m - 2, 2 <= b <= q - 2")]
    OutOfValidity,
    #[error("exponent {e} outside [0, {max}]")]
    ExponentOutOfRange { e: u64, max: u64 },
    #[error("search needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("code has no nonzero codewords")]
    NoNonzeroWords,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
