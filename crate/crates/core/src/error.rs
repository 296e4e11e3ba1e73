use thiserror::Error;

/// Errors raised by field construction, polynomial algebra, code
/// enumeration and the verification drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field GF({p}^{m}) exceeds the 2^16 element cap")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("modulus is irreducible but not primitive")]
    NotPrimitive,
    #[error("division by zero")]
    DivisionByZero,
    #[error("subfield degree {e} does not divide extension degree {m}")]
    DegreeNotDividing { e: u32, m: u32 },
    #[error("invalid field element literal `{0}`")]
    BadElement(String),

    #[error("invalid subfield chain: {0}")]
    InvalidChain(String),
    #[error("point is not in the cartesian set")]
    PointNotInX,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operands live over different cartesian sets")]
    BaseMismatch,
    #[error("value is not in the coordinate field K_{0}")]
    ValueNotInKj(usize),
    #[error("coordinate index {index} out of range for n = {n}")]
    CoordinateOutOfRange { index: usize, n: usize },
    #[error("polynomial parse error: {0}")]
    Parse(String),

    #[error("d = {d} is outside the relevant range 1 <= d < {upper}")]
    OutOfRelevantRange { d: usize, upper: usize },
    #[error("degree {degree} exceeds code order {d}")]
    DegreeTooHigh { degree: usize, d: usize },
    #[error("enumeration needs {required} steps, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("affine map does not preserve X")]
    NotXPreserving,
    #[error("affine map is not invertible")]
    SingularMatrix,
    #[error("polynomial has degree {0:?}, expected degree 1")]
    DegreeNotOne(Option<usize>),
    #[error("zero set of the divisor is not contained in the zero set of the dividend")]
    ZeroSetNotContained,
    #[error("divisor shift {0} is invalid: {1}")]
    InvalidShift(usize, String),
    #[error("directions are linearly dependent")]
    DependentDirections,
    #[error("hypothesis ({0}) of the avoiding-hyperplane search is violated")]
    HypothesisViolated(u8),

    #[error("coordinate j = {j} is inadmissible: d_j = {dj} < d_(k+1) - l = {need}")]
    InadmissibleJ { j: usize, dj: usize, need: usize },
    #[error("expected {expected} roots, got {got}")]
    AlphaCountMismatch { expected: usize, got: usize },
    #[error("root is not an element of K_{0}")]
    AlphaNotInKj(usize),
    #[error("special case not applicable: {0}")]
    CaseNotApplicable(String),
    #[error("weight {weight} is not below the bound {bound}")]
    WeightBoundViolated { weight: usize, bound: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid code spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
