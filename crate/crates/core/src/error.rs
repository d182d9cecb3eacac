use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{n} exceeds the supported maximum of 65536 elements")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero function has no valuation")]
    ZeroValuation,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("inseparable input: the derivative vanishes")]
    InseparableInput,
    #[error("exponent overflow while computing {0}")]
    ExponentOverflow(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("not enough Frobenius orbits: {available} available, {requested} requested")]
    NotEnoughOrbits { available: usize, requested: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("translation error: {0}")]
    Translate(String),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("search space of {points} points exceeds the limit of {limit}")]
    SearchSpace { points: u128, limit: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
