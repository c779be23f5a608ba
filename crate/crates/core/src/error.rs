use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("odd lattice: rank-1 form <{0}> has odd diagonal entry")]
    OddLattice(i64),
    #[error("odd lattice: scaling produced an odd diagonal entry")]
    OddAfterScale,
    #[error("degenerate lattice: determinant is zero")]
    Degenerate,
    #[error("non-primitive vector: coordinate gcd is {0}")]
    NonPrimitive(i64),
    #[error("zero vector rejected")]
    ZeroVector,
    #[error("not positive definite")]
    NotPositiveDefinite,
    #[error("not a root system: {0}")]
    NotRootSystem(String),
    #[error("module too large: order {order} exceeds cap {cap}")]
    ModuleTooLarge { order: u128, cap: u128 },
    #[error("Eichler criterion inapplicable: expression does not contain 2U")]
    EichlerInapplicable,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("arithmetic overflow converting exact value to machine integer")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
