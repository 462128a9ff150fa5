use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("truth table has {got} entries, expected 2^{n} = {expected}")]
    TableLength {
        n: usize,
        expected: usize,
        got: usize,
    },

    #[error("arity mismatch: expected {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("variable count {n} exceeds the cap of {cap}")]
    TooManyVariables { n: usize, cap: usize },

    #[error("unknown function family `{0}`")]
    UnknownFamily(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("representation is not exact: phase sum is not an integer at input index {input}")]
    NotExact { input: usize },

    #[error("representations disagree on variable count ({0} vs {1})")]
    VariableCountMismatch(usize, usize),

    #[error("function is constant")]
    ConstantFunction,

    #[error("function is not symmetric")]
    NotSymmetric,

    #[error("phase is not dyadic")]
    NonDyadicPhase,

    #[error("verification failed at input index {input}")]
    VerificationFailed { input: usize },

    #[error("malformed game or distribution: {0}")]
    Malformed(String),

    #[error("search budget exceeded")]
    BudgetExceeded,
}

pub type Result<T> = std::result::Result<T, Error>;
