use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("gate is not almost classical: {0}")]
    NotAlmostClassical(String),

    #[error("gate is not in the third level of the Clifford hierarchy: {0}")]
    NotCh3(String),

    #[error("cannot classify gate: {0}")]
    Unclassifiable(String),

    #[error("estimated cost {estimated:.3e} exceeds budget {budget}")]
    BudgetExceeded { estimated: f64, budget: u64 },

    #[error("{n} qubits exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
