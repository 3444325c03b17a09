use thiserror::Error;

/// Errors raised across the crate. Numeric payloads are carried as `f64`
/// regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed operator: {0}")]
    MalformedOperator(String),

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not a quantum boolean function")]
    NotQuantumBoolean,

    #[error("operator is not a projector (deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("coefficients are not normalized: sum of squares {sum_squares}")]
    NotNormalized { sum_squares: f64 },

    #[error("operator {index} of the family is not quantum boolean")]
    FamilyMemberNotBoolean { index: usize },

    #[error("operators {first} and {second} do not anticommute (anticommutator norm {norm:e})")]
    NotAnticommuting {
        first: usize,
        second: usize,
        norm: f64,
    },

    #[error("spectrum terms {first} and {second} commute")]
    CommutingTerms { first: String, second: String },

    #[error("{n} qubits exceeds the configured ceiling of {ceiling}")]
    QubitCeiling { n: usize, ceiling: usize },

    #[error("operator is not traceless (normalized trace {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("operator is not purely degree one (weight off level one {off_level_weight:e})")]
    NotDegreeOne { off_level_weight: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator has no single-qubit Fourier weight")]
    NoDictator,

    #[error("zero operator")]
    ZeroOperator,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
