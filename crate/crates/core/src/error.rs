use thiserror::Error;

use crate::keyalg::Var;
use crate::protocol::Label;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the cap of {cap} qubits")]
    CapExceeded { requested: usize, cap: usize },
    #[error("a register needs at least one qubit")]
    EmptyRegister,
    #[error("wire {wire} out of range for a {num_qubits}-qubit register")]
    WireOutOfRange { wire: usize, num_qubits: usize },
    #[error("two-qubit operation needs distinct wires, got {0} twice")]
    DuplicateWire(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(String),
    #[error("forced outcome ({a},{b}) has probability {probability:e}, below the post-selection floor")]
    PostSelection { a: u8, b: u8, probability: f64 },
    #[error("partial trace must keep at least one wire")]
    EmptyKeepSet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("round mismatch: expected {expected:?}, got {found:?}")]
    RoundMismatch { expected: Option<usize>, found: Option<usize> },
    #[error("gate {0} is not allowed here")]
    UnsupportedGate(String),
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(Var),
    #[error("qubit label {0} is not live in the register")]
    DeadLabel(Label),
    #[error("plan does not match the register: {0}")]
    PlanMismatch(String),
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
    #[error("forced outcome list exhausted after {0} measurements")]
    OutcomesExhausted(usize),
    #[error("audit input too large: {0}")]
    AuditTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
