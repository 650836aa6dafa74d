//! Teleportation-based quantum homomorphic encryption for Clifford+T
//! circuits, simulated end to end on a dense statevector.
//!
//! Client one-time-pads its input with a random Pauli key and ships it to
//! Server together with one half of `M` Bell pairs. Server runs the circuit,
//! teleporting each T/T† output into a Bell half, and returns the result with
//! a classical key-update plan. Client then measures each pair in a basis the
//! plan selects and recovers the final decryption key.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the precision.

pub mod audit;
pub mod circuits;
pub mod error;
pub mod keyalg;
pub mod protocol;
pub mod qsim;
pub mod scalar;

pub use circuits::{apply_circuit, parse_circuit, profile, Circuit, CircuitProfile};
pub use error::{Error, Result};
pub use keyalg::{derive_plan_gt, derive_plan_vgt, AffineExpr, KeyUpdatePlan, Scheme, Var};
pub use protocol::{run_end_to_end, PauliKey, RunResult, Transcript};
pub use qsim::{fidelity_up_to_phase, partial_trace, trace_distance, Gate, GateKind, MeasurementOutcome};
pub use scalar::Real;

pub type StateVectorF64 = qsim::StateVector<f64>;
pub type StateVectorF32 = qsim::StateVector<f32>;
pub type DensityMatrixF64 = qsim::DensityMatrix<f64>;
pub type DensityMatrixF32 = qsim::DensityMatrix<f32>;
pub type CMatrixF64 = qsim::CMatrix<f64>;
pub type CMatrixF32 = qsim::CMatrix<f32>;
pub type JointRegisterF64 = protocol::JointRegister<f64>;
pub type JointRegisterF32 = protocol::JointRegister<f32>;
pub type RunResultF64 = protocol::RunResult<f64>;
pub type RunResultF32 = protocol::RunResult<f32>;
