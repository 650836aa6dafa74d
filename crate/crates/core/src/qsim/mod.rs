//! Dense statevector and density-matrix simulation for few-qubit registers.

pub mod density;
pub mod gate;
pub mod matrix;
pub mod measure;
pub mod state;

pub use density::{partial_trace, trace_distance, DensityMatrix};
pub use gate::{pauli, phase_power, Gate, GateKind};
pub use matrix::{operator_fidelity, CMatrix};
pub use measure::{
    bell_state, rotated_bell_measure, rotated_bell_vector, BellMeasurement, MeasurementOutcome,
    OutcomeSource, POST_SELECTION_FLOOR,
};
pub use state::{apply_gate, fidelity_up_to_phase, new_state, StateVector, DEFAULT_QUBIT_CAP};
