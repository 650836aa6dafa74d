//! Checks of correctness, security and compactness at desk scale. All
//! trace distances are `Tr|ρ - σ|`, without the factor ½.

pub mod compactness;
pub mod deferred;
pub mod security;
pub mod sweep;

pub use compactness::{compactness_report, Arities, CompactnessReport};
pub use deferred::{deferred_equivalence, deferred_equivalence_exhaustive, DeferredComparison, DeferredReport};
pub use security::{
    eg_security_audit, pauli_string, qotp_reference_system_audit, qotp_security_audit, EgSecurityReport,
    SecurityReport,
};
pub use sweep::{homomorphism_sweep, random_family, HomomorphismSummary, SweepFailure};
