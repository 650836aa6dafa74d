use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{JointRegister, Label};
use crate::qsim::{phase_power, pauli, CMatrix, DensityMatrix, MeasurementOutcome, OutcomeSource, StateVector};
use crate::scalar::Real;

/// Largest register the exhaustive key average is run on.
pub const QOTP_AUDIT_MAX_QUBITS: usize = 3;
/// Largest `A ⊗ E` register for the reference-system audit.
pub const REFERENCE_AUDIT_MAX_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityReport {
    pub audit: &'static str,
    pub n: usize,
    pub max_trace_distance: f64,
    pub distances: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl SecurityReport {
    fn new(audit: &'static str, n: usize, distances: Vec<f64>, tolerance: f64) -> Self {
        let max_trace_distance = distances.iter().copied().fold(0.0, f64::max);
        Self { audit, n, max_trace_distance, distances, tolerance, pass: max_trace_distance <= tolerance }
    }
}

/// `⊗_w X^{x_w} Z^{z_w}`, wire 1 leftmost.
pub fn pauli_string<T: Real>(x: &[bool], z: &[bool]) -> CMatrix<T> {
    x.iter()
        .zip(z)
        .fold(CMatrix::identity(1), |acc, (&a, &b)| acc.kron(&pauli(a, b)))
}

/// Average of `P ρ P†` over all `4^{n_a}` Pauli keys on the first `n_a` wires.
fn key_average<T: Real>(rho: &DensityMatrix<T>, n_a: usize) -> Result<DensityMatrix<T>> {
    let rest = CMatrix::identity(1 << (rho.num_qubits() - n_a));
    let keys = 1usize << (2 * n_a);
    let weight = T::one() / T::from_usize(keys).expect("key count fits");
    let mut parts = Vec::with_capacity(keys);
    for k in 0..keys {
        let x: Vec<bool> = (0..n_a).map(|w| k >> w & 1 == 1).collect();
        let z: Vec<bool> = (0..n_a).map(|w| k >> (n_a + w) & 1 == 1).collect();
        let op = pauli_string::<T>(&x, &z).kron(&rest);
        parts.push((weight, rho.conjugate(&op)?));
    }
    DensityMatrix::mixture(&parts)
}

/// One-time-pad mixing: the key-averaged ciphertext of every plaintext
/// against `I / 2^n`.
pub fn qotp_security_audit<T: Real>(
    n: usize,
    plaintexts: &[DensityMatrix<T>],
    tolerance: f64,
) -> Result<SecurityReport> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    if n > QOTP_AUDIT_MAX_QUBITS {
        return Err(Error::AuditTooLarge(format!("{n} qubits, exhaustive limit is {QOTP_AUDIT_MAX_QUBITS}")));
    }
    let mixed = DensityMatrix::maximally_mixed(n)?;
    let mut distances = Vec::with_capacity(plaintexts.len());
    for rho in plaintexts {
        if rho.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rho.num_qubits() });
        }
        distances.push(key_average(rho, n)?.trace_distance(&mixed)?.as_f64());
    }
    Ok(SecurityReport::new("qotp", n, distances, tolerance))
}

/// Encrypting only the `A` part of `ρ^{AE}` leaves `I/2^{n_A} ⊗ ρ^E`.
pub fn qotp_reference_system_audit<T: Real>(
    n_a: usize,
    joint: &DensityMatrix<T>,
    tolerance: f64,
) -> Result<SecurityReport> {
    let total = joint.num_qubits();
    if n_a == 0 || n_a > total {
        return Err(Error::DimensionMismatch { expected: total, found: n_a });
    }
    if total > REFERENCE_AUDIT_MAX_QUBITS {
        return Err(Error::AuditTooLarge(format!(
            "{total} qubits, reference-system limit is {REFERENCE_AUDIT_MAX_QUBITS}"
        )));
    }
    let omega = DensityMatrix::maximally_mixed(n_a)?;
    let reference = if total == n_a {
        omega
    } else {
        let keep: Vec<usize> = (n_a + 1..=total).collect();
        omega.tensor(&joint.partial_trace(&keep)?)?
    };
    let d = key_average(joint, n_a)?.trace_distance(&reference)?.as_f64();
    Ok(SecurityReport::new("qotp-reference", total, vec![d], tolerance))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EgSecurityReport {
    /// Born probabilities of the four outcomes, for `x = 0` and `x = 1`.
    pub branch_probabilities: [[f64; 4]; 2],
    pub max_probability_deviation: f64,
    /// Outcome-averaged Server state against `I/2`, per `x`.
    pub distances_to_mixed: [f64; 2],
    /// Averaged Server state for `x = 0` against `x = 1`.
    pub view_distance: f64,
    pub max_trace_distance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// What Server holds after the encrypted gate `EG[P^x]` on `|α⟩`, averaged
/// over Client's outcomes, is independent of `x`.
pub fn eg_security_audit<T: Real>(alpha: &StateVector<T>, tolerance: f64) -> Result<EgSecurityReport> {
    if alpha.num_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: alpha.num_qubits() });
    }
    let mut register = JointRegister::<T>::setup(1, 1)?;
    register.load_ciphertext(alpha)?;
    let mut probabilities = [[0.0; 4]; 2];
    let mut averaged = Vec::with_capacity(2);
    for x in [false, true] {
        let u = phase_power::<T>(x);
        let mut parts = Vec::with_capacity(4);
        for outcome in MeasurementOutcome::ALL {
            let mut branch = register.clone();
            let m = branch.measure(Label::Data(1), Label::Client(1), &u, OutcomeSource::Forced(outcome))?;
            probabilities[x as usize][outcome.index()] = m.probability.as_f64();
            parts.push((m.probability, DensityMatrix::from_pure(branch.state())));
        }
        averaged.push(DensityMatrix::mixture(&parts)?);
    }
    let mixed = DensityMatrix::maximally_mixed(1)?;
    let distances_to_mixed = [
        averaged[0].trace_distance(&mixed)?.as_f64(),
        averaged[1].trace_distance(&mixed)?.as_f64(),
    ];
    let view_distance = averaged[0].trace_distance(&averaged[1])?.as_f64();
    let max_probability_deviation =
        probabilities.iter().flatten().map(|p| (p - 0.25).abs()).fold(0.0, f64::max);
    let max_trace_distance = distances_to_mixed[0].max(distances_to_mixed[1]).max(view_distance);
    Ok(EgSecurityReport {
        branch_probabilities: probabilities,
        max_probability_deviation,
        distances_to_mixed,
        view_distance,
        max_trace_distance,
        tolerance,
        pass: max_probability_deviation <= tolerance && max_trace_distance <= tolerance,
    })
}
