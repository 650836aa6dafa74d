use serde::Serialize;

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::keyalg::{KeyTracker, KeyUpdatePlan, Scheme};
use crate::protocol::{run_with_key, JointRegister, Label, Outcomes, PauliKey};
use crate::qsim::{phase_power, MeasurementOutcome, OutcomeSource, StateVector};
use crate::scalar::Real;

/// Largest `M` enumerated by [`deferred_equivalence_exhaustive`].
pub const DEFERRED_MAX_ROUNDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeferredComparison {
    pub outcomes: Vec<MeasurementOutcome>,
    /// `1 - |⟨immediate|deferred⟩|`.
    pub gap: f64,
    /// Largest per-round difference in Born probability.
    pub probability_gap: f64,
    pub keys_agree: bool,
}

/// Measures each pair right after its SWAP instead of at decryption time.
fn run_immediate<T: Real>(
    circuit: &Circuit,
    plaintext: &StateVector<T>,
    sk: &PauliKey,
    forced: &[MeasurementOutcome],
) -> Result<(StateVector<T>, Vec<T>, PauliKey)> {
    let plan = KeyUpdatePlan::derive(Scheme::Gt, circuit);
    let mut register = JointRegister::setup(circuit.num_wires(), forced.len())?;
    register.load_ciphertext(&sk.encrypt(plaintext)?)?;
    let mut tracker = KeyTracker::new(&plan, &sk.x, &sk.z)?;
    let mut probabilities = Vec::with_capacity(forced.len());
    let mut round = 0;
    for gate in circuit.gates() {
        register.apply_on_data(gate)?;
        if gate.kind().is_t_like() {
            round += 1;
            register.swap(Label::Data(gate.wires()[0]), Label::Server(round))?;
            let b = tracker.next_basis_bit()?;
            let m = register.measure(
                Label::Server(round),
                Label::Client(round),
                &phase_power(b),
                OutcomeSource::Forced(forced[round - 1]),
            )?;
            tracker.record(m.outcome)?;
            probabilities.push(m.probability);
        }
    }
    let (x, z) = tracker.finish()?;
    let key = PauliKey::new(x, z)?;
    Ok((key.decrypt(&register.into_state())?, probabilities, key))
}

/// Immediate against deferred measurement on one forced outcome branch.
pub fn deferred_equivalence<T: Real>(
    circuit: &Circuit,
    plaintext: &StateVector<T>,
    sk: &PauliKey,
    forced: &[MeasurementOutcome],
) -> Result<DeferredComparison> {
    let m = circuit.profile().t_count();
    if forced.len() != m {
        return Err(Error::PlanMismatch(format!("{} forced outcomes for M = {m}", forced.len())));
    }
    let (immediate, p_immediate, key) = run_immediate(circuit, plaintext, sk, forced)?;
    let deferred = run_with_key(Scheme::Gt, circuit, plaintext, sk, Outcomes::Forced(forced))?;
    let fidelity = immediate.fidelity_up_to_phase(&deferred.output_state)?.as_f64();
    let probability_gap = p_immediate
        .iter()
        .zip(&deferred.outcome_probabilities)
        .map(|(a, b)| (a.as_f64() - b.as_f64()).abs())
        .fold(0.0, f64::max);
    Ok(DeferredComparison {
        outcomes: forced.to_vec(),
        gap: 1.0 - fidelity,
        probability_gap,
        keys_agree: key == deferred.final_key,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeferredReport {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub tuples: usize,
    pub min_fidelity: f64,
    pub max_gap: f64,
    pub max_probability_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub comparisons: Vec<DeferredComparison>,
}

/// [`deferred_equivalence`] on every one of the `4^M` outcome tuples.
pub fn deferred_equivalence_exhaustive<T: Real>(
    circuit: &Circuit,
    plaintext: &StateVector<T>,
    sk: &PauliKey,
    tolerance: f64,
) -> Result<DeferredReport> {
    let m = circuit.profile().t_count();
    if m > DEFERRED_MAX_ROUNDS {
        return Err(Error::AuditTooLarge(format!("M = {m}, exhaustive limit is {DEFERRED_MAX_ROUNDS}")));
    }
    let comparisons = (0..1usize << (2 * m))
        .map(|k| {
            let forced: Vec<_> = (0..m).map(|i| MeasurementOutcome::ALL[k >> (2 * (m - 1 - i)) & 3]).collect();
            deferred_equivalence(circuit, plaintext, sk, &forced)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = comparisons.iter().map(|c| c.gap).fold(0.0, f64::max);
    let max_probability_gap = comparisons.iter().map(|c| c.probability_gap).fold(0.0, f64::max);
    Ok(DeferredReport {
        n: circuit.num_wires(),
        m,
        tuples: comparisons.len(),
        min_fidelity: 1.0 - max_gap,
        max_gap,
        max_probability_gap,
        tolerance,
        pass: max_gap <= tolerance && max_probability_gap <= tolerance && comparisons.iter().all(|c| c.keys_agree),
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::parse_circuit;

    #[test]
    fn clifford_only_is_vacuous() {
        let c = parse_circuit("qubits 1\nH 1\nP 1").unwrap();
        let input = StateVector::<f64>::new(1).unwrap();
        let r = deferred_equivalence_exhaustive(&c, &input, &PauliKey::identity(1), 1e-9).unwrap();
        assert_eq!(r.tuples, 1);
        assert!(r.pass && r.max_gap.abs() < 1e-12);
    }

    #[test]
    fn single_t_all_branches() {
        let c = parse_circuit("qubits 1\nH 1\nT 1").unwrap();
        let input = StateVector::<f64>::new(1).unwrap();
        let sk = PauliKey::new(vec![true], vec![true]).unwrap();
        let r = deferred_equivalence_exhaustive(&c, &input, &sk, 1e-9).unwrap();
        assert_eq!(r.tuples, 4);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn wrong_outcome_count() {
        let c = parse_circuit("qubits 1\nT 1").unwrap();
        let input = StateVector::<f64>::new(1).unwrap();
        assert!(deferred_equivalence(&c, &input, &PauliKey::identity(1), &[]).is_err());
    }
}
