use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuits::{random_circuit, Circuit, RandomCircuitSpec};
use crate::error::Result;
use crate::keyalg::Scheme;
use crate::protocol::run_end_to_end;
use crate::qsim::StateVector;
use crate::scalar::Real;

/// `count` random circuits from one seed.
pub fn random_family(seed: u64, count: usize, spec: RandomCircuitSpec) -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_circuit(&mut rng, spec)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub circuit: usize,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismSummary {
    pub scheme: Scheme,
    pub circuits: usize,
    pub trials: usize,
    pub min_fidelity: f64,
    pub tolerance: f64,
    pub failures: Vec<SweepFailure>,
    pub pass: bool,
}

/// Runs every circuit of `family` under `seeds_per_circuit` seeds on a random
/// plaintext and compares against the plaintext circuit. A trial also fails
/// if its transcript is not exactly one message each way, if the number of
/// measurements is not `M`, or if the final key differs from iterating the
/// update rules on the observed outcomes.
pub fn homomorphism_sweep<T: Real>(
    scheme: Scheme,
    family: &[Circuit],
    seeds_per_circuit: u64,
    base_seed: u64,
    tolerance: f64,
) -> Result<HomomorphismSummary> {
    let mut min_fidelity = 1.0f64;
    let mut failures = Vec::new();
    let mut trials = 0;
    for (index, circuit) in family.iter().enumerate() {
        for k in 0..seeds_per_circuit {
            let seed = base_seed.wrapping_add((index as u64) << 20 | k);
            let plaintext = StateVector::<T>::random(circuit.num_wires(), &mut ChaCha8Rng::seed_from_u64(!seed))?;
            trials += 1;
            let mut fail = |reason: String| failures.push(SweepFailure { circuit: index, seed, reason });
            let run = match run_end_to_end(scheme, circuit, &plaintext, seed) {
                Ok(run) => run,
                Err(e) => {
                    fail(e.to_string());
                    continue;
                }
            };
            let fidelity = run.output_state.fidelity_up_to_phase(&circuit.apply(&plaintext)?)?.as_f64();
            min_fidelity = min_fidelity.min(fidelity);
            if 1.0 - fidelity > tolerance {
                fail(format!("fidelity {fidelity}"));
            }
            if !run.transcript.is_non_interactive() {
                fail(format!("transcript has {} messages", run.transcript.len()));
            }
            let m = circuit.profile().t_count();
            if run.measurements != m || run.outcomes.len() != m {
                fail(format!("{} measurements for M = {m}", run.measurements));
            }
            if run.secret_key.evolve(circuit, &run.outcomes)? != run.final_key {
                fail("final key differs from rule iteration".into());
            }
        }
    }
    Ok(HomomorphismSummary {
        scheme,
        circuits: family.len(),
        trials,
        min_fidelity,
        tolerance,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_seed_deterministic() {
        let spec = RandomCircuitSpec::default();
        assert_eq!(random_family(5, 4, spec), random_family(5, 4, spec));
    }

    #[test]
    fn empty_circuit_sweep() {
        let family = [Circuit::empty(2).unwrap()];
        let s = homomorphism_sweep::<f64>(Scheme::Gt, &family, 3, 0, 1e-9).unwrap();
        assert_eq!(s.trials, 3);
        assert!(s.pass && (s.min_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_random_sweep() {
        let family = random_family(11, 5, RandomCircuitSpec::default());
        for scheme in [Scheme::Gt, Scheme::Vgt] {
            let s = homomorphism_sweep::<f64>(scheme, &family, 2, 1, 1e-9).unwrap();
            assert!(s.pass, "{s:?}");
        }
    }
}
