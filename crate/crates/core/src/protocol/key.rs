use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::keyalg::apply_rule;
use crate::qsim::{Gate, MeasurementOutcome, StateVector};
use crate::scalar::Real;

/// Pauli mask `X^x Z^z` over `n` wires; both the secret key and every
/// intermediate or final key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliKey {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl PauliKey {
    pub fn new(x: Vec<bool>, z: Vec<bool>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: z.len() });
        }
        Ok(Self { x, z })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n] }
    }

    /// `2n` independent uniform bits, all `x` bits drawn before the `z` bits.
    pub fn keygen<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let x = (0..n).map(|_| rng.random()).collect();
        let z = (0..n).map(|_| rng.random()).collect();
        Self { x, z }
    }

    pub fn num_wires(&self) -> usize {
        self.x.len()
    }

    fn check<T: Real>(&self, state: &StateVector<T>) -> Result<()> {
        if state.num_qubits() != self.num_wires() {
            return Err(Error::DimensionMismatch { expected: self.num_wires(), found: state.num_qubits() });
        }
        Ok(())
    }

    /// `X^x Z^z` on every wire (Z first).
    pub fn encrypt<T: Real>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        self.check(state)?;
        let mut out = state.clone();
        for w in 1..=self.num_wires() {
            if self.z[w - 1] {
                out.apply(&Gate::Z(w))?;
            }
            if self.x[w - 1] {
                out.apply(&Gate::X(w))?;
            }
        }
        Ok(out)
    }

    /// `Z^z X^x` on every wire, undoing [`PauliKey::encrypt`] up to phase.
    pub fn decrypt<T: Real>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        self.check(state)?;
        let mut out = state.clone();
        for w in 1..=self.num_wires() {
            if self.x[w - 1] {
                out.apply(&Gate::X(w))?;
            }
            if self.z[w - 1] {
                out.apply(&Gate::Z(w))?;
            }
        }
        Ok(out)
    }

    /// Concrete key update for one gate; T/T† consume an outcome.
    pub fn update(&mut self, gate: &Gate, outcome: Option<MeasurementOutcome>) -> Result<()> {
        apply_rule(&mut self.x, &mut self.z, gate, outcome.map(|o| (o.a, o.b)))
    }

    /// Iterates the update rules gate by gate, feeding `outcomes` to the
    /// T/T† gates in order.
    pub fn evolve(&self, circuit: &Circuit, outcomes: &[MeasurementOutcome]) -> Result<PauliKey> {
        let mut key = self.clone();
        let mut next = outcomes.iter();
        for gate in circuit.gates() {
            let outcome = if gate.kind().is_t_like() {
                Some(*next.next().ok_or(Error::OutcomesExhausted(outcomes.len()))?)
            } else {
                None
            };
            key.update(gate, outcome)?;
        }
        Ok(key)
    }

    pub fn bits_string(&self) -> String {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        format!("x={} z={}", bits(&self.x), bits(&self.z))
    }
}
