//! Bell states and measurement in a `U`-rotated Bell basis.

use num_complex::Complex;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::gate::pauli;
use crate::qsim::matrix::CMatrix;
use crate::qsim::state::StateVector;
use crate::scalar::{c, czero, Real};

/// Forced outcomes below this Born probability are refused.
pub const POST_SELECTION_FLOOR: f64 = 1e-12;

/// Outcome `(a, b)` of a rotated Bell measurement: `a` is the X exponent
/// (`r_x`) and `b` the Z exponent (`r_z`) of the Pauli left on the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    #[serde(rename = "rx")]
    pub a: bool,
    #[serde(rename = "rz")]
    pub b: bool,
}

impl MeasurementOutcome {
    pub const ALL: [MeasurementOutcome; 4] = [
        MeasurementOutcome { a: false, b: false },
        MeasurementOutcome { a: false, b: true },
        MeasurementOutcome { a: true, b: false },
        MeasurementOutcome { a: true, b: true },
    ];

    pub fn new(a: bool, b: bool) -> Self {
        Self { a, b }
    }

    /// Position in [`MeasurementOutcome::ALL`].
    pub fn index(self) -> usize {
        (self.a as usize) << 1 | self.b as usize
    }
}

/// Where a measurement gets its outcome from.
pub enum OutcomeSource<'a> {
    /// Sample from the Born distribution.
    Sample(&'a mut dyn RngCore),
    /// Post-select on a given outcome.
    Forced(MeasurementOutcome),
}

/// Everything observable about one rotated Bell measurement.
#[derive(Debug, Clone)]
pub struct BellMeasurement<T: Real = f64> {
    pub outcome: MeasurementOutcome,
    /// Born probability of `outcome`.
    pub probability: T,
    /// Born probabilities of all four outcomes, indexed by [`MeasurementOutcome::index`].
    pub branch_probabilities: [T; 4],
    /// Post-measurement state with the two measured wires removed.
    pub state: StateVector<T>,
}

/// `|Φ_ab⟩ = (Z^b X^a ⊗ I)|Φ_00⟩`, `|Φ_00⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state<T: Real>(a: bool, b: bool) -> StateVector<T> {
    let v = rotated_bell_vector(&CMatrix::identity(2), MeasurementOutcome::new(a, b));
    StateVector::from_raw(2, v.to_vec())
}

/// `|Φ(U)_ab⟩ = (U† Z^b X^a ⊗ I)|Φ_00⟩` as a 4-vector, first qubit most significant.
pub fn rotated_bell_vector<T: Real>(u: &CMatrix<T>, outcome: MeasurementOutcome) -> [Complex<T>; 4] {
    let h = c::<T>(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let phi00 = [h, czero(), czero(), h];
    // Z^b X^a = (X^a Z^b)† up to sign; build it directly.
    let zx = &pauli::<T>(false, outcome.b) * &pauli::<T>(outcome.a, false);
    let op = &u.adjoint() * &zx;
    let mut v = [czero(); 4];
    for i in 0..2 {
        for j in 0..2 {
            v[2 * i + j] = (0..2).fold(czero(), |acc, k| acc + op[(i, k)] * phi00[2 * k + j]);
        }
    }
    v
}

/// Measures wires `(q1, q2)` in the basis `{|Φ(U)_ab⟩}` and removes them from
/// the register. If `q1` carried `|α⟩` and `q2` was the first half of a
/// `|Φ_00⟩` pair, the pair's other half is left in `X^a Z^b U|α⟩`.
pub fn rotated_bell_measure<T: Real>(
    state: &StateVector<T>,
    q1: usize,
    q2: usize,
    u: &CMatrix<T>,
    source: OutcomeSource<'_>,
) -> Result<BellMeasurement<T>> {
    state.check_wire(q1)?;
    state.check_wire(q2)?;
    if q1 == q2 {
        return Err(Error::DuplicateWire(q1));
    }
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: u.dim() });
    }
    let n = state.num_qubits();
    if n < 3 {
        return Err(Error::EmptyRegister);
    }
    let rest: Vec<usize> = (1..=n).filter(|&w| w != q1 && w != q2).collect();
    let (m1, m2) = (state.mask(q1), state.mask(q2));
    let rest_masks: Vec<usize> = rest.iter().map(|&w| state.mask(w)).collect();
    let rest_len = 1usize << rest.len();
    let full_index = |r: usize| {
        rest_masks.iter().enumerate().fold(0usize, |acc, (k, &m)| {
            if r & (1 << (rest_masks.len() - 1 - k)) != 0 {
                acc | m
            } else {
                acc
            }
        })
    };
    let bases: Vec<usize> = (0..rest_len).map(full_index).collect();
    let amps = state.amplitudes();

    let project = |outcome: MeasurementOutcome| -> Vec<Complex<T>> {
        let v = rotated_bell_vector(u, outcome);
        bases
            .iter()
            .map(|&base| {
                let mut acc = czero::<T>();
                for (k, coeff) in v.iter().enumerate() {
                    let idx = base | if k & 2 != 0 { m1 } else { 0 } | if k & 1 != 0 { m2 } else { 0 };
                    acc = acc + coeff.conj() * amps[idx];
                }
                acc
            })
            .collect()
    };

    let branches: Vec<Vec<Complex<T>>> = MeasurementOutcome::ALL.iter().map(|&o| project(o)).collect();
    let mut probs = [T::zero(); 4];
    for (p, branch) in probs.iter_mut().zip(&branches) {
        *p = branch.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y);
    }

    let outcome = match source {
        OutcomeSource::Forced(o) => {
            if probs[o.index()].as_f64() < POST_SELECTION_FLOOR {
                return Err(Error::PostSelection {
                    a: o.a as u8,
                    b: o.b as u8,
                    probability: probs[o.index()].as_f64(),
                });
            }
            o
        }
        OutcomeSource::Sample(rng) => {
            let draw: f64 = rng.random::<f64>() * probs.iter().map(|p| p.as_f64()).sum::<f64>();
            let mut cumulative = 0.0;
            let mut chosen = None;
            for (k, p) in probs.iter().enumerate() {
                cumulative += p.as_f64();
                if p.as_f64() > 0.0 && draw < cumulative {
                    chosen = Some(k);
                    break;
                }
            }
            let k = chosen.unwrap_or_else(|| {
                (0..4).rev().find(|&k| probs[k].as_f64() > 0.0).expect("some branch has weight")
            });
            MeasurementOutcome::ALL[k]
        }
    };

    let probability = probs[outcome.index()];
    let norm = probability.sqrt();
    let post = branches[outcome.index()].iter().map(|a| a / norm).collect();
    Ok(BellMeasurement {
        outcome,
        probability,
        branch_probabilities: probs,
        state: StateVector::from_raw(rest.len(), post),
    })
}
