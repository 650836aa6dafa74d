use std::fmt;

use crate::error::{Error, Result};
use crate::qsim::{
    bell_state, rotated_bell_measure, CMatrix, Gate, MeasurementOutcome, OutcomeSource, StateVector,
    DEFAULT_QUBIT_CAP,
};
use crate::qsim::state::check_cap;
use crate::scalar::Real;

/// Logical name of a qubit in the joint Client/Server register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Data wire `w`.
    Data(usize),
    /// Client half `c_i` of the `i`-th Bell pair.
    Client(usize),
    /// Server half `s_i` of the `i`-th Bell pair.
    Server(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Data(w) => write!(f, "d{w}"),
            Label::Client(i) => write!(f, "c{i}"),
            Label::Server(i) => write!(f, "s{i}"),
        }
    }
}

/// Observable part of a Bell-basis measurement on the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMeasurement<T: Real = f64> {
    pub outcome: MeasurementOutcome,
    pub probability: T,
    pub branch_probabilities: [T; 4],
}

/// Every qubit of a protocol run in one statevector. Moving a qubit between
/// parties is a change of who holds the label, so only the labels are
/// tracked; physical wire `k` carries `labels[k - 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointRegister<T: Real = f64> {
    state: StateVector<T>,
    labels: Vec<Label>,
}

impl<T: Real> JointRegister<T> {
    /// `n` data wires in `|0…0⟩` followed by `M` pairs `(c_i, s_i)` in `|Φ_00⟩`.
    pub fn setup(n: usize, m: usize) -> Result<Self> {
        check_cap(n + 2 * m, DEFAULT_QUBIT_CAP)?;
        let mut state = StateVector::new(n)?;
        let mut labels: Vec<Label> = (1..=n).map(Label::Data).collect();
        let pair = bell_state::<T>(false, false);
        for i in 1..=m {
            state = state.tensor(&pair)?;
            labels.extend([Label::Client(i), Label::Server(i)]);
        }
        Ok(Self { state, labels })
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn into_state(self) -> StateVector<T> {
        self.state
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_data(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, Label::Data(_))).count()
    }

    /// Bell pairs whose Client half is still live.
    pub fn num_pairs(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, Label::Client(_))).count()
    }

    pub fn wire_of(&self, label: Label) -> Result<usize> {
        self.labels.iter().position(|&l| l == label).map(|k| k + 1).ok_or(Error::DeadLabel(label))
    }

    /// Replaces the `|0…0⟩` data placeholder with `ciphertext`.
    pub fn load_ciphertext(&mut self, ciphertext: &StateVector<T>) -> Result<()> {
        let n = self.num_data();
        if ciphertext.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: ciphertext.num_qubits() });
        }
        if self.labels[..n].iter().enumerate().any(|(k, &l)| l != Label::Data(k + 1)) {
            return Err(Error::PlanMismatch("data wires are no longer in place".into()));
        }
        let rest = self.state.num_qubits() - n;
        let old = self.state.amplitudes();
        let amps = ciphertext
            .amplitudes()
            .iter()
            .flat_map(|d| old[..1 << rest].iter().map(move |r| *d * *r))
            .collect();
        self.state = StateVector::from_amplitudes(amps)?;
        Ok(())
    }

    /// Applies a circuit gate whose wires name data labels.
    pub fn apply_on_data(&mut self, gate: &Gate) -> Result<()> {
        for w in gate.wires() {
            self.wire_of(Label::Data(w))?;
        }
        let mapped = gate.remap(|w| self.wire_of(Label::Data(w)).expect("checked above"));
        self.state.apply(&mapped)
    }

    /// Physically swaps the qubits under two labels; the labels stay put.
    pub fn swap(&mut self, a: Label, b: Label) -> Result<()> {
        let (wa, wb) = (self.wire_of(a)?, self.wire_of(b)?);
        self.state.apply(&Gate::Swap(wa, wb))
    }

    /// Measures `(q1, q2)` in the `u`-rotated Bell basis; both labels are
    /// consumed.
    pub fn measure(
        &mut self,
        q1: Label,
        q2: Label,
        u: &CMatrix<T>,
        source: OutcomeSource<'_>,
    ) -> Result<PairMeasurement<T>> {
        let (w1, w2) = (self.wire_of(q1)?, self.wire_of(q2)?);
        let m = rotated_bell_measure(&self.state, w1, w2, u, source)?;
        self.state = m.state;
        self.labels.retain(|&l| l != q1 && l != q2);
        Ok(PairMeasurement {
            outcome: m.outcome,
            probability: m.probability,
            branch_probabilities: m.branch_probabilities,
        })
    }
}

/// Encrypted gate: Client measures `(data, c)` in the basis rotated by `u`,
/// after which `s` holds `X^{r_x} Z^{r_z} u|α⟩`.
pub fn eg_u<T: Real>(
    mut register: JointRegister<T>,
    data_label: Label,
    bell: (Label, Label),
    u: &CMatrix<T>,
    source: OutcomeSource<'_>,
) -> Result<(MeasurementOutcome, JointRegister<T>)> {
    register.wire_of(bell.1)?;
    let m = register.measure(data_label, bell.0, u, source)?;
    Ok((m.outcome, register))
}
