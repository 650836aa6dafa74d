//! Clifford+T circuits: the text format, validation, T/T† profiling and the
//! reference (plaintext) execution used as a correctness oracle.
//!
//! File format, one statement per line:
//!
//! ```text
//! # comment
//! qubits 2
//! H 1
//! CNOT 2 1     # control, target
//! TD 1         # T†
//! ```

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::qsim::{CMatrix, Gate, GateKind, StateVector};
use crate::scalar::Real;

/// A unitary circuit over wires `1..=num_wires`, gates applied in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_wires: usize,
    gates: Vec<Gate>,
}

/// Position of the `i`-th T/T† gate: 1-based gate index `j_i` and wire `w_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TPosition {
    pub index: usize,
    pub wire: usize,
    pub kind: GateKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CircuitProfile {
    pub positions: Vec<TPosition>,
}

impl CircuitProfile {
    /// Number of T/T† gates, `M`.
    pub fn t_count(&self) -> usize {
        self.positions.len()
    }
}

impl Circuit {
    pub fn new(num_wires: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_wires == 0 {
            return Err(Error::EmptyRegister);
        }
        for gate in &gates {
            validate_gate(num_wires, gate)?;
        }
        Ok(Self { num_wires, gates })
    }

    pub fn empty(num_wires: usize) -> Result<Self> {
        Self::new(num_wires, Vec::new())
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of gates, `N`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn profile(&self) -> CircuitProfile {
        let positions = self
            .gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind().is_t_like())
            .map(|(k, g)| TPosition { index: k + 1, wire: g.wires()[0], kind: g.kind() })
            .collect();
        CircuitProfile { positions }
    }

    /// Runs the circuit on a plaintext state.
    pub fn apply<T: Real>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        if state.num_qubits() != self.num_wires {
            return Err(Error::DimensionMismatch { expected: self.num_wires, found: state.num_qubits() });
        }
        let mut out = state.clone();
        for gate in &self.gates {
            out.apply(gate)?;
        }
        Ok(out)
    }

    /// Full `2^n × 2^n` unitary, built column by column.
    pub fn unitary<T: Real>(&self) -> Result<CMatrix<T>> {
        let dim = 1usize << self.num_wires;
        let mut m = CMatrix::zeros(dim);
        for col in 0..dim {
            let out = self.apply(&StateVector::<T>::basis(self.num_wires, col)?)?;
            for (row, amp) in out.amplitudes().iter().enumerate() {
                m[(row, col)] = *amp;
            }
        }
        Ok(m)
    }
}

fn validate_gate(num_wires: usize, gate: &Gate) -> Result<()> {
    if gate.kind() == GateKind::Swap {
        return Err(Error::UnsupportedGate(gate.to_string()));
    }
    let wires = gate.wires();
    for &w in &wires {
        if w == 0 || w > num_wires {
            return Err(Error::WireOutOfRange { wire: w, num_qubits: num_wires });
        }
    }
    if wires.len() == 2 && wires[0] == wires[1] {
        return Err(Error::DuplicateWire(wires[0]));
    }
    Ok(())
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_wires)?;
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_circuit(text)
    }
}

/// Parses the line-oriented circuit format.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut num_wires: Option<usize> = None;
    let mut gates = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line has a token");
        let args: Vec<&str> = tokens.collect();

        let Some(n) = num_wires else {
            if head != "qubits" || args.len() != 1 {
                return Err(err(format!("expected `qubits <n>` header, found `{line}`")));
            }
            let n: i64 = args[0].parse().map_err(|_| err(format!("bad qubit count `{}`", args[0])))?;
            if n <= 0 {
                return Err(err(format!("qubit count must be positive, got {n}")));
            }
            num_wires = Some(n as usize);
            continue;
        };

        let kind = match head {
            "X" => GateKind::X,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "P" => GateKind::P,
            "T" => GateKind::T,
            "TD" => GateKind::TDagger,
            "CNOT" => GateKind::Cnot,
            other => return Err(err(format!("unknown gate `{other}`"))),
        };
        if args.len() != kind.arity() {
            return Err(err(format!("{head} takes {} wire(s), got {}", kind.arity(), args.len())));
        }
        let wires = args
            .iter()
            .map(|a| a.parse::<usize>().map_err(|_| err(format!("bad wire index `{a}`"))))
            .collect::<Result<Vec<_>>>()?;
        let gate = match kind {
            GateKind::Cnot => Gate::Cnot { control: wires[0], target: wires[1] },
            _ => Gate::single(kind, wires[0]).expect("single-qubit kind"),
        };
        validate_gate(n, &gate).map_err(|e| err(e.to_string()))?;
        gates.push(gate);
    }
    let n = num_wires.ok_or(Error::Parse { line: 0, message: "missing `qubits <n>` header".into() })?;
    Circuit::new(n, gates)
}

pub fn profile(circuit: &Circuit) -> CircuitProfile {
    circuit.profile()
}

pub fn apply_circuit<T: Real>(state: &StateVector<T>, circuit: &Circuit) -> Result<StateVector<T>> {
    circuit.apply(state)
}

/// Bounds for [`random_circuit`].
#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitSpec {
    pub max_wires: usize,
    pub max_gates: usize,
    pub max_t: usize,
}

impl Default for RandomCircuitSpec {
    fn default() -> Self {
        Self { max_wires: 3, max_gates: 20, max_t: 5 }
    }
}

/// Uniformly random Clifford+T circuit within `spec`. Wire count and length
/// are drawn uniformly; once `max_t` T/T† gates are placed, further draws of
/// T/T† are replaced by Clifford gates.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, spec: RandomCircuitSpec) -> Circuit {
    let n = rng.random_range(1..=spec.max_wires.max(1));
    let len = rng.random_range(0..=spec.max_gates);
    let mut t_left = spec.max_t;
    let mut gates = Vec::with_capacity(len);
    let mut kinds = vec![GateKind::X, GateKind::Z, GateKind::H, GateKind::P, GateKind::T, GateKind::TDagger];
    if n >= 2 {
        kinds.push(GateKind::Cnot);
    }
    while gates.len() < len {
        let kind = kinds[rng.random_range(0..kinds.len())];
        if kind.is_t_like() {
            if t_left == 0 {
                continue;
            }
            t_left -= 1;
        }
        let gate = if kind == GateKind::Cnot {
            let control = rng.random_range(1..=n);
            let mut target = rng.random_range(1..n);
            if target >= control {
                target += 1;
            }
            Gate::Cnot { control, target }
        } else {
            Gate::single(kind, rng.random_range(1..=n)).expect("single-qubit kind")
        };
        gates.push(gate);
    }
    Circuit::new(n, gates).expect("generated gates are in range")
}
