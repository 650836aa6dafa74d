//! The gate set {X, Z, H, P, CNOT, T, T†} plus the protocol-internal SWAP.

use std::fmt;

use crate::qsim::matrix::CMatrix;
use crate::scalar::{c, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Z,
    H,
    P,
    T,
    TDagger,
    Cnot,
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::P => "P",
            GateKind::T => "T",
            GateKind::TDagger => "TD",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
        }
    }

    pub fn is_t_like(self) -> bool {
        matches!(self, GateKind::T | GateKind::TDagger)
    }

    /// The unitary of this gate: 2×2 for single-qubit kinds, 4×4 for CNOT
    /// (first qubit is the control) and SWAP.
    pub fn matrix<T: Real>(self) -> CMatrix<T> {
        let o = c::<T>(0.0, 0.0);
        let l = c::<T>(1.0, 0.0);
        let h = c::<T>(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let w = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            GateKind::X => CMatrix::from_rows([[o, l], [l, o]]),
            GateKind::Z => CMatrix::from_rows([[l, o], [o, -l]]),
            GateKind::H => CMatrix::from_rows([[h, h], [h, -h]]),
            GateKind::P => CMatrix::from_rows([[l, o], [o, c(0.0, 1.0)]]),
            GateKind::T => CMatrix::from_rows([[l, o], [o, c(w, w)]]),
            GateKind::TDagger => CMatrix::from_rows([[l, o], [o, c(w, -w)]]),
            GateKind::Cnot => CMatrix::from_rows([
                [l, o, o, o],
                [o, l, o, o],
                [o, o, o, l],
                [o, o, l, o],
            ]),
            GateKind::Swap => CMatrix::from_rows([
                [l, o, o, o],
                [o, o, l, o],
                [o, l, o, o],
                [o, o, o, l],
            ]),
        }
    }
}

/// A gate bound to its wires (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    P(usize),
    T(usize),
    TDagger(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
}

impl Gate {
    pub fn single(kind: GateKind, wire: usize) -> Option<Gate> {
        Some(match kind {
            GateKind::X => Gate::X(wire),
            GateKind::Z => Gate::Z(wire),
            GateKind::H => Gate::H(wire),
            GateKind::P => Gate::P(wire),
            GateKind::T => Gate::T(wire),
            GateKind::TDagger => Gate::TDagger(wire),
            GateKind::Cnot | GateKind::Swap => return None,
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::Z(_) => GateKind::Z,
            Gate::H(_) => GateKind::H,
            Gate::P(_) => GateKind::P,
            Gate::T(_) => GateKind::T,
            Gate::TDagger(_) => GateKind::TDagger,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Swap(..) => GateKind::Swap,
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::X(w) | Gate::Z(w) | Gate::H(w) | Gate::P(w) | Gate::T(w) | Gate::TDagger(w) => vec![w],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn acts_on(&self, wire: usize) -> bool {
        self.wires().contains(&wire)
    }

    /// Same gate with every wire passed through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::X(w) => Gate::X(map(w)),
            Gate::Z(w) => Gate::Z(map(w)),
            Gate::H(w) => Gate::H(map(w)),
            Gate::P(w) => Gate::P(map(w)),
            Gate::T(w) => Gate::T(map(w)),
            Gate::TDagger(w) => Gate::TDagger(map(w)),
            Gate::Cnot { control, target } => Gate::Cnot { control: map(control), target: map(target) },
            Gate::Swap(a, b) => Gate::Swap(map(a), map(b)),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().mnemonic())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// `X^a Z^b` as a 2×2 matrix.
pub fn pauli<T: Real>(a: bool, b: bool) -> CMatrix<T> {
    let x = GateKind::X.matrix::<T>().pow(a as u32);
    let z = GateKind::Z.matrix::<T>().pow(b as u32);
    &x * &z
}

/// `P^x`, the rotation baked into the encrypted-gate measurement basis.
pub fn phase_power<T: Real>(x: bool) -> CMatrix<T> {
    GateKind::P.matrix::<T>().pow(x as u32)
}
