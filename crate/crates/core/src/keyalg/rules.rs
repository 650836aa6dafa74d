//! Pauli-key update rules. Each rule maps the key `(x(w), z(w))` that
//! encrypts a wire before a gate to the key that encrypts it afterwards, so
//! that `G · X^x Z^z = X^x' Z^z' · G` up to global phase.

use std::ops::BitXor;

use crate::error::{Error, Result};
use crate::keyalg::expr::{AffineExpr, Var};
use crate::qsim::Gate;

/// Applies one gate's update rule to a key held as per-wire `x` and `z`
/// vectors (wire `w` at index `w - 1`).
///
/// `fresh` carries the measurement outcome bits `(r_x, r_z)` of the encrypted
/// phase gate that follows every T/T†, and must be present exactly for those.
pub fn apply_rule<B>(x: &mut [B], z: &mut [B], gate: &Gate, fresh: Option<(B, B)>) -> Result<()>
where
    B: Clone + BitXor<Output = B>,
{
    if let Gate::Swap(..) = gate {
        return Err(Error::UnsupportedGate(gate.to_string()));
    }
    let n = x.len();
    for w in gate.wires() {
        if w == 0 || w > n {
            return Err(Error::WireOutOfRange { wire: w, num_qubits: n });
        }
    }
    let t_like = gate.kind().is_t_like();
    if t_like != fresh.is_some() {
        return Err(Error::RoundMismatch {
            expected: t_like.then_some(0),
            found: fresh.is_some().then_some(0),
        });
    }
    match *gate {
        Gate::X(_) | Gate::Z(_) => {}
        Gate::H(w) => {
            let i = w - 1;
            std::mem::swap(&mut x[i], &mut z[i]);
        }
        Gate::P(w) => {
            let i = w - 1;
            z[i] = x[i].clone() ^ z[i].clone();
        }
        Gate::Cnot { control, target } => {
            if control == target {
                return Err(Error::DuplicateWire(control));
            }
            let (c, t) = (control - 1, target - 1);
            z[c] = z[c].clone() ^ z[t].clone();
            x[t] = x[c].clone() ^ x[t].clone();
        }
        Gate::T(w) => {
            let i = w - 1;
            let (rx, rz) = fresh.expect("checked above");
            let old_x = x[i].clone();
            x[i] = old_x.clone() ^ rx;
            z[i] = old_x ^ z[i].clone() ^ rz;
        }
        Gate::TDagger(w) => {
            let i = w - 1;
            let (rx, rz) = fresh.expect("checked above");
            x[i] = x[i].clone() ^ rx;
            z[i] = z[i].clone() ^ rz;
        }
        Gate::Swap(..) => unreachable!("rejected above"),
    }
    Ok(())
}

/// Symbolic key: one `(x(w), z(w))` expression pair per wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyExprState {
    pub x: Vec<AffineExpr>,
    pub z: Vec<AffineExpr>,
    pub rounds_consumed: usize,
}

impl KeyExprState {
    /// Key expressed over the secret-key variables `x0(w)`, `z0(w)`.
    pub fn initial(n: usize) -> Self {
        Self::fresh_at_step(n, 0, 0)
    }

    /// Key expressed over fresh variables `x{step}(w)`, `z{step}(w)`.
    pub fn fresh_at_step(n: usize, step: usize, rounds_consumed: usize) -> Self {
        Self {
            x: (1..=n).map(|wire| AffineExpr::var(Var::X { step, wire })).collect(),
            z: (1..=n).map(|wire| AffineExpr::var(Var::Z { step, wire })).collect(),
            rounds_consumed,
        }
    }

    pub fn num_wires(&self) -> usize {
        self.x.len()
    }

    /// Applies `gate`. `round` must be `Some(rounds_consumed + 1)` for T/T†
    /// (introducing fresh `rx(round)`, `rz(round)`) and `None` otherwise.
    pub fn update(&mut self, gate: &Gate, round: Option<usize>) -> Result<()> {
        let expected = gate.kind().is_t_like().then_some(self.rounds_consumed + 1);
        if round != expected {
            return Err(Error::RoundMismatch { expected, found: round });
        }
        let fresh = round.map(|i| (AffineExpr::var(Var::Rx(i)), AffineExpr::var(Var::Rz(i))));
        apply_rule(&mut self.x, &mut self.z, gate, fresh)?;
        if let Some(i) = round {
            self.rounds_consumed = i;
        }
        Ok(())
    }
}

/// Functional form of [`KeyExprState::update`].
pub fn update_key(mut keys: KeyExprState, gate: &Gate, round: Option<usize>) -> Result<KeyExprState> {
    keys.update(gate, round)?;
    Ok(keys)
}
