use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpqhe::qsim::{Gate, MeasurementOutcome};
use tpqhe::StateVectorF64;

use crate::failure::Failure;

/// `01…` basis string, `plus` for `|+…+⟩`, or `random:<seed>` for a Haar
/// random state.
pub fn parse_input(spec: &str, n: usize) -> Result<StateVectorF64, Failure> {
    let state = if spec == "plus" {
        (1..=n).try_fold(StateVectorF64::new(n)?, |s, w| s.apply_gate(&Gate::H(w)))
    } else if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| Failure::Input(format!("bad seed in input spec `{spec}`")))?;
        StateVectorF64::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
    } else {
        if spec.len() != n {
            return Err(Failure::Input(format!("input `{spec}` has {} qubits, circuit has {n}", spec.len())));
        }
        let bits = parse_bits(spec).map_err(Failure::Input)?;
        StateVectorF64::from_bits(&bits)
    };
    Ok(state?)
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, String> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '_'))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("`{s}` is not a bit string")),
        })
        .collect()
}

/// `rx(1) rz(1) rx(2) rz(2) …`; must hold exactly `2M` bits.
pub fn parse_forced(s: &str, m: usize) -> Result<Vec<MeasurementOutcome>, String> {
    let bits = parse_bits(s)?;
    if bits.len() != 2 * m {
        return Err(format!("--forced needs 2M = {} bits, got {}", 2 * m, bits.len()));
    }
    Ok(bits.chunks(2).map(|p| MeasurementOutcome::new(p[0], p[1])).collect())
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
