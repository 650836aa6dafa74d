use num_complex::Complex64;
use tpqhe::keyalg::apply_rule;
use tpqhe::qsim::{
    operator_fidelity, pauli, phase_power, rotated_bell_measure, CMatrix, Gate, GateKind, MeasurementOutcome,
    OutcomeSource, StateVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const BITS: [bool; 2] = [false, true];

fn m(k: GateKind) -> CMatrix {
    k.matrix()
}

fn same_up_to_phase(a: &CMatrix, b: &CMatrix) -> bool {
    (operator_fidelity(a, b).unwrap() - 1.0).abs() <= TOL
}

fn xz(a: bool, b: bool) -> CMatrix {
    pauli(a, b)
}

fn zx(b: bool, a: bool) -> CMatrix {
    &pauli(false, b) * &pauli(a, false)
}

#[test]
fn gate_matrices_match_their_definitions() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let lit = |v: [Complex64; 4]| CMatrix::from_row_major(2, v.to_vec()).unwrap();
    let hs = Complex64::new(s, 0.0);
    assert!(m(GateKind::H).max_abs_diff(&lit([hs, hs, hs, -hs])) < 1e-15);
    assert!(m(GateKind::P).max_abs_diff(&lit([o, z, z, Complex64::i()])) < 1e-15);
    assert!(m(GateKind::T).max_abs_diff(&lit([o, z, z, Complex64::new(s, s)])) < 1e-15);
    assert!(m(GateKind::TDagger).max_abs_diff(&lit([o, z, z, Complex64::new(s, -s)])) < 1e-15);
    let mut cnot = vec![z; 16];
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[4 * r + c] = o;
    }
    assert!(m(GateKind::Cnot).max_abs_diff(&CMatrix::from_row_major(4, cnot).unwrap()) < 1e-15);
}

#[test]
fn pauli_commutation() {
    for a in BITS {
        for b in BITS {
            let sign = if a && b { -1.0 } else { 1.0 };
            let lhs = xz(a, b);
            let rhs = zx(b, a).scale_real(sign);
            assert!(lhs.max_abs_diff(&rhs) < 1e-15, "a={a} b={b}");
        }
    }
}

#[test]
fn single_qubit_conjugation_identities() {
    let (h, p, t, td) = (m(GateKind::H), m(GateKind::P), m(GateKind::T), m(GateKind::TDagger));
    for a in BITS {
        for b in BITS {
            assert!(same_up_to_phase(&(&h * &xz(a, b)), &(&zx(a, b) * &h)));
            assert!(same_up_to_phase(&(&p * &xz(a, b)), &(&xz(a, a ^ b) * &p)));
            let pa = phase_power(a);
            assert!(same_up_to_phase(&(&(&pa * &t) * &xz(a, b)), &(&xz(a, a ^ b) * &t)));
            assert!(same_up_to_phase(&(&(&pa * &td) * &xz(a, b)), &(&xz(a, b) * &td)));
        }
    }
}

#[test]
fn cnot_conjugation_identity() {
    let cnot = m(GateKind::Cnot);
    for bits in 0..16u8 {
        let [a, b, c, d] = [bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0];
        let lhs = &cnot * &xz(a, b).kron(&xz(c, d));
        let rhs = &xz(a, b ^ d).kron(&xz(a ^ c, d)) * &cnot;
        assert!(same_up_to_phase(&lhs, &rhs), "a={a} b={b} c={c} d={d}");
    }
}

#[test]
fn t_dagger_is_seven_ts() {
    assert!(same_up_to_phase(&m(GateKind::T).pow(7), &m(GateKind::TDagger)));
    assert!(same_up_to_phase(&m(GateKind::T).pow(2), &m(GateKind::P)));
}

#[test]
fn swap_is_three_cnots() {
    let cnot12 = m(GateKind::Cnot);
    let h2 = m(GateKind::H).kron(&m(GateKind::H));
    let cnot21 = &(&h2 * &cnot12) * &h2;
    let three = &(&cnot12 * &cnot21) * &cnot12;
    assert!(same_up_to_phase(&three, &m(GateKind::Swap)));
    // and on a register, gate by gate
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = StateVector::<f64>::random(3, &mut rng).unwrap();
    let via_swap = s.clone().apply_gate(&Gate::Swap(1, 3)).unwrap();
    let via_cnots = [Gate::Cnot { control: 1, target: 3 }, Gate::Cnot { control: 3, target: 1 }, Gate::Cnot { control: 1, target: 3 }]
        .iter()
        .fold(s, |s, g| s.apply_gate(g).unwrap());
    assert!((via_swap.fidelity_up_to_phase(&via_cnots).unwrap() - 1.0).abs() < TOL);
}

/// The key rules are exactly the Pauli conjugation relations: `g X^a Z^b ∝ X^a' Z^b' g`.
#[test]
fn rules_agree_with_matrices_for_cliffords() {
    for kind in [GateKind::X, GateKind::Z, GateKind::H, GateKind::P] {
        let g = m(kind);
        for a in BITS {
            for b in BITS {
                let (mut x, mut z) = (vec![a], vec![b]);
                apply_rule(&mut x, &mut z, &Gate::single(kind, 1).unwrap(), None).unwrap();
                assert!(same_up_to_phase(&(&g * &xz(a, b)), &(&xz(x[0], z[0]) * &g)), "{kind:?} a={a} b={b}");
            }
        }
    }
    let cnot = m(GateKind::Cnot);
    for bits in 0..16u8 {
        let (mut x, mut z) = (vec![bits & 8 != 0, bits & 2 != 0], vec![bits & 4 != 0, bits & 1 != 0]);
        let before = xz(x[0], z[0]).kron(&xz(x[1], z[1]));
        apply_rule(&mut x, &mut z, &Gate::Cnot { control: 1, target: 2 }, None).unwrap();
        let after = xz(x[0], z[0]).kron(&xz(x[1], z[1]));
        assert!(same_up_to_phase(&(&cnot * &before), &(&after * &cnot)), "bits={bits:04b}");
    }
}

/// T and T† rules: the mask after `X^{r_x} Z^{r_z} P^x T X^x Z^z` (and the
/// T† analogue) is the rule's output.
#[test]
fn rules_agree_with_matrices_for_t_gates() {
    for (kind, gate) in [(GateKind::T, Gate::T(1)), (GateKind::TDagger, Gate::TDagger(1))] {
        let t = m(kind);
        for bits in 0..16u8 {
            let [x0, z0, rx, rz] = [bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0];
            let (mut x, mut z) = (vec![x0], vec![z0]);
            apply_rule(&mut x, &mut z, &gate, Some((rx, rz))).unwrap();
            let lhs = &(&(&xz(rx, rz) * &phase_power(x0)) * &t) * &xz(x0, z0);
            assert!(same_up_to_phase(&lhs, &(&xz(x[0], z[0]) * &t)), "{kind:?} bits={bits:04b}");
        }
    }
}

/// Circuit form of the rotated Bell measurement: `U` on the first wire,
/// CNOT, H on the first wire, then a computational-basis readout. The first
/// wire reads `b` and the second reads `a`.
#[test]
fn circuit_form_of_rotated_bell_measurement() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for u in [CMatrix::identity(2), phase_power(true), m(GateKind::H), m(GateKind::T)] {
        let s = StateVector::<f64>::random(3, &mut rng).unwrap();
        let mut rotated = s.clone();
        rotated.apply_single(1, &u).unwrap();
        let rotated = [Gate::Cnot { control: 1, target: 2 }, Gate::H(1)]
            .iter()
            .fold(rotated, |s, g| s.apply_gate(g).unwrap());
        for outcome in MeasurementOutcome::ALL {
            let base = (outcome.b as usize) << 2 | (outcome.a as usize) << 1;
            let branch = [rotated.amplitudes()[base], rotated.amplitudes()[base | 1]];
            let p_circuit: f64 = branch.iter().map(|c| c.norm_sqr()).sum();
            let r = rotated_bell_measure(&s, 1, 2, &u, OutcomeSource::Forced(outcome)).unwrap();
            assert!((r.probability - p_circuit).abs() < TOL);
            let post = StateVector::normalized(branch.to_vec()).unwrap();
            assert!((r.state.fidelity_up_to_phase(&post).unwrap() - 1.0).abs() < TOL);
        }
    }
}
