use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpqhe::audit::{
    compactness_report, deferred_equivalence_exhaustive, eg_security_audit, homomorphism_sweep,
    qotp_reference_system_audit, qotp_security_audit, random_family,
};
use tpqhe::circuits::RandomCircuitSpec;
use tpqhe::keyalg::{derive_plan_gt, derive_plan_vgt, Scheme};
use tpqhe::protocol::PauliKey;
use tpqhe::qsim::{bell_state, DensityMatrix, Gate};
use tpqhe::{parse_circuit, Circuit, DensityMatrixF64, StateVectorF64};

fn c1() -> Circuit {
    parse_circuit(include_str!("../../../circuits/c1.qc")).unwrap()
}

fn c2() -> Circuit {
    parse_circuit(include_str!("../../../circuits/c2.qc")).unwrap()
}

#[test]
fn qotp_mixes_entangled_three_qubit_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ghz = StateVectorF64::new(3)
        .unwrap()
        .apply_gate(&Gate::H(1))
        .unwrap()
        .apply_gate(&Gate::Cnot { control: 1, target: 2 })
        .unwrap()
        .apply_gate(&Gate::Cnot { control: 2, target: 3 })
        .unwrap();
    let mut plaintexts = vec![DensityMatrix::from_pure(&ghz)];
    plaintexts.extend((0..5).map(|_| DensityMatrix::from_pure(&StateVectorF64::random(3, &mut rng).unwrap())));
    let r = qotp_security_audit(3, &plaintexts, 1e-10).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.distances.len(), 6);
}

#[test]
fn unencrypted_state_is_far_from_mixed() {
    // sanity: the distance being measured is not identically zero
    let zero = DensityMatrixF64::from_pure(&StateVectorF64::new(1).unwrap());
    let d = zero.trace_distance(&DensityMatrix::maximally_mixed(1).unwrap()).unwrap();
    assert!((d - 1.0).abs() < 1e-12);
}

#[test]
fn reference_system_with_mixed_environment() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let psi = StateVectorF64::random(2, &mut rng).unwrap().tensor(&bell_state(true, true)).unwrap();
    let r = qotp_reference_system_audit(1, &DensityMatrix::from_pure(&psi), 1e-10).unwrap();
    assert!(r.pass, "{r:?}");
    let r = qotp_reference_system_audit(2, &DensityMatrix::from_pure(&psi), 1e-10).unwrap();
    assert!(r.pass, "{r:?}");
    let big = DensityMatrixF64::maximally_mixed(5).unwrap();
    assert!(qotp_reference_system_audit(1, &big, 1e-10).is_err());
}

#[test]
fn eg_hides_the_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let alpha = StateVectorF64::random(1, &mut rng).unwrap();
        let r = eg_security_audit(&alpha, 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn deferred_matches_immediate_on_c1_and_c2() {
    let sk = PauliKey::new(vec![true], vec![false]).unwrap();
    let r = deferred_equivalence_exhaustive(&c1(), &StateVectorF64::new(1).unwrap(), &sk, 1e-9).unwrap();
    assert_eq!(r.tuples, 16);
    assert!(r.pass, "max gap {}", r.max_gap);
    let sk = PauliKey::new(vec![false, true], vec![true, true]).unwrap();
    let r = deferred_equivalence_exhaustive(&c2(), &StateVectorF64::new(2).unwrap(), &sk, 1e-9).unwrap();
    assert_eq!(r.tuples, 64);
    assert!(r.pass, "max gap {}", r.max_gap);
}

#[test]
fn compactness_of_golden_plans() {
    let r = compactness_report(&derive_plan_gt(&c1()));
    assert_eq!(r.arities.g, [1, 3]);
    assert_eq!(r.arities.f_final, [4, 4]);
    assert!(r.pass);
    let r = compactness_report(&derive_plan_vgt(&c2()));
    assert!(r.arities.g.iter().all(|&a| a <= 4));
    assert!(r.arities.f_rounds.iter().flatten().all(|&a| a <= 6));
    assert_eq!(r.measurement_count, 3);
    assert!(r.pass);
}

#[test]
fn sweep_over_random_family() {
    let mut family = random_family(17, 20, RandomCircuitSpec::default());
    family.extend([c1(), c2(), Circuit::empty(1).unwrap()]);
    for scheme in [Scheme::Gt, Scheme::Vgt] {
        let s = homomorphism_sweep::<f64>(scheme, &family, 3, 0, 1e-9).unwrap();
        assert!(s.pass, "{:?}", s.failures);
        assert_eq!(s.trials, 69);
    }
}
