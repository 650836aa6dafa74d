use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpqhe::audit::compactness_report;
use tpqhe::circuits::{random_circuit, RandomCircuitSpec};
use tpqhe::keyalg::{derive_plan_gt, derive_plan_vgt, Assignment, KeyTracker, KeyUpdatePlan};
use tpqhe::protocol::PauliKey;
use tpqhe::qsim::{Gate, MeasurementOutcome};
use tpqhe::{parse_circuit, Circuit, StateVectorF64};

fn circuit_from(seed: u64) -> Circuit {
    random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), RandomCircuitSpec::default())
}

fn bits(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.random()).collect()
}

fn outcome(k: usize) -> MeasurementOutcome {
    MeasurementOutcome::ALL[k & 3]
}

/// Final key via VGT's per-round maps, evaluated one round at a time.
fn vgt_final(plan: &KeyUpdatePlan, sk: &PauliKey, outcomes: &[MeasurementOutcome]) -> PauliKey {
    let mut t = KeyTracker::new(plan, &sk.x, &sk.z).unwrap();
    for &o in outcomes {
        t.record(o).unwrap();
    }
    let (x, z) = t.finish().unwrap();
    PauliKey::new(x, z).unwrap()
}

fn gt_final(plan: &KeyUpdatePlan, sk: &PauliKey, outcomes: &[MeasurementOutcome]) -> PauliKey {
    let mut a = Assignment::with_key(0, &sk.x, &sk.z);
    for (i, o) in outcomes.iter().enumerate() {
        a.bind_outcome(i + 1, o.a, o.b);
    }
    let (x, z) = plan.final_map().eval(&a).unwrap();
    PauliKey::new(x, z).unwrap()
}

/// Splits an integer into a key and `m` outcomes.
fn unpack(k: usize, n: usize, m: usize) -> (PauliKey, Vec<MeasurementOutcome>) {
    let x = (0..n).map(|w| k >> w & 1 == 1).collect();
    let z = (0..n).map(|w| k >> (n + w) & 1 == 1).collect();
    let outcomes = (0..m).map(|i| outcome(k >> (2 * n + 2 * i))).collect();
    (PauliKey::new(x, z).unwrap(), outcomes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), n in 1usize..=4, kind in 0usize..8, w in 1usize..=4, v in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = StateVectorF64::random(n, &mut rng).unwrap();
        let (w, v) = ((w - 1) % n + 1, (v - 1) % n + 1);
        let gate = match kind {
            0 => Gate::X(w), 1 => Gate::Z(w), 2 => Gate::H(w), 3 => Gate::P(w),
            4 => Gate::T(w), 5 => Gate::TDagger(w),
            6 => Gate::Cnot { control: w, target: v },
            _ => Gate::Swap(w, v),
        };
        match s.apply_gate(&gate) {
            Ok(out) => prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9),
            Err(_) => prop_assert!(kind >= 6 && w == v),
        }
    }

    #[test]
    fn parse_inverts_display(seed in any::<u64>()) {
        let c = circuit_from(seed);
        prop_assert_eq!(parse_circuit(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn plan_matches_concrete_iteration(seed in any::<u64>()) {
        let c = circuit_from(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let n = c.num_wires();
        let m = c.profile().t_count();
        let sk = PauliKey::keygen(n, &mut rng);
        let outcomes: Vec<_> = (0..m).map(|_| outcome(rng.random_range(0..4))).collect();
        let gt = derive_plan_gt(&c);
        prop_assert_eq!(gt_final(&gt, &sk, &outcomes), sk.evolve(&c, &outcomes).unwrap());

        // every g_i is the x bit of its wire just before its T/T†
        let mut key = sk.clone();
        let mut a = Assignment::with_key(0, &sk.x, &sk.z);
        let mut round = 0;
        for gate in c.gates() {
            if gate.kind().is_t_like() {
                let g = &gt.rounds()[round].g;
                prop_assert_eq!(g.eval(&a).unwrap(), key.x[gate.wires()[0] - 1]);
                a.bind_outcome(round + 1, outcomes[round].a, outcomes[round].b);
                key.update(gate, Some(outcomes[round])).unwrap();
                round += 1;
            } else {
                key.update(gate, None).unwrap();
            }
        }
    }

    #[test]
    fn vgt_composition_equals_gt(seed in any::<u64>()) {
        let c = circuit_from(seed);
        let n = c.num_wires();
        let m = c.profile().t_count();
        let gt = derive_plan_gt(&c);
        let vgt = derive_plan_vgt(&c);
        prop_assert_eq!(vgt.composed_final_map(), gt.final_map().clone());
        let width = 2 * n + 2 * m;
        if width <= 16 {
            for k in 0..1usize << width {
                let (sk, outcomes) = unpack(k, n, m);
                prop_assert_eq!(vgt_final(&vgt, &sk, &outcomes), gt_final(&gt, &sk, &outcomes));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
            for _ in 0..1000 {
                let sk = PauliKey::new(bits(&mut rng, n), bits(&mut rng, n)).unwrap();
                let outcomes: Vec<_> = (0..m).map(|_| outcome(rng.random_range(0..4))).collect();
                prop_assert_eq!(vgt_final(&vgt, &sk, &outcomes), gt_final(&gt, &sk, &outcomes));
            }
        }
    }

    #[test]
    fn plans_respect_arity_bounds(seed in any::<u64>()) {
        let c = circuit_from(seed);
        for plan in [derive_plan_gt(&c), derive_plan_vgt(&c)] {
            let r = compactness_report(&plan);
            prop_assert!(r.pass, "{:?}", r.violations);
            prop_assert_eq!(r.measurement_count, c.profile().t_count());
        }
    }

    #[test]
    fn plan_json_round_trips(seed in any::<u64>()) {
        let c = circuit_from(seed);
        for plan in [derive_plan_gt(&c), derive_plan_vgt(&c)] {
            let text = plan.to_json();
            prop_assert_eq!(KeyUpdatePlan::from_json(&text).unwrap(), plan.clone());
            prop_assert_eq!(KeyUpdatePlan::derive(plan.scheme(), &c).to_json(), text);
        }
    }
}
