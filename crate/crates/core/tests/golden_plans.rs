use tpqhe::keyalg::{derive_plan_gt, derive_plan_vgt, eval_expr, AffineExpr, Assignment, KeyExprs, KeyUpdatePlan, Var};
use tpqhe::{parse_circuit, Circuit};

const C1: &str = include_str!("../../../circuits/c1.qc");
const C2: &str = include_str!("../../../circuits/c2.qc");

fn expr(constant: bool, vars: &[&str]) -> AffineExpr {
    AffineExpr::from_parts(constant, vars.iter().map(|v| v.parse::<Var>().unwrap()))
}

fn xor(vars: &[&str]) -> AffineExpr {
    expr(false, vars)
}

fn keys(rows: [[&[&str]; 2]; 2]) -> KeyExprs {
    KeyExprs { x: vec![xor(rows[0][0]), xor(rows[1][0])], z: vec![xor(rows[0][1]), xor(rows[1][1])] }
}

fn c1() -> Circuit {
    parse_circuit(C1).unwrap()
}

fn c2() -> Circuit {
    parse_circuit(C2).unwrap()
}

#[test]
fn gt_plan_for_c1() {
    let plan = derive_plan_gt(&c1());
    let g: Vec<_> = plan.g().cloned().collect();
    assert_eq!(g, [xor(&["x0(1)"]), xor(&["x0(1)", "z0(1)", "rz(1)"])]);
    assert_eq!(plan.final_map().x, [xor(&["z0(1)", "rx(1)", "rz(1)", "rz(2)"])]);
    assert_eq!(plan.final_map().z, [xor(&["x0(1)", "z0(1)", "rz(1)", "rx(2)"])]);
    assert_eq!(plan.round_maps().count(), 0);
}

#[test]
fn vgt_plan_for_c2() {
    let plan = derive_plan_vgt(&c2());
    let g: Vec<_> = plan.g().cloned().collect();
    assert_eq!(g, [xor(&["x0(2)", "z0(1)"]), xor(&["x3(1)", "x3(2)"]), xor(&["x5(2)"])]);
    let f: Vec<_> = plan.round_maps().cloned().collect();
    assert_eq!(
        f,
        [
            keys([[&["x0(2)", "z0(1)", "rx(1)"], &["x0(1)", "rz(1)"]], [&["x0(2)"], &["x0(1)", "z0(2)"]]]),
            keys([
                [&["x3(1)", "x3(2)", "rx(2)"], &["x3(1)", "x3(2)", "z3(1)", "rz(2)"]],
                [&["x3(2)"], &["z3(1)", "z3(2)"]],
            ]),
            keys([[&["x5(1)"], &["z5(1)"]], [&["x5(2)", "rx(3)"], &["x5(2)", "z5(2)", "rz(3)"]]]),
        ]
    );
    assert_eq!(plan.final_map(), &keys([[&["x6(1)"], &["z6(1)"]], [&["z6(2)"], &["x6(2)"]]]));
}

#[test]
fn trivial_plans() {
    let plan = derive_plan_gt(&parse_circuit("qubits 1\nH 1").unwrap());
    assert_eq!(plan.num_rounds(), 0);
    assert_eq!(plan.final_map(), &KeyExprs { x: vec![xor(&["z0(1)"])], z: vec![xor(&["x0(1)"])] });

    let plan = derive_plan_gt(&parse_circuit("qubits 1\nT 1").unwrap());
    assert_eq!(plan.g().cloned().collect::<Vec<_>>(), [xor(&["x0(1)"])]);
    assert_eq!(
        plan.final_map(),
        &KeyExprs { x: vec![xor(&["x0(1)", "rx(1)"])], z: vec![xor(&["x0(1)", "z0(1)", "rz(1)"])] }
    );
}

#[test]
fn evaluating_the_c1_final_key() {
    let plan = derive_plan_gt(&c1());
    let mut a = Assignment::with_key(0, &[true], &[false]);
    a.bind_outcome(1, true, true);
    a.bind_outcome(2, false, true);
    assert!(eval_expr(&plan.final_map().x[0], &a).unwrap());
    assert!(eval_expr(&expr(true, &[]), &Assignment::new()).unwrap());
    assert!(eval_expr(&xor(&["rx(3)"]), &a).is_err());
}

#[test]
fn plan_json_names_targets_and_round_trips() {
    for plan in [derive_plan_gt(&c1()), derive_plan_vgt(&c2()), derive_plan_gt(&c2()), derive_plan_vgt(&c1())] {
        let text = plan.to_json();
        assert_eq!(KeyUpdatePlan::from_json(&text).unwrap(), plan);
        assert_eq!(plan.to_json(), text);
    }
    let v: serde_json::Value = serde_json::from_str(&derive_plan_vgt(&c2()).to_json()).unwrap();
    assert_eq!(v["scheme"], "VGT");
    assert_eq!(v["M"], 3);
    let targets: Vec<_> = v["g"].as_array().unwrap().iter().map(|g| g["target"].as_str().unwrap()).collect();
    assert_eq!(targets, ["x2(1)", "x4(1)", "x5(2)"]);
    assert_eq!(v["f_rounds"][1]["rows"][3]["target"], "z5(2)");
    assert_eq!(v["f_rounds"][1]["rows"][3]["vars"], serde_json::json!(["z3(1)", "z3(2)"]));
    assert_eq!(v["f_final"][2]["vars"], serde_json::json!(["z6(2)"]));
}

#[test]
fn plans_are_deterministic() {
    assert_eq!(derive_plan_vgt(&c2()), derive_plan_vgt(&c2()));
    assert_eq!(derive_plan_gt(&c2()).to_json(), derive_plan_gt(&c2()).to_json());
}
