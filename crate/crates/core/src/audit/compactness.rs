use serde::Serialize;

use crate::keyalg::{AffineExpr, KeyExprs, KeyUpdatePlan, Scheme, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arities {
    pub g: Vec<usize>,
    /// GT: rows of `f`. VGT: rows of `f_{M+1}`.
    pub f_final: Vec<usize>,
    /// VGT only: rows of each `f_i`.
    pub f_rounds: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompactnessReport {
    pub scheme: Scheme,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub arities: Arities,
    /// Variable reads Client performs to evaluate the whole plan.
    pub xor_terms: usize,
    pub measurement_count: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

fn row_arities(k: &KeyExprs) -> Vec<usize> {
    k.rows().map(AffineExpr::arity).collect()
}

/// Checks that `e` has at most `bound` variables, all accepted by `allowed`.
fn check(violations: &mut Vec<String>, name: String, e: &AffineExpr, bound: usize, allowed: impl Fn(&Var) -> bool) {
    if e.arity() > bound {
        violations.push(format!("{name} reads {} variables, bound is {bound}", e.arity()));
    }
    if let Some(v) = e.vars().find(|v| !allowed(v)) {
        violations.push(format!("{name} reads {v}, outside its alphabet"));
    }
}

/// Arity and alphabet bounds of a plan. GT: `g_i` over the secret key and
/// earlier outcomes (`≤ 2n + 2(i-1)`), `f` rows `≤ 2n + 2M`. VGT: `g_i` over
/// the previous intermediate key (`≤ 2n`), `f_i` rows add this round's
/// outcome (`≤ 2n + 2`), `f_{M+1}` rows `≤ 2n`.
pub fn compactness_report(plan: &KeyUpdatePlan) -> CompactnessReport {
    let n = plan.num_wires();
    let m = plan.num_rounds();
    let mut violations = Vec::new();
    let key_at = |step: usize| move |v: &Var| matches!(*v, Var::X { step: s, .. } | Var::Z { step: s, .. } if s == step);

    for (k, round) in plan.rounds().iter().enumerate() {
        let i = k + 1;
        match plan.scheme() {
            Scheme::Gt => check(&mut violations, format!("g{i}"), &round.g, 2 * n + 2 * (i - 1), |v| match *v {
                Var::Rx(r) | Var::Rz(r) => r < i,
                _ => key_at(0)(v),
            }),
            Scheme::Vgt => {
                check(&mut violations, format!("g{i}"), &round.g, 2 * n, key_at(round.input_step));
                for (r, row) in round.f.iter().flat_map(KeyExprs::rows).enumerate() {
                    check(&mut violations, format!("f{i} row {}", r + 1), row, 2 * n + 2, |v| match *v {
                        Var::Rx(r) | Var::Rz(r) => r == i,
                        _ => key_at(round.input_step)(v),
                    });
                }
            }
        }
    }
    let (final_bound, final_step) = match plan.scheme() {
        Scheme::Gt => (2 * n + 2 * m, 0),
        Scheme::Vgt => (2 * n, plan.rounds().last().map_or(0, |r| r.gate_index)),
    };
    for (r, row) in plan.final_map().rows().enumerate() {
        check(&mut violations, format!("f_final row {}", r + 1), row, final_bound, |v| match *v {
            Var::Rx(_) | Var::Rz(_) => plan.scheme() == Scheme::Gt,
            _ => key_at(final_step)(v),
        });
    }

    let arities = Arities {
        g: plan.g().map(AffineExpr::arity).collect(),
        f_final: row_arities(plan.final_map()),
        f_rounds: plan.round_maps().map(row_arities).collect(),
    };
    let xor_terms = arities.g.iter().chain(&arities.f_final).chain(arities.f_rounds.iter().flatten()).sum();
    CompactnessReport {
        scheme: plan.scheme(),
        n,
        m,
        arities,
        xor_terms,
        measurement_count: m,
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::parse_circuit;
    use crate::keyalg::{derive_plan_gt, derive_plan_vgt};

    #[test]
    fn single_t_counts() {
        let c = parse_circuit("qubits 1\nT 1").unwrap();
        let r = compactness_report(&derive_plan_gt(&c));
        assert_eq!(r.arities.g, [1]);
        assert_eq!(r.arities.f_final, [2, 3]);
        assert_eq!(r.xor_terms, 6);
        assert!(r.pass);
        let r = compactness_report(&derive_plan_vgt(&c));
        assert_eq!(r.arities.f_rounds, [vec![2, 3]]);
        assert_eq!(r.arities.f_final, [1, 1]);
        assert!(r.pass);
    }

    #[test]
    fn clifford_only_plan() {
        let c = parse_circuit("qubits 2\nH 1\nCNOT 1 2").unwrap();
        let r = compactness_report(&derive_plan_vgt(&c));
        assert_eq!(r.measurement_count, 0);
        assert!(r.arities.f_final.iter().all(|&a| a <= 4));
        assert!(r.pass);
    }

    #[test]
    fn serializes_stable_fields() {
        let c = parse_circuit("qubits 1\nT 1").unwrap();
        let v = serde_json::to_value(compactness_report(&derive_plan_gt(&c))).unwrap();
        for field in ["scheme", "n", "M", "arities", "pass"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert_eq!(v["scheme"], "GT");
    }
}
