//! Symbolic Pauli-key tracking over GF(2).

pub mod expr;
pub mod plan;
pub mod rules;

pub use expr::{eval_expr, AffineExpr, Assignment, Var};
pub use plan::{
    derive_plan_gt, derive_plan_vgt, ExprRecord, KeyExprs, KeyTracker, KeyUpdatePlan, PlanRecord, PlanRound,
    RoundRecord, Scheme,
};
pub use rules::{apply_rule, update_key, KeyExprState};
