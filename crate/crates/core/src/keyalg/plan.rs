//! Key-update plans: the classical functions the evaluator derives from its
//! circuit and ships back with the result, so the client can pick each
//! measurement basis and recover the final decryption key.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::keyalg::expr::{AffineExpr, Assignment, Var};
use crate::keyalg::rules::KeyExprState;
use crate::qsim::MeasurementOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Monolithic plan: `g_i` and the final-key map `f` over the secret key
    /// and all earlier outcomes.
    #[serde(rename = "GT")]
    Gt,
    /// Per-round plan: `g_i` and `f_i` over the previous intermediate key only.
    #[serde(rename = "VGT")]
    Vgt,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Gt => "GT",
            Scheme::Vgt => "VGT",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gt" => Ok(Scheme::Gt),
            "vgt" => Ok(Scheme::Vgt),
            _ => Err(Error::MalformedPlan(format!("unknown scheme `{s}`"))),
        }
    }
}

/// A full `2n`-bit key map: one `(x(w), z(w))` expression pair per wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyExprs {
    pub x: Vec<AffineExpr>,
    pub z: Vec<AffineExpr>,
}

impl KeyExprs {
    fn from_state(state: &KeyExprState) -> Self {
        Self { x: state.x.clone(), z: state.z.clone() }
    }

    /// Rows in wire order: `x(1), z(1), x(2), z(2), …`.
    pub fn rows(&self) -> impl Iterator<Item = &AffineExpr> {
        self.x.iter().zip(&self.z).flat_map(|(x, z)| [x, z])
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<(Vec<bool>, Vec<bool>)> {
        let x = self.x.iter().map(|e| e.eval(assignment)).collect::<Result<_>>()?;
        let z = self.z.iter().map(|e| e.eval(assignment)).collect::<Result<_>>()?;
        Ok((x, z))
    }

    /// Substitutes every variable, e.g. to compose two per-round maps.
    pub fn substitute(&self, mut f: impl FnMut(Var) -> AffineExpr) -> KeyExprs {
        KeyExprs {
            x: self.x.iter().map(|e| e.substitute(&mut f)).collect(),
            z: self.z.iter().map(|e| e.substitute(&mut f)).collect(),
        }
    }
}

/// One T/T† round of a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanRound {
    /// 1-based index `j_i` of the T/T† gate in the circuit.
    pub gate_index: usize,
    /// Wire `w_i` it acts on.
    pub wire: usize,
    /// Step whose key variables this round's functions read: 0 for GT,
    /// `j_{i-1}` for VGT.
    pub input_step: usize,
    /// `g_i`: the bit `x_{j_i - 1}(w_i)` selecting the basis `Φ(P^b)`.
    pub g: AffineExpr,
    /// `f_i` (VGT only): the key `(x_{j_i}, z_{j_i})`.
    pub f: Option<KeyExprs>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyUpdatePlan {
    scheme: Scheme,
    n: usize,
    num_gates: usize,
    rounds: Vec<PlanRound>,
    /// GT: `f`; VGT: `f_{M+1}`.
    final_map: KeyExprs,
}

/// Monolithic plan: every `g_i` and `f` are written over `x0, z0` and the
/// outcome bits of earlier rounds.
pub fn derive_plan_gt(circuit: &Circuit) -> KeyUpdatePlan {
    let mut keys = KeyExprState::initial(circuit.num_wires());
    let mut rounds = Vec::new();
    for (k, gate) in circuit.gates().iter().enumerate() {
        if gate.kind().is_t_like() {
            let wire = gate.wires()[0];
            let i = keys.rounds_consumed + 1;
            rounds.push(PlanRound { gate_index: k + 1, wire, input_step: 0, g: keys.x[wire - 1].clone(), f: None });
            keys.update(gate, Some(i)).expect("valid circuit");
        } else {
            keys.update(gate, None).expect("valid circuit");
        }
    }
    KeyUpdatePlan {
        scheme: Scheme::Gt,
        n: circuit.num_wires(),
        num_gates: circuit.len(),
        rounds,
        final_map: KeyExprs::from_state(&keys),
    }
}

/// Per-round plan: after each T/T† the symbolic key is restarted from fresh
/// variables naming the intermediate key, so every function reads at most
/// `2n + 2` bits.
pub fn derive_plan_vgt(circuit: &Circuit) -> KeyUpdatePlan {
    let n = circuit.num_wires();
    let mut keys = KeyExprState::initial(n);
    let mut input_step = 0;
    let mut rounds = Vec::new();
    for (k, gate) in circuit.gates().iter().enumerate() {
        if gate.kind().is_t_like() {
            let wire = gate.wires()[0];
            let i = keys.rounds_consumed + 1;
            let g = keys.x[wire - 1].clone();
            keys.update(gate, Some(i)).expect("valid circuit");
            rounds.push(PlanRound {
                gate_index: k + 1,
                wire,
                input_step,
                g,
                f: Some(KeyExprs::from_state(&keys)),
            });
            input_step = k + 1;
            keys = KeyExprState::fresh_at_step(n, input_step, i);
        } else {
            keys.update(gate, None).expect("valid circuit");
        }
    }
    KeyUpdatePlan { scheme: Scheme::Vgt, n, num_gates: circuit.len(), rounds, final_map: KeyExprs::from_state(&keys) }
}

impl KeyUpdatePlan {
    pub fn derive(scheme: Scheme, circuit: &Circuit) -> Self {
        match scheme {
            Scheme::Gt => derive_plan_gt(circuit),
            Scheme::Vgt => derive_plan_vgt(circuit),
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn num_wires(&self) -> usize {
        self.n
    }

    /// `M`, the number of T/T† rounds.
    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn num_gates(&self) -> usize {
        self.num_gates
    }

    pub fn rounds(&self) -> &[PlanRound] {
        &self.rounds
    }

    pub fn g(&self) -> impl Iterator<Item = &AffineExpr> {
        self.rounds.iter().map(|r| &r.g)
    }

    /// GT's `f` or VGT's `f_{M+1}`.
    pub fn final_map(&self) -> &KeyExprs {
        &self.final_map
    }

    /// VGT's `f_1 … f_M` (empty for GT).
    pub fn round_maps(&self) -> impl Iterator<Item = &KeyExprs> {
        self.rounds.iter().filter_map(|r| r.f.as_ref())
    }

    /// The map from `(x0, z0, rx(1..M), rz(1..M))` to the final key. For GT
    /// this is `f` itself; for VGT it is `f_{M+1} ∘ f_M ∘ … ∘ f_1` composed
    /// symbolically.
    pub fn composed_final_map(&self) -> KeyExprs {
        match self.scheme {
            Scheme::Gt => self.final_map.clone(),
            Scheme::Vgt => {
                let mut current = KeyExprs::from_state(&KeyExprState::initial(self.n));
                for round in &self.rounds {
                    let f = round.f.as_ref().expect("VGT rounds carry f_i");
                    current = f.substitute(|v| resolve(v, round.input_step, &current));
                }
                let last_step = self.rounds.last().map_or(0, |r| r.gate_index);
                self.final_map.substitute(|v| resolve(v, last_step, &current))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PlanRecord::from(self)).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: PlanRecord =
            serde_json::from_str(text).map_err(|e| Error::MalformedPlan(e.to_string()))?;
        record.try_into()
    }
}

fn resolve(v: Var, step: usize, current: &KeyExprs) -> AffineExpr {
    match v {
        Var::X { step: s, wire } if s == step => current.x[wire - 1].clone(),
        Var::Z { step: s, wire } if s == step => current.z[wire - 1].clone(),
        other => AffineExpr::var(other),
    }
}

/// Client-side evaluation of a plan, one measurement round at a time.
#[derive(Debug, Clone)]
pub struct KeyTracker<'p> {
    plan: &'p KeyUpdatePlan,
    assignment: Assignment,
    round: usize,
    xor_terms: usize,
}

impl<'p> KeyTracker<'p> {
    pub fn new(plan: &'p KeyUpdatePlan, x0: &[bool], z0: &[bool]) -> Result<Self> {
        if x0.len() != plan.n || z0.len() != plan.n {
            return Err(Error::PlanMismatch(format!(
                "key has {} bits per half, plan expects {}",
                x0.len(),
                plan.n
            )));
        }
        Ok(Self { plan, assignment: Assignment::with_key(0, x0, z0), round: 0, xor_terms: 0 })
    }

    /// Rounds completed so far.
    pub fn round(&self) -> usize {
        self.round
    }

    /// Number of variable reads performed so far, a proxy for classical work.
    pub fn xor_terms(&self) -> usize {
        self.xor_terms
    }

    /// Bit `b` of the next round's basis `Φ(P^b)`.
    pub fn next_basis_bit(&mut self) -> Result<bool> {
        let round = self
            .plan
            .rounds
            .get(self.round)
            .ok_or_else(|| Error::PlanMismatch(format!("plan has only {} rounds", self.plan.rounds.len())))?;
        self.xor_terms += round.g.arity();
        round.g.eval(&self.assignment)
    }

    /// Feeds the outcome of the current round's measurement.
    pub fn record(&mut self, outcome: MeasurementOutcome) -> Result<()> {
        let round = self
            .plan
            .rounds
            .get(self.round)
            .ok_or_else(|| Error::PlanMismatch(format!("plan has only {} rounds", self.plan.rounds.len())))?;
        self.round += 1;
        self.assignment.bind_outcome(self.round, outcome.a, outcome.b);
        if let Some(f) = &round.f {
            self.xor_terms += f.rows().map(AffineExpr::arity).sum::<usize>();
            let (x, z) = f.eval(&self.assignment)?;
            self.assignment = Assignment::with_key(round.gate_index, &x, &z);
        }
        Ok(())
    }

    /// Final decryption key `(x_final, z_final)`.
    pub fn finish(mut self) -> Result<(Vec<bool>, Vec<bool>)> {
        if self.round != self.plan.rounds.len() {
            return Err(Error::PlanMismatch(format!(
                "finished after {} of {} rounds",
                self.round,
                self.plan.rounds.len()
            )));
        }
        self.xor_terms += self.plan.final_map.rows().map(AffineExpr::arity).sum::<usize>();
        self.plan.final_map.eval(&self.assignment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprRecord {
    pub target: String,
    pub vars: Vec<String>,
    pub constant: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub rows: Vec<ExprRecord>,
}

/// Wire form of a [`KeyUpdatePlan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub scheme: Scheme,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub g: Vec<ExprRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<ExprRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_rounds: Option<Vec<RoundRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_final: Option<Vec<ExprRecord>>,
}

fn expr_record(target: Var, e: &AffineExpr) -> ExprRecord {
    ExprRecord {
        target: target.to_string(),
        vars: e.vars().map(Var::to_string).collect(),
        constant: e.constant_bit() as u8,
    }
}

fn key_rows(step: usize, k: &KeyExprs) -> Vec<ExprRecord> {
    (0..k.x.len())
        .flat_map(|i| {
            [
                expr_record(Var::X { step, wire: i + 1 }, &k.x[i]),
                expr_record(Var::Z { step, wire: i + 1 }, &k.z[i]),
            ]
        })
        .collect()
}

impl From<&KeyUpdatePlan> for PlanRecord {
    fn from(plan: &KeyUpdatePlan) -> Self {
        let g = plan
            .rounds
            .iter()
            .map(|r| expr_record(Var::X { step: r.gate_index - 1, wire: r.wire }, &r.g))
            .collect();
        let final_rows = key_rows(plan.num_gates, &plan.final_map);
        let (f, f_rounds, f_final) = match plan.scheme {
            Scheme::Gt => (Some(final_rows), None, None),
            Scheme::Vgt => {
                let rounds = plan
                    .rounds
                    .iter()
                    .enumerate()
                    .map(|(i, r)| RoundRecord {
                        round: i + 1,
                        rows: key_rows(r.gate_index, r.f.as_ref().expect("VGT rounds carry f_i")),
                    })
                    .collect();
                (None, Some(rounds), Some(final_rows))
            }
        };
        PlanRecord { scheme: plan.scheme, n: plan.n, m: plan.rounds.len(), g, f, f_rounds, f_final }
    }
}

fn parse_expr(r: &ExprRecord) -> Result<(Var, AffineExpr)> {
    let target: Var = r.target.parse()?;
    let vars = r.vars.iter().map(|v| v.parse::<Var>()).collect::<Result<Vec<_>>>()?;
    let e = AffineExpr::from_parts(r.constant != 0, vars.iter().copied());
    if e.arity() != vars.len() || r.constant > 1 {
        return Err(Error::MalformedPlan(format!("`{}` is not in canonical form", r.target)));
    }
    Ok((target, e))
}

/// Rebuilds a key map; returns the step its targets name.
fn parse_rows(n: usize, rows: &[ExprRecord]) -> Result<(usize, KeyExprs)> {
    if rows.len() != 2 * n {
        return Err(Error::MalformedPlan(format!("expected {} key rows, got {}", 2 * n, rows.len())));
    }
    let mut step = None;
    let (mut x, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (k, row) in rows.iter().enumerate() {
        let (target, e) = parse_expr(row)?;
        let wire = k / 2 + 1;
        let s = match (k % 2, target) {
            (0, Var::X { step, wire: w }) if w == wire => step,
            (1, Var::Z { step, wire: w }) if w == wire => step,
            _ => return Err(Error::MalformedPlan(format!("unexpected row target `{}`", row.target))),
        };
        if *step.get_or_insert(s) != s {
            return Err(Error::MalformedPlan("key rows name different steps".into()));
        }
        if k % 2 == 0 {
            x.push(e);
        } else {
            z.push(e);
        }
    }
    Ok((step.unwrap_or(0), KeyExprs { x, z }))
}

impl TryFrom<PlanRecord> for KeyUpdatePlan {
    type Error = Error;

    fn try_from(rec: PlanRecord) -> Result<Self> {
        if rec.g.len() != rec.m {
            return Err(Error::MalformedPlan(format!("M = {} but {} g functions", rec.m, rec.g.len())));
        }
        let mut rounds = Vec::with_capacity(rec.m);
        for r in &rec.g {
            let (target, g) = parse_expr(r)?;
            let Var::X { step, wire } = target else {
                return Err(Error::MalformedPlan(format!("g target `{}` is not an x bit", r.target)));
            };
            rounds.push(PlanRound { gate_index: step + 1, wire, input_step: 0, g, f: None });
        }
        let (num_gates, final_map) = match rec.scheme {
            Scheme::Gt => {
                let rows = rec.f.as_ref().ok_or_else(|| Error::MalformedPlan("GT plan lacks `f`".into()))?;
                parse_rows(rec.n, rows)?
            }
            Scheme::Vgt => {
                let f_rounds =
                    rec.f_rounds.as_ref().ok_or_else(|| Error::MalformedPlan("VGT plan lacks `f_rounds`".into()))?;
                if f_rounds.len() != rec.m {
                    return Err(Error::MalformedPlan("f_rounds length differs from M".into()));
                }
                let mut input_step = 0;
                for (round, fr) in rounds.iter_mut().zip(f_rounds) {
                    let (step, f) = parse_rows(rec.n, &fr.rows)?;
                    if step != round.gate_index {
                        return Err(Error::MalformedPlan(format!("round {} map targets step {step}", fr.round)));
                    }
                    round.input_step = input_step;
                    round.f = Some(f);
                    input_step = step;
                }
                let rows =
                    rec.f_final.as_ref().ok_or_else(|| Error::MalformedPlan("VGT plan lacks `f_final`".into()))?;
                parse_rows(rec.n, rows)?
            }
        };
        Ok(KeyUpdatePlan { scheme: rec.scheme, n: rec.n, num_gates, rounds, final_map })
    }
}
