use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A key-tracking variable.
///
/// `X`/`Z` with `step = 0` are the secret-key bits `x0(w)`, `z0(w)`; with
/// `step = k > 0` they name the intermediate key bits `xk(w)`, `zk(w)` after
/// `k` gates, used as fresh inputs of a per-round update map. `Rx(i)`/`Rz(i)`
/// are the outcome bits of the `i`-th rotated Bell measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X { step: usize, wire: usize },
    Z { step: usize, wire: usize },
    Rx(usize),
    Rz(usize),
}

impl Var {
    pub fn x0(wire: usize) -> Self {
        Var::X { step: 0, wire }
    }

    pub fn z0(wire: usize) -> Self {
        Var::Z { step: 0, wire }
    }

    /// Canonical order: x0 < z0 < xk < zk < rx < rz, then step, then index.
    fn sort_key(&self) -> (u8, usize, usize) {
        match *self {
            Var::X { step: 0, wire } => (0, 0, wire),
            Var::Z { step: 0, wire } => (1, 0, wire),
            Var::X { step, wire } => (2, step, wire),
            Var::Z { step, wire } => (3, step, wire),
            Var::Rx(i) => (4, 0, i),
            Var::Rz(i) => (5, 0, i),
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X { step, wire } => write!(f, "x{step}({wire})"),
            Var::Z { step, wire } => write!(f, "z{step}({wire})"),
            Var::Rx(i) => write!(f, "rx({i})"),
            Var::Rz(i) => write!(f, "rz({i})"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedPlan(format!("bad variable name `{s}`"));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let index: usize = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        match head {
            "rx" => Ok(Var::Rx(index)),
            "rz" => Ok(Var::Rz(index)),
            _ => {
                let (kind, step) = head.split_at(1);
                let step: usize = step.parse().map_err(|_| bad())?;
                match kind {
                    "x" => Ok(Var::X { step, wire: index }),
                    "z" => Ok(Var::Z { step, wire: index }),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// `constant ⊕ (⊕ vars)` over GF(2). The variable set is kept sorted and
/// duplicate-free, so two expressions are equal as functions iff they are
/// structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineExpr {
    constant: bool,
    vars: BTreeSet<Var>,
}

impl AffineExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: bool) -> Self {
        Self { constant: value, vars: BTreeSet::new() }
    }

    pub fn var(v: Var) -> Self {
        Self { constant: false, vars: BTreeSet::from([v]) }
    }

    pub fn from_parts(constant: bool, vars: impl IntoIterator<Item = Var>) -> Self {
        vars.into_iter().fold(Self::constant(constant), |acc, v| acc ^ Self::var(v))
    }

    pub fn constant_bit(&self) -> bool {
        self.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.iter()
    }

    /// Number of variables mentioned.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool> {
        self.vars.iter().try_fold(self.constant, |acc, v| Ok(acc ^ assignment.get(*v)?))
    }

    /// Replaces every variable by an expression and re-canonicalizes.
    pub fn substitute(&self, mut f: impl FnMut(Var) -> AffineExpr) -> AffineExpr {
        self.vars.iter().fold(Self::constant(self.constant), |acc, v| acc ^ f(*v))
    }
}

impl BitXor for AffineExpr {
    type Output = AffineExpr;

    fn bitxor(mut self, rhs: AffineExpr) -> AffineExpr {
        self.constant ^= rhs.constant;
        for v in rhs.vars {
            if !self.vars.remove(&v) {
                self.vars.insert(v);
            }
        }
        self
    }
}

impl BitXor for &AffineExpr {
    type Output = AffineExpr;

    fn bitxor(self, rhs: &AffineExpr) -> AffineExpr {
        self.clone() ^ rhs.clone()
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        if self.constant {
            terms.push("1".into());
        }
        terms.extend(self.vars.iter().map(Var::to_string));
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" ⊕ "))
    }
}

/// Concrete values for key-tracking variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(HashMap<Var, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `x{step}(w)`, `z{step}(w)` to a concrete Pauli key.
    pub fn with_key(step: usize, x: &[bool], z: &[bool]) -> Self {
        let mut a = Self::new();
        a.bind_key(step, x, z);
        a
    }

    pub fn bind_key(&mut self, step: usize, x: &[bool], z: &[bool]) {
        for (k, (&xb, &zb)) in x.iter().zip(z).enumerate() {
            self.0.insert(Var::X { step, wire: k + 1 }, xb);
            self.0.insert(Var::Z { step, wire: k + 1 }, zb);
        }
    }

    pub fn bind_outcome(&mut self, round: usize, rx: bool, rz: bool) {
        self.0.insert(Var::Rx(round), rx);
        self.0.insert(Var::Rz(round), rz);
    }

    pub fn insert(&mut self, var: Var, value: bool) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: Var) -> Result<bool> {
        self.0.get(&var).copied().ok_or(Error::UnassignedVariable(var))
    }
}

/// `constant ⊕ XOR of the assigned bits`.
pub fn eval_expr(expr: &AffineExpr, assignment: &Assignment) -> Result<bool> {
    expr.eval(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_cancels_and_sorts() {
        let e = AffineExpr::var(Var::Rz(1)) ^ AffineExpr::var(Var::x0(1)) ^ AffineExpr::var(Var::Rz(1));
        assert_eq!(e, AffineExpr::var(Var::x0(1)));
        let e = AffineExpr::from_parts(false, [Var::Rz(2), Var::Rx(1), Var::z0(1), Var::x0(2), Var::x0(1)]);
        assert_eq!(e.to_string(), "x0(1) ⊕ x0(2) ⊕ z0(1) ⊕ rx(1) ⊕ rz(2)");
    }

    #[test]
    fn canonical_kind_order() {
        let mut vars = [
            Var::Rz(1),
            Var::Rx(1),
            Var::Z { step: 3, wire: 1 },
            Var::X { step: 3, wire: 2 },
            Var::z0(1),
            Var::x0(2),
        ];
        vars.sort();
        let names: Vec<String> = vars.iter().map(Var::to_string).collect();
        assert_eq!(names, ["x0(2)", "z0(1)", "x3(2)", "z3(1)", "rx(1)", "rz(1)"]);
    }

    #[test]
    fn eval_examples() {
        let mut a = Assignment::new();
        a.insert(Var::x0(1), true);
        assert!(AffineExpr::var(Var::x0(1)).eval(&a).unwrap());
        assert!(AffineExpr::constant(true).eval(&Assignment::new()).unwrap());
        assert_eq!(
            AffineExpr::var(Var::z0(1)).eval(&a),
            Err(Error::UnassignedVariable(Var::z0(1)))
        );
    }

    #[test]
    fn final_key_formula_evaluates() {
        // x4(1) = z0(1) ⊕ rx(1) ⊕ rz(1) ⊕ rz(2) with x0=1, z0=0, (rx1,rz1,rx2,rz2)=(1,1,0,1).
        let e = AffineExpr::from_parts(false, [Var::z0(1), Var::Rx(1), Var::Rz(1), Var::Rz(2)]);
        let mut a = Assignment::with_key(0, &[true], &[false]);
        a.bind_outcome(1, true, true);
        a.bind_outcome(2, false, true);
        assert!(e.eval(&a).unwrap());
    }

    #[test]
    fn var_names_parse_back() {
        for v in [Var::x0(3), Var::z0(1), Var::X { step: 12, wire: 2 }, Var::Rx(4), Var::Rz(10)] {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        for bad in ["y0(1)", "x(1)", "rx1", "rx(a)", "x0(1"] {
            assert!(bad.parse::<Var>().is_err(), "{bad}");
        }
    }
}
