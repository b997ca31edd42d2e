use serde::{Deserialize, Serialize};

use crate::expr::{LinExpr, Var};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VarKind {
    Binary,
    Continuous { lower: f64, upper: f64 },
}

impl VarKind {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            VarKind::Binary => (0.0, 1.0),
            VarKind::Continuous { lower, upper } => (lower, upper),
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, VarKind::Binary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// A normalized row: `sum(coef * var) cmp rhs`, with all constants moved to
/// the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub lhs: LinExpr,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Constraint {
    pub fn is_satisfied(&self, values: &[f64], tol: f64) -> bool {
        let lhs = self.lhs.eval(values);
        match self.cmp {
            Cmp::Le => lhs <= self.rhs + tol,
            Cmp::Ge => lhs >= self.rhs - tol,
            Cmp::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub usize);

/// Variables, linear rows and a minimization objective.
///
/// `big_m` records the default big-M of the model; builders that need
/// tighter per-row values pass them explicitly as slack expressions.
#[derive(Debug, Clone)]
pub struct MilpModel {
    name: String,
    vars: Vec<VarInfo>,
    constraints: Vec<Constraint>,
    objective: LinExpr,
    big_m: f64,
}

impl MilpModel {
    pub fn new(name: impl Into<String>, big_m: f64) -> Self {
        assert!(big_m > 0.0 && big_m.is_finite(), "big-M must be positive and finite");
        Self {
            name: name.into(),
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: LinExpr::new(),
            big_m,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn vars(&self) -> &[VarInfo] {
        &self.vars
    }

    pub fn var_info(&self, v: Var) -> &VarInfo {
        &self.vars[v.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    pub fn num_binaries(&self) -> usize {
        self.vars.iter().filter(|v| v.kind.is_binary()).count()
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Var {
        self.push_var(name.into(), VarKind::Binary)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> Var {
        assert!(
            lower.is_finite() && upper.is_finite() && lower <= upper,
            "continuous bounds must be finite and ordered: [{lower}, {upper}]"
        );
        self.push_var(name.into(), VarKind::Continuous { lower, upper })
    }

    fn push_var(&mut self, name: String, kind: VarKind) -> Var {
        self.vars.push(VarInfo { name, kind });
        Var(self.vars.len() - 1)
    }

    fn check_expr(&self, e: &LinExpr) {
        for &(v, c) in e.terms() {
            assert!(v.0 < self.vars.len(), "variable {} is not registered in model {}", v.0, self.name);
            assert!(c.is_finite(), "non-finite coefficient on {}", self.vars[v.0].name);
        }
        assert!(e.constant_part().is_finite(), "non-finite constant");
    }

    /// Adds `lhs cmp rhs`.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        lhs: impl Into<LinExpr>,
        cmp: Cmp,
        rhs: impl Into<LinExpr>,
    ) -> ConstraintId {
        let diff = (lhs.into() - rhs.into()).normalized();
        self.check_expr(&diff);
        let rhs = -diff.constant_part();
        let mut lhs = diff;
        lhs.add_constant(-lhs.constant_part());
        self.constraints.push(Constraint {
            name: name.into(),
            lhs,
            cmp,
            rhs,
        });
        ConstraintId(self.constraints.len() - 1)
    }

    pub fn add_le(&mut self, name: impl Into<String>, lhs: impl Into<LinExpr>, rhs: impl Into<LinExpr>) -> ConstraintId {
        self.add_constraint(name, lhs, Cmp::Le, rhs)
    }

    pub fn add_ge(&mut self, name: impl Into<String>, lhs: impl Into<LinExpr>, rhs: impl Into<LinExpr>) -> ConstraintId {
        self.add_constraint(name, lhs, Cmp::Ge, rhs)
    }

    pub fn add_eq(&mut self, name: impl Into<String>, lhs: impl Into<LinExpr>, rhs: impl Into<LinExpr>) -> ConstraintId {
        self.add_constraint(name, lhs, Cmp::Eq, rhs)
    }

    /// `|a - b| <= slack`, as the two rows `a - b <= slack` and
    /// `b - a <= slack`.
    ///
    /// With `slack = (1 - z) * M` this is the usual big-M form of "a equals
    /// b whenever the binary z is one".
    pub fn add_abs_le(
        &mut self,
        name: &str,
        a: impl Into<LinExpr>,
        b: impl Into<LinExpr>,
        slack: impl Into<LinExpr>,
    ) -> (ConstraintId, ConstraintId) {
        let a = a.into();
        let b = b.into();
        let slack = slack.into();
        let up = self.add_le(format!("{name}_up"), a.clone() - b.clone(), slack.clone());
        let lo = self.add_le(format!("{name}_lo"), b - a, slack);
        (up, lo)
    }

    /// `sum_i |x_i - nominal_i| <= bound` where every `x_i` is binary and every
    /// nominal value is a known 0/1 parameter.
    ///
    /// Each absolute value is linear because one side is constant:
    /// `|x - 1| = 1 - x` and `|x - 0| = x`. Returns `None` when `pairs` is
    /// empty (the row would be vacuous).
    pub fn add_abs_binary_diff_sum_le(
        &mut self,
        name: impl Into<String>,
        pairs: &[(Var, bool)],
        bound: i64,
    ) -> Option<ConstraintId> {
        if pairs.is_empty() {
            return None;
        }
        let mut sum = LinExpr::new();
        for &(x, nominal) in pairs {
            assert!(
                self.vars[x.0].kind.is_binary(),
                "{} is not binary",
                self.vars[x.0].name
            );
            if nominal {
                sum += LinExpr::constant(1.0) - x;
            } else {
                sum += x;
            }
        }
        Some(self.add_le(name, sum, bound as f64))
    }

    pub fn set_objective(&mut self, objective: impl Into<LinExpr>) {
        let obj = objective.into().normalized();
        self.check_expr(&obj);
        self.objective = obj;
    }

    /// Checks every row of an assignment; returns the names of violated rows.
    pub fn violated_constraints(&self, values: &[f64], tol: f64) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.is_satisfied(values, tol))
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Dense row-major coefficient matrix, for snapshots and tests.
    pub fn dense_matrix(&self) -> Vec<Vec<f64>> {
        self.constraints
            .iter()
            .map(|c| {
                let mut row = vec![0.0; self.vars.len()];
                for &(v, coef) in c.lhs.terms() {
                    row[v.0] += coef;
                }
                row
            })
            .collect()
    }
}
