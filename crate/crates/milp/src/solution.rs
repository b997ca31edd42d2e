use serde::{Deserialize, Serialize};

use crate::expr::{LinExpr, Var};
use crate::model::MilpModel;

/// Values closer than this to 0 or 1 are accepted as binary.
pub const BINARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: SolveStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Free-form detail from the backend, mostly for non-optimal statuses.
    pub message: Option<String>,
}

impl Solution {
    pub fn not_optimal(status: SolveStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
            message: Some(message.into()),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, v: Var) -> f64 {
        self.values[v.index()]
    }

    /// Rounded value of a binary variable.
    pub fn flag(&self, v: Var) -> bool {
        self.values[v.index()] > 0.5
    }

    pub fn eval(&self, e: &LinExpr) -> f64 {
        e.eval(&self.values)
    }

    /// Names of binary variables whose value is not within [`BINARY_TOL`] of
    /// 0 or 1.
    pub fn fractional_binaries<'a>(&self, model: &'a MilpModel) -> Vec<&'a str> {
        model
            .vars()
            .iter()
            .zip(&self.values)
            .filter(|(info, &x)| {
                info.kind.is_binary() && x.abs().min((x - 1.0).abs()) > BINARY_TOL
            })
            .map(|(info, _)| info.name.as_str())
            .collect()
    }

    /// Replaces every binary value by its rounded 0/1 value.
    pub fn round_binaries(&mut self, model: &MilpModel) {
        for (info, x) in model.vars().iter().zip(self.values.iter_mut()) {
            if info.kind.is_binary() {
                *x = if *x > 0.5 { 1.0 } else { 0.0 };
            }
        }
    }
}
