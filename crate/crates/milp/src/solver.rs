//! Branch-and-cut backends.
//!
//! The model types never mention a backend. [`solver_from_env`] picks one
//! from `ECSREL_SOLVER`:
//!
//! * `highs` (default): HiGHS linked in-process.
//! * `scipy`: HiGHS reached through `scipy.optimize.milp` in a `python3`
//!   child process (interpreter overridable with `ECSREL_PYTHON`). Useful as
//!   an out-of-process cross-check.

use std::io::Write;
use std::process::{Command, Stdio};

use highs::{HighsModelStatus, RowProblem, Sense};
use serde::{Deserialize, Serialize};

use crate::error::MilpError;
use crate::model::{Cmp, MilpModel};
use crate::solution::{Solution, SolveStatus};

pub const SOLVER_ENV: &str = "ECSREL_SOLVER";
pub const PYTHON_ENV: &str = "ECSREL_PYTHON";

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Solves to the requested relative gap; `gap = 0` asks for proven
    /// optimality.
    fn solve(&self, model: &MilpModel, gap: f64) -> Result<Solution, MilpError>;
}

/// Backend selected by `ECSREL_SOLVER`.
pub fn solver_from_env() -> Result<Box<dyn Solver>, MilpError> {
    match std::env::var(SOLVER_ENV) {
        Ok(name) => solver_by_name(&name),
        Err(_) => Ok(Box::new(HighsSolver::default())),
    }
}

pub fn solver_by_name(name: &str) -> Result<Box<dyn Solver>, MilpError> {
    match name.trim().to_ascii_lowercase().as_str() {
        "" | "highs" => Ok(Box::new(HighsSolver::default())),
        "scipy" => Ok(Box::new(ScipySolver::from_env())),
        other => Err(MilpError::SolverUnavailable(format!(
            "unknown solver '{other}' (expected 'highs' or 'scipy')"
        ))),
    }
}

/// Solves with the backend chosen by the environment.
pub fn solve(model: &MilpModel, gap: f64) -> Result<Solution, MilpError> {
    solver_from_env()?.solve(model, gap)
}

fn check_gap(gap: f64) -> Result<(), MilpError> {
    if !(gap.is_finite() && gap >= 0.0) {
        return Err(MilpError::SolverError(format!("invalid gap {gap}")));
    }
    Ok(())
}

/// A model without columns cannot be handed to most backends; its rows are
/// constant and can be checked directly.
fn solve_empty(model: &MilpModel) -> Solution {
    if model.violated_constraints(&[], 1e-9).is_empty() {
        Solution {
            status: SolveStatus::Optimal,
            values: Vec::new(),
            objective_value: model.objective().constant_part(),
            message: None,
        }
    } else {
        Solution::not_optimal(SolveStatus::Infeasible, "constant rows violated")
    }
}

fn row_bounds(cmp: Cmp, rhs: f64) -> (f64, f64) {
    match cmp {
        Cmp::Le => (f64::NEG_INFINITY, rhs),
        Cmp::Ge => (rhs, f64::INFINITY),
        Cmp::Eq => (rhs, rhs),
    }
}

#[derive(Debug, Clone)]
pub struct HighsSolver {
    pub threads: usize,
}

impl Default for HighsSolver {
    fn default() -> Self {
        Self { threads: 1 }
    }
}

impl Solver for HighsSolver {
    fn name(&self) -> &'static str {
        "highs"
    }

    fn solve(&self, model: &MilpModel, gap: f64) -> Result<Solution, MilpError> {
        check_gap(gap)?;
        if model.vars().is_empty() {
            return Ok(solve_empty(model));
        }
        let mut cost = vec![0.0; model.vars().len()];
        for &(v, c) in model.objective().terms() {
            cost[v.index()] += c;
        }
        let mut pb = RowProblem::default();
        let cols: Vec<_> = model
            .vars()
            .iter()
            .zip(&cost)
            .map(|(info, &c)| {
                let (lo, hi) = info.kind.bounds();
                if info.kind.is_binary() {
                    pb.add_integer_column(c, lo..=hi)
                } else {
                    pb.add_column(c, lo..=hi)
                }
            })
            .collect();
        for row in model.constraints() {
            let factors: Vec<_> = row
                .lhs
                .terms()
                .iter()
                .map(|&(v, c)| (cols[v.index()], c))
                .collect();
            match row.cmp {
                Cmp::Le => pb.add_row(..=row.rhs, &factors),
                Cmp::Ge => pb.add_row(row.rhs.., &factors),
                Cmp::Eq => pb.add_row(row.rhs..=row.rhs, &factors),
            }
        }
        let mut hm = pb
            .try_optimise(Sense::Minimise)
            .map_err(|s| MilpError::SolverError(format!("HiGHS rejected model: {s:?}")))?;
        hm.make_quiet();
        hm.set_option("threads", self.threads as i32);
        hm.set_option("mip_rel_gap", gap);
        if gap == 0.0 {
            hm.set_option("mip_abs_gap", 0.0);
        }
        let solved = hm
            .try_solve()
            .map_err(|s| MilpError::SolverError(format!("HiGHS run failed: {s:?}")))?;
        let status = solved.status();
        Ok(match status {
            HighsModelStatus::Optimal => Solution {
                status: SolveStatus::Optimal,
                values: solved.get_solution().columns().to_vec(),
                objective_value: solved.objective_value() + model.objective().constant_part(),
                message: None,
            },
            // Every column carries finite bounds, so "unbounded or
            // infeasible" can only mean infeasible.
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
                Solution::not_optimal(SolveStatus::Infeasible, format!("{status:?}"))
            }
            HighsModelStatus::Unbounded => {
                Solution::not_optimal(SolveStatus::Unbounded, format!("{status:?}"))
            }
            other => Solution::not_optimal(SolveStatus::Error, format!("HiGHS status {other:?}")),
        })
    }
}

/// Matrix form exchanged with the scipy child process.
#[derive(Debug, Serialize)]
struct DenseRequest<'a> {
    c: Vec<f64>,
    integrality: Vec<u8>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    row_lo: Vec<Option<f64>>,
    row_hi: Vec<Option<f64>>,
    gap: f64,
    name: &'a str,
}

#[derive(Debug, Deserialize)]
struct ScipyReply {
    status: i32,
    x: Option<Vec<f64>>,
    fun: Option<f64>,
    message: String,
}

const SCIPY_SCRIPT: &str = r#"
import json, sys
try:
    import numpy as np
    from scipy.optimize import milp, LinearConstraint, Bounds
    from scipy.sparse import coo_matrix
except Exception as e:
    sys.stderr.write("scipy unavailable: %s" % e)
    sys.exit(3)
req = json.load(sys.stdin)
n = len(req["c"])
m = len(req["row_lo"])
cons = []
if m > 0:
    A = coo_matrix((req["vals"], (req["rows"], req["cols"])), shape=(m, n)).tocsr()
    lo = np.array([-np.inf if v is None else v for v in req["row_lo"]])
    hi = np.array([np.inf if v is None else v for v in req["row_hi"]])
    cons = [LinearConstraint(A, lo, hi)]
res = milp(np.array(req["c"]), integrality=np.array(req["integrality"]),
           bounds=Bounds(np.array(req["lb"]), np.array(req["ub"])),
           constraints=cons, options={"disp": False, "mip_rel_gap": req["gap"]})
out = {"status": int(res.status), "message": str(res.message),
       "x": None if res.x is None else [float(v) for v in res.x],
       "fun": None if res.fun is None else float(res.fun)}
json.dump(out, sys.stdout)
"#;

#[derive(Debug, Clone)]
pub struct ScipySolver {
    pub python: String,
}

impl ScipySolver {
    pub fn from_env() -> Self {
        Self {
            python: std::env::var(PYTHON_ENV).unwrap_or_else(|_| "python3".to_string()),
        }
    }
}

impl Solver for ScipySolver {
    fn name(&self) -> &'static str {
        "scipy"
    }

    fn solve(&self, model: &MilpModel, gap: f64) -> Result<Solution, MilpError> {
        check_gap(gap)?;
        if model.vars().is_empty() {
            return Ok(solve_empty(model));
        }
        let n = model.vars().len();
        let mut req = DenseRequest {
            c: vec![0.0; n],
            integrality: Vec::with_capacity(n),
            lb: Vec::with_capacity(n),
            ub: Vec::with_capacity(n),
            rows: Vec::new(),
            cols: Vec::new(),
            vals: Vec::new(),
            row_lo: Vec::new(),
            row_hi: Vec::new(),
            gap,
            name: model.name(),
        };
        for &(v, c) in model.objective().terms() {
            req.c[v.index()] += c;
        }
        for info in model.vars() {
            let (lo, hi) = info.kind.bounds();
            req.integrality.push(u8::from(info.kind.is_binary()));
            req.lb.push(lo);
            req.ub.push(hi);
        }
        for (r, row) in model.constraints().iter().enumerate() {
            for &(v, c) in row.lhs.terms() {
                req.rows.push(r);
                req.cols.push(v.index());
                req.vals.push(c);
            }
            let (lo, hi) = row_bounds(row.cmp, row.rhs);
            req.row_lo.push(lo.is_finite().then_some(lo));
            req.row_hi.push(hi.is_finite().then_some(hi));
        }
        let payload = serde_json::to_vec(&req)
            .map_err(|e| MilpError::SolverError(format!("cannot encode model: {e}")))?;

        let mut child = Command::new(&self.python)
            .arg("-c")
            .arg(SCIPY_SCRIPT)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| MilpError::SolverUnavailable(format!("cannot start {}: {e}", self.python)))?;
        child
            .stdin
            .take()
            .expect("piped stdin")
            .write_all(&payload)
            .map_err(|e| MilpError::SolverError(format!("cannot send model: {e}")))?;
        let out = child
            .wait_with_output()
            .map_err(|e| MilpError::SolverError(format!("child process failed: {e}")))?;
        if out.status.code() == Some(3) {
            return Err(MilpError::SolverUnavailable(
                String::from_utf8_lossy(&out.stderr).into_owned(),
            ));
        }
        if !out.status.success() {
            return Err(MilpError::SolverError(
                String::from_utf8_lossy(&out.stderr).into_owned(),
            ));
        }
        let reply: ScipyReply = serde_json::from_slice(&out.stdout)
            .map_err(|e| MilpError::SolverError(format!("bad reply from scipy: {e}")))?;
        // scipy.optimize.milp: 0 optimal, 1 limit reached, 2 infeasible,
        // 3 unbounded, 4 other.
        Ok(match (reply.status, reply.x, reply.fun) {
            (0, Some(x), Some(fun)) => Solution {
                status: SolveStatus::Optimal,
                values: x,
                objective_value: fun + model.objective().constant_part(),
                message: None,
            },
            (2, _, _) => Solution::not_optimal(SolveStatus::Infeasible, reply.message),
            (3, _, _) => Solution::not_optimal(SolveStatus::Unbounded, reply.message),
            _ => Solution::not_optimal(SolveStatus::Error, reply.message),
        })
    }
}
