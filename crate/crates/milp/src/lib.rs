//! Small MILP construction kit: variables, linear rows, the two absolute
//! value linearizations used by the reliability models, LP export, and
//! pluggable branch-and-cut backends.

mod error;
mod expr;
mod lp;
mod model;
mod solution;
mod solver;

pub use error::MilpError;
pub use expr::{LinExpr, Var};
pub use model::{Cmp, Constraint, ConstraintId, MilpModel, VarInfo, VarKind};
pub use solution::{Solution, SolveStatus, BINARY_TOL};
pub use solver::{
    solve, solver_by_name, solver_from_env, HighsSolver, ScipySolver, Solver, PYTHON_ENV,
    SOLVER_ENV,
};
