//! Solve orchestration shared by both assessment models.

use std::time::Instant;

use ecsrel_milp::{solver_from_env, MilpModel, Solution, Solver};
use rayon::prelude::*;

use crate::error::EcsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssessOptions {
    /// Worker threads for per-scenario solves; 0 or 1 solves serially.
    pub parallel: usize,
    /// Solve one model per scenario instead of one monolithic model.
    pub decompose: bool,
    /// Relative optimality gap handed to the solver.
    pub gap: f64,
}

impl Default for AssessOptions {
    fn default() -> Self {
        AssessOptions {
            parallel: 1,
            decompose: true,
            gap: 0.0,
        }
    }
}

pub(crate) struct Backend {
    pub solver: Box<dyn Solver>,
}

impl Backend {
    pub fn from_env() -> Result<Self, EcsError> {
        Ok(Backend {
            solver: solver_from_env()?,
        })
    }

    pub fn name(&self) -> &'static str {
        self.solver.name()
    }

    pub fn solve(&self, model: &MilpModel, gap: f64) -> Result<Solution, EcsError> {
        let mut sol = self.solver.solve(model, gap)?;
        if sol.is_optimal() {
            sol.round_binaries(model);
        }
        Ok(sol)
    }

    /// Solves independent models, in parallel when asked; results keep the
    /// input order.
    pub fn solve_all(
        &self,
        models: &[MilpModel],
        opts: &AssessOptions,
    ) -> Result<Vec<Solution>, EcsError> {
        if opts.parallel <= 1 || models.len() <= 1 {
            return models.iter().map(|m| self.solve(m, opts.gap)).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.parallel)
            .build()
            .map_err(|e| EcsError::Io(format!("thread pool: {e}")))?;
        pool.install(|| {
            models
                .par_iter()
                .map(|m| self.solve(m, opts.gap))
                .collect()
        })
    }
}

pub(crate) struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
