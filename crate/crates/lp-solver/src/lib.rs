//! Solves [`opt_model::ModelIr`] instances with a revised simplex over
//! general variable bounds: dense basis inverse with eta updates, max-abs
//! equilibration scaling, Dantzig pricing with a Bland's-rule fallback on
//! stall, and duals straight from the final basis.
//!
//! The dense inverse is sized for desk-scale studies; instances beyond
//! roughly 20,000 constraints belong in an industrial solver plugged in
//! over the text boundary in [`io`].

pub mod enumeration;
mod instance;
mod io;
mod kkt;
mod simplex;

use std::fmt;

pub use grid_core::SolverOptions;
pub use io::{
    read_solution, solution_from_text, solution_to_text, write_solution, CommandSolver,
};
pub use kkt::{check_kkt, KktReport};
pub use simplex::{solve_with_basis, Basis};

use opt_model::{ModelIr, SolutionView};

/// Why a solve did not return an optimal solution.
#[derive(Debug)]
pub enum SolveError {
    /// No feasible point exists; reports the residual infeasibility of the
    /// phase-1 optimum and the worst row.
    Infeasible { residual: f64, worst_row: String },
    /// The objective is unbounded along the named variable.
    Unbounded { ray: String },
    IterationLimit { iterations: usize },
    Numerical(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Infeasible { residual, worst_row } => {
                write!(f, "infeasible (phase-1 residual {}, worst {})", residual, worst_row)
            }
            SolveError::Unbounded { ray } => write!(f, "unbounded along {}", ray),
            SolveError::IterationLimit { iterations } => {
                write!(f, "iteration limit reached after {} iterations", iterations)
            }
            SolveError::Numerical(msg) => write!(f, "numerical failure: {}", msg),
        }
    }
}

impl std::error::Error for SolveError {}

/// Solves the model, returning an optimal solution or the reason there is
/// none. Deterministic for fixed options.
pub fn solve(ir: &ModelIr, opts: &SolverOptions) -> Result<SolutionView, SolveError> {
    solve_with_basis(ir, opts).map(|(sol, _)| sol)
}
