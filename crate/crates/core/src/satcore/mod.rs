//! Boolean satisfiability: an embedded incremental CDCL engine plus DIMACS
//! interchange for running an external solver instead.

mod dimacs;
mod solver;
mod types;

pub use dimacs::{format_answer, parse_answer, parse_dimacs, write_dimacs, DimacsError, ExternalSolver};
pub use solver::{Solver, SolverConfig};
pub use types::{ClauseSink, Lit, Model, SatBackend, SolveResult, SolverStats, Var};

/// Which decision procedure drives an attack.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Embedded,
    /// Program plus fixed arguments; the CNF path is appended per call.
    External(String),
}

impl SolverChoice {
    /// Instantiates a fresh backend. `seed` and `conflict_limit` apply to the
    /// embedded engine only.
    pub fn instantiate(&self, seed: Option<u64>, conflict_limit: Option<u64>) -> Result<Box<dyn SatBackend>, DimacsError> {
        Ok(match self {
            SolverChoice::Embedded => Box::new(Solver::with_config(SolverConfig {
                seed,
                conflict_limit,
                ..Default::default()
            })),
            SolverChoice::External(cmd) => Box::new(ExternalSolver::new(cmd)?),
        })
    }
}
