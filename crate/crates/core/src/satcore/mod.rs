//! SAT substrate: the embedded incremental CDCL engine, DIMACS/WCNF
//! serialisation and an adapter for external solver binaries.

mod cnf;
mod dimacs;
mod external;
mod solver;

use thiserror::Error;

pub use cnf::{CnfFormula, Literal, Model};
pub use dimacs::{export_dimacs, export_wcnf, parse_dimacs, SoftClause};
pub use external::{parse_solver_output, run_external, ExternalSolver};
pub use solver::{Budget, SatStatus, SolveVerdict, Solver, SolverConfig, Stats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("variable {var} exceeds the {declared} declared variables")]
    VarOutOfRange { var: u32, declared: u32 },
    #[error("literal 0 is not a valid literal")]
    ZeroLiteral,
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}
