//! Exact solver for the two-dimensional cutting stock problem with a single
//! stock size. Packings are found through a SAT encoding of the placement
//! problem on a fixed number of sheets, and the sheet count is minimised by
//! binary search, incremental binary search or MaxSAT.

pub mod bench;
pub mod bounds;
pub mod encoding;
pub mod fixtures;
pub mod model;
pub mod render;
pub mod satcore;
pub mod search;
pub mod verify;

pub use bounds::{compute_bounds, ffd_upper_bound, lower_bound_area, Bounds};
pub use encoding::{decode, encode, EncodeConfig, EncodeError, Encoding};
pub use model::{
    expand_demands, parse_instance, read_solution, write_solution, Instance, ItemType, ModelError, Placement, Solution,
};
pub use search::{
    solve, solve_incremental, solve_maxsat, solve_nonincremental, OutcomeStatus, SearchBudget, SearchConfig,
    SearchError, SolveOutcome, Strategy,
};
pub use verify::{brute_force_optimal, verify_solution, OracleError, OracleLimits, VerifyReport, Violation, ViolationKind};
