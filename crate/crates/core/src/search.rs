//! Sheet-count minimisation: binary search with a fresh formula per probe,
//! binary search on one incremental solver under assumptions, and weighted
//! partial MaxSAT over the largest formula.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bounds::compute_bounds;
use crate::encoding::{decode, encode, EncodeConfig, EncodeError, Encoding, VarMap};
use crate::model::{expand_demands, Copy, Instance, ModelError, Solution};
use crate::satcore::{
    export_dimacs, export_wcnf, Budget, ExternalSolver, Model, SatStatus, SoftClause, SolveVerdict, Solver, SolverConfig,
};
use crate::verify::verify_solution;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Binary search, rebuilding the formula for every probe.
    NonIncremental,
    /// Binary search on one solver holding the upper-bound formula.
    Incremental,
    /// Weighted partial MaxSAT over the upper-bound formula.
    MaxSat,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::NonIncremental, Strategy::Incremental, Strategy::MaxSat];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::NonIncremental => "sat",
            Strategy::Incremental => "inc",
            Strategy::MaxSat => "maxsat",
        }
    }

    pub fn from_name(name: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|s| s.name() == name)
    }

    fn label_prefix(self) -> &'static str {
        match self {
            Strategy::NonIncremental => "CSP",
            Strategy::Incremental => "CSP_INC",
            Strategy::MaxSat => "CSP_MS",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Configuration label such as `CSP_INC_R_SB`.
pub fn config_label(strategy: Strategy, rotation: bool, symmetry_breaking: bool) -> String {
    let mut s = strategy.label_prefix().to_string();
    if rotation {
        s.push_str("_R");
    }
    if symmetry_breaking {
        s.push_str("_SB");
    }
    s
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub rotation: bool,
    pub symmetry_breaking: bool,
    pub solver: SolverConfig,
    /// External solver for the non-incremental strategy (DIMACS input) and
    /// for MaxSAT (WCNF input). The embedded engine answers whenever it
    /// returns no verdict. The incremental strategy always runs embedded.
    pub external: Option<ExternalSolver>,
}

impl SearchConfig {
    pub fn new(strategy: Strategy, rotation: bool, symmetry_breaking: bool) -> Self {
        SearchConfig { strategy, rotation, symmetry_breaking, solver: SolverConfig::default(), external: None }
    }

    pub fn label(&self) -> String {
        config_label(self.strategy, self.rotation, self.symmetry_breaking)
    }
}

/// Limits for a whole run, measured from `start`.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub start: Instant,
    pub time_limit: Option<Duration>,
    /// Conflict limit for each individual solver call.
    pub conflicts_per_call: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { start: Instant::now(), time_limit: None, conflicts_per_call: None }
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        SearchBudget { time_limit: Some(limit), ..SearchBudget::unlimited() }
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|t| self.start + t)
    }

    fn expired(&self) -> bool {
        self.deadline().is_some_and(|d| Instant::now() >= d)
    }

    fn call_budget(&self) -> Budget {
        Budget { max_conflicts: self.conflicts_per_call, deadline: self.deadline() }
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeStatus {
    Optimal,
    Feasible,
    InfeasibleModelError,
    Unknown,
}

impl fmt::Display for OutcomeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeStatus::Optimal => "OPTIMAL",
            OutcomeStatus::Feasible => "FEASIBLE",
            OutcomeStatus::InfeasibleModelError => "INFEASIBLE_MODEL_ERROR",
            OutcomeStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallRecord {
    pub sheets: u32,
    pub status: SatStatus,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// The best count equals the area lower bound.
    LowerBound,
    /// The formula for one sheet fewer is unsatisfiable.
    Unsat { sheets: u32 },
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: OutcomeStatus,
    pub best_k: u32,
    /// Area bound of the instance.
    pub area_bound: u32,
    /// Largest count proven necessary.
    pub proven_lower: u32,
    pub best_solution: Option<Solution>,
    /// Seconds from the budget start until the best packing was found.
    pub time_to_best: f64,
    /// `(sheets, seconds)` for every improving packing, FFD first.
    pub improvements: Vec<(u32, f64)>,
    pub calls: Vec<CallRecord>,
    pub certificate: Option<Certificate>,
    pub strategy: Strategy,
    pub config_label: String,
    pub formulas_built: usize,
    /// Size of the largest formula built.
    pub vars: u64,
    pub clauses: u64,
    /// Learnt clauses held by the solver after the last call.
    pub learnt_clauses: u64,
    /// Soft-clause cost of the best MaxSAT solution.
    pub maxsat_cost: Option<u64>,
    pub diagnostic: Option<String>,
    pub elapsed: f64,
}

/// Assumptions that switch off sheets `m+1..=ub`.
pub fn sheet_limit_assumptions(vm: &VarMap, m: u32, ub: u32) -> Vec<i32> {
    (m + 1..=ub).map(|j| -vm.used(j)).collect()
}

/// Unit-weight soft clauses `¬a_j` for `j` from `lower` to the last sheet of
/// `vm`. With sheets used in index order the optimum cost is `k - lower + 1`.
pub fn maxsat_soft_clauses(vm: &VarMap, lower: u32) -> Vec<SoftClause> {
    (lower.max(1)..=vm.sheets()).map(|j| SoftClause { lits: vec![-vm.used(j)], weight: 1 }).collect()
}

struct Run<'a> {
    instance: &'a Instance,
    copies: Vec<Copy>,
    config: &'a SearchConfig,
    budget: SearchBudget,
    out: SolveOutcome,
    ub: u32,
    lb: u32,
}

impl<'a> Run<'a> {
    fn start(instance: &'a Instance, config: &'a SearchConfig, budget: SearchBudget) -> Result<Self, SearchError> {
        let bounds = compute_bounds(instance, config.rotation)?;
        let t = budget.elapsed();
        let out = SolveOutcome {
            status: OutcomeStatus::Feasible,
            best_k: bounds.upper,
            area_bound: bounds.lower,
            proven_lower: bounds.lower,
            best_solution: Some(bounds.ffd_solution),
            time_to_best: t,
            improvements: vec![(bounds.upper, t)],
            calls: Vec::new(),
            certificate: None,
            strategy: config.strategy,
            config_label: config.label(),
            formulas_built: 0,
            vars: 0,
            clauses: 0,
            learnt_clauses: 0,
            maxsat_cost: None,
            diagnostic: None,
            elapsed: 0.0,
        };
        Ok(Run {
            instance,
            copies: expand_demands(instance),
            config,
            budget,
            ub: bounds.upper,
            lb: bounds.lower,
            out,
        })
    }

    fn build(&mut self, sheets: u32) -> Result<Encoding, SearchError> {
        let cfg = EncodeConfig::new(sheets, self.config.rotation, self.config.symmetry_breaking);
        let enc = encode(&self.copies, self.instance, &cfg)?;
        self.out.formulas_built += 1;
        self.out.vars = self.out.vars.max(u64::from(enc.formula.num_vars()));
        self.out.clauses = self.out.clauses.max(enc.formula.num_clauses() as u64);
        Ok(enc)
    }

    fn record_call(&mut self, sheets: u32, verdict: &SolveVerdict) {
        self.out.calls.push(CallRecord { sheets, status: verdict.status, elapsed: self.budget.elapsed() });
    }

    /// Decodes and verifies a model; returns the number of sheets used, or
    /// `None` after flagging a model error.
    fn accept(&mut self, model: &Model, vm: &VarMap) -> Option<u32> {
        let mut sol = match decode(model, vm, &self.copies) {
            Ok(s) => s,
            Err(e) => {
                self.model_error(e.to_string());
                return None;
            }
        };
        sol.compact_sheets();
        let report = verify_solution(self.instance, &sol, self.config.rotation);
        if !report.ok {
            let msg = report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            self.model_error(format!("decoded packing failed verification: {msg}"));
            return None;
        }
        let used = sol.sheets_used;
        if used < self.out.best_k {
            let t = self.budget.elapsed();
            self.out.best_k = used;
            self.out.best_solution = Some(sol);
            self.out.time_to_best = t;
            self.out.improvements.push((used, t));
        }
        self.ub = self.ub.min(used);
        Some(used)
    }

    fn model_error(&mut self, msg: String) {
        self.out.status = OutcomeStatus::InfeasibleModelError;
        self.out.diagnostic = Some(msg);
    }

    fn proved_infeasible(&mut self, sheets: u32) {
        self.lb = self.lb.max(sheets + 1);
        self.out.proven_lower = self.lb;
    }

    fn finish(mut self) -> SolveOutcome {
        if self.out.status != OutcomeStatus::InfeasibleModelError {
            if self.lb >= self.out.best_k {
                self.out.status = OutcomeStatus::Optimal;
                self.out.certificate = Some(if self.out.best_k == self.out.area_bound {
                    Certificate::LowerBound
                } else {
                    Certificate::Unsat { sheets: self.out.best_k - 1 }
                });
            } else {
                self.out.status =
                    if self.out.best_solution.is_some() { OutcomeStatus::Feasible } else { OutcomeStatus::Unknown };
            }
        }
        self.out.proven_lower = self.lb.min(self.out.best_k);
        self.out.elapsed = self.budget.elapsed();
        self.out
    }

    fn nonincremental(&mut self) -> Result<(), SearchError> {
        while self.lb < self.ub && !self.budget.expired() {
            let m = (self.lb + self.ub) / 2;
            let enc = self.build(m)?;
            let external = self.config.external.clone().and_then(|ext| {
                let v = self.run_external(&ext, &export_dimacs(&enc.formula), ".cnf")?;
                (v.status != SatStatus::Unknown).then_some(v)
            });
            let verdict = match external {
                Some(v) => v,
                None => {
                    let mut solver = Solver::from_formula(&enc.formula, self.config.solver.clone());
                    solver.solve_under(&[], &self.budget.call_budget()).expect("no assumptions")
                }
            };
            self.record_call(m, &verdict);
            self.out.learnt_clauses = verdict.stats.learnt_clauses;
            match verdict.status {
                SatStatus::Sat => {
                    if self.accept(verdict.model.as_ref().unwrap(), &enc.varmap).is_none() {
                        return Ok(());
                    }
                }
                SatStatus::Unsat => self.proved_infeasible(m),
                SatStatus::Unknown => {
                    self.out.diagnostic = verdict.diagnostic;
                    break;
                }
            }
        }
        Ok(())
    }

    fn incremental(&mut self) -> Result<(), SearchError> {
        if self.lb >= self.ub {
            return Ok(());
        }
        let top = self.ub;
        let enc = self.build(top)?;
        let mut solver = Solver::from_formula(&enc.formula, self.config.solver.clone());
        while self.lb < self.ub && !self.budget.expired() {
            let m = (self.lb + self.ub) / 2;
            let assumptions = sheet_limit_assumptions(&enc.varmap, m, top);
            let verdict = solver.solve_under(&assumptions, &self.budget.call_budget()).expect("valid assumptions");
            self.record_call(m, &verdict);
            self.out.learnt_clauses = verdict.stats.learnt_clauses;
            match verdict.status {
                SatStatus::Sat => {
                    if self.accept(verdict.model.as_ref().unwrap(), &enc.varmap).is_none() {
                        return Ok(());
                    }
                }
                SatStatus::Unsat => self.proved_infeasible(m),
                SatStatus::Unknown => {
                    self.out.diagnostic = verdict.diagnostic;
                    break;
                }
            }
        }
        Ok(())
    }

    fn soft_clauses(&self, vm: &VarMap) -> Vec<SoftClause> {
        maxsat_soft_clauses(vm, self.out.area_bound)
    }

    fn maxsat(&mut self) -> Result<(), SearchError> {
        if self.lb >= self.ub {
            self.out.maxsat_cost = Some(u64::from(self.out.best_k - self.out.area_bound + 1));
            return Ok(());
        }
        let top = self.ub;
        let enc = self.build(top)?;
        if let Some(ext) = &self.config.external {
            match self.maxsat_external(&enc, ext.clone()) {
                Some(()) => return Ok(()),
                None => {
                    // fall through to the internal search
                }
            }
        }
        self.maxsat_internal(&enc);
        Ok(())
    }

    /// Writes `problem` to a temporary file and runs the external solver on
    /// it within the remaining budget. `None` when the file cannot be written.
    fn run_external(&mut self, ext: &ExternalSolver, problem: &str, suffix: &str) -> Option<SolveVerdict> {
        let file = tempfile::Builder::new().prefix("cutstock").suffix(suffix).tempfile().ok()?;
        std::fs::write(file.path(), problem).ok()?;
        let remaining = self.budget.deadline().map(|d| d.saturating_duration_since(Instant::now()));
        let timeout = match (ext.timeout, remaining) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let verdict = ext.clone().with_timeout(timeout).run(file.path());
        if verdict.status == SatStatus::Unknown {
            self.out.diagnostic = verdict.diagnostic.clone();
        }
        Some(verdict)
    }

    /// Returns `None` when the external solver gave no usable answer.
    fn maxsat_external(&mut self, enc: &Encoding, ext: ExternalSolver) -> Option<()> {
        let soft = self.soft_clauses(&enc.varmap);
        let verdict = self.run_external(&ext, &export_wcnf(&enc.formula, &soft), ".wcnf")?;
        self.record_call(enc.varmap.sheets(), &verdict);
        match verdict.status {
            SatStatus::Sat => {
                self.accept(verdict.model.as_ref()?, &enc.varmap)?;
                if verdict.optimum {
                    self.lb = self.out.best_k;
                }
                self.out.maxsat_cost = Some(u64::from(self.out.best_k - self.out.area_bound + 1));
                Some(())
            }
            SatStatus::Unsat => {
                self.model_error("external solver reports the hard clauses unsatisfiable".into());
                Some(())
            }
            SatStatus::Unknown => None,
        }
    }

    /// Model-improving linear search: after a packing on `u` sheets, every
    /// sheet from `u` upwards is switched off and the solver is asked again
    /// until it answers UNSAT.
    fn maxsat_internal(&mut self, enc: &Encoding) {
        let top = enc.varmap.sheets();
        let mut solver = Solver::from_formula(&enc.formula, self.config.solver.clone());
        let mut assumptions: Vec<i32> = Vec::new();
        let mut target = top;
        while !self.budget.expired() {
            let verdict = solver.solve_under(&assumptions, &self.budget.call_budget()).expect("valid assumptions");
            self.record_call(target, &verdict);
            self.out.learnt_clauses = verdict.stats.learnt_clauses;
            match verdict.status {
                SatStatus::Sat => {
                    let Some(used) = self.accept(verdict.model.as_ref().unwrap(), &enc.varmap) else {
                        return;
                    };
                    if used <= self.lb {
                        break;
                    }
                    target = used - 1;
                    assumptions = sheet_limit_assumptions(&enc.varmap, target, top);
                }
                SatStatus::Unsat => {
                    if assumptions.is_empty() {
                        self.model_error("hard clauses unsatisfiable despite the FFD packing".into());
                        return;
                    }
                    self.proved_infeasible(target);
                    break;
                }
                SatStatus::Unknown => {
                    self.out.diagnostic = verdict.diagnostic;
                    break;
                }
            }
        }
        self.out.maxsat_cost = Some(u64::from(self.out.best_k - self.out.area_bound + 1));
    }
}

/// Minimises the sheet count with the configured strategy.
pub fn solve(instance: &Instance, config: &SearchConfig, budget: SearchBudget) -> Result<SolveOutcome, SearchError> {
    let mut run = Run::start(instance, config, budget)?;
    match config.strategy {
        Strategy::NonIncremental => run.nonincremental()?,
        Strategy::Incremental => run.incremental()?,
        Strategy::MaxSat => run.maxsat()?,
    }
    Ok(run.finish())
}

pub fn solve_nonincremental(instance: &Instance, rotation: bool, sb: bool, budget: SearchBudget) -> Result<SolveOutcome, SearchError> {
    solve(instance, &SearchConfig::new(Strategy::NonIncremental, rotation, sb), budget)
}

pub fn solve_incremental(instance: &Instance, rotation: bool, sb: bool, budget: SearchBudget) -> Result<SolveOutcome, SearchError> {
    solve(instance, &SearchConfig::new(Strategy::Incremental, rotation, sb), budget)
}

pub fn solve_maxsat(instance: &Instance, rotation: bool, sb: bool, budget: SearchBudget) -> Result<SolveOutcome, SearchError> {
    solve(instance, &SearchConfig::new(Strategy::MaxSat, rotation, sb), budget)
}
