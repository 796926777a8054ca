//! Python bindings: instances, solutions, the three search strategies, the
//! verifier, the formula exporters and benchmark aggregation.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cutstock::bench::{aggregate as aggregate_rows, parse_bks, parse_rows};
use cutstock::satcore::{export_dimacs, export_wcnf, ExternalSolver, SolverConfig};
use cutstock::search::{maxsat_soft_clauses, Certificate};
use cutstock::{
    brute_force_optimal, compute_bounds, encode as encode_formula, expand_demands, parse_instance, read_solution,
    solve as run_search, verify_solution, write_solution, EncodeConfig, ItemType, OracleLimits, SearchBudget,
    SearchConfig, Strategy,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A sheet size and a list of `(width, height, demand)` item types.
#[pyclass(name = "Instance", module = "cutstock_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: cutstock::Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (width, height, types, name = "instance"))]
    fn new(width: u32, height: u32, types: Vec<(u32, u32, u32)>, name: &str) -> PyResult<Self> {
        let types = types.into_iter().map(|(w, h, d)| ItemType::new(w, h, d)).collect();
        let inner = cutstock::Instance::new(name, width, height, types).map_err(value_error)?;
        Ok(PyInstance { inner })
    }

    /// Parses the text instance format.
    #[staticmethod]
    #[pyo3(signature = (text, name = "instance"))]
    fn from_text(text: &str, name: &str) -> PyResult<Self> {
        Ok(PyInstance { inner: parse_instance(text).map_err(value_error)?.with_name(name) })
    }

    fn to_text(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn sheet_width(&self) -> u32 {
        self.inner.sheet_width
    }

    #[getter]
    fn sheet_height(&self) -> u32 {
        self.inner.sheet_height
    }

    #[getter]
    fn types(&self) -> Vec<(u32, u32, u32)> {
        self.inner.types.iter().map(|t| (t.width, t.height, t.demand)).collect()
    }

    #[getter]
    fn copy_count(&self) -> usize {
        self.inner.copy_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(name={:?}, sheet={}x{}, types={}, copies={})",
            self.inner.name,
            self.inner.sheet_width,
            self.inner.sheet_height,
            self.inner.types.len(),
            self.inner.copy_count()
        )
    }
}

/// Placements as `(type, ordinal, sheet, x, y, rotated)` with 1-based type,
/// ordinal and sheet.
#[pyclass(name = "Solution", module = "cutstock_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    inner: cutstock::Solution,
}

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn from_text(text: &str, instance: &PyInstance) -> PyResult<Self> {
        Ok(PySolution { inner: read_solution(text, &instance.inner).map_err(value_error)? })
    }

    fn to_text(&self) -> String {
        write_solution(&self.inner)
    }

    #[getter]
    fn sheets_used(&self) -> u32 {
        self.inner.sheets_used
    }

    #[getter]
    fn placements(&self) -> Vec<(usize, u32, u32, u32, u32, bool)> {
        self.inner.placements.iter().map(|p| (p.copy.type_index + 1, p.copy.ordinal, p.sheet, p.x, p.y, p.rotated)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Solution(sheets_used={}, placements={})", self.inner.sheets_used, self.inner.placements.len())
    }
}

#[pyclass(name = "SolveOutcome", module = "cutstock_py", frozen)]
struct PyOutcome {
    inner: cutstock::SolveOutcome,
}

#[pymethods]
impl PyOutcome {
    /// `OPTIMAL`, `FEASIBLE`, `INFEASIBLE_MODEL_ERROR` or `UNKNOWN`.
    #[getter]
    fn status(&self) -> String {
        self.inner.status.to_string()
    }

    #[getter]
    fn best_k(&self) -> u32 {
        self.inner.best_k
    }

    #[getter]
    fn lower_bound(&self) -> u32 {
        self.inner.proven_lower
    }

    #[getter]
    fn area_bound(&self) -> u32 {
        self.inner.area_bound
    }

    #[getter]
    fn config(&self) -> String {
        self.inner.config_label.clone()
    }

    #[getter]
    fn time_to_best(&self) -> f64 {
        self.inner.time_to_best
    }

    #[getter]
    fn elapsed(&self) -> f64 {
        self.inner.elapsed
    }

    /// `(sheets, verdict, seconds)` per solver call.
    #[getter]
    fn calls(&self) -> Vec<(u32, String, f64)> {
        self.inner.calls.iter().map(|c| (c.sheets, c.status.to_string(), c.elapsed)).collect()
    }

    #[getter]
    fn formulas_built(&self) -> usize {
        self.inner.formulas_built
    }

    #[getter]
    fn vars(&self) -> u64 {
        self.inner.vars
    }

    #[getter]
    fn clauses(&self) -> u64 {
        self.inner.clauses
    }

    #[getter]
    fn maxsat_cost(&self) -> Option<u64> {
        self.inner.maxsat_cost
    }

    /// `"area_bound"`, `"unsat_at_<k>"` or `None`.
    #[getter]
    fn certificate(&self) -> Option<String> {
        self.inner.certificate.map(|c| match c {
            Certificate::LowerBound => "area_bound".to_string(),
            Certificate::Unsat { sheets } => format!("unsat_at_{sheets}"),
        })
    }

    #[getter]
    fn solution(&self) -> Option<PySolution> {
        self.inner.best_solution.clone().map(|inner| PySolution { inner })
    }

    fn __repr__(&self) -> String {
        format!("SolveOutcome(status={}, best_k={}, config={})", self.inner.status, self.inner.best_k, self.inner.config_label)
    }
}

fn strategy(name: &str) -> PyResult<Strategy> {
    Strategy::from_name(name).ok_or_else(|| value_error(format!("unknown strategy {name:?}; use sat, inc or maxsat")))
}

/// Minimises the sheet count. `strategy` is `sat`, `inc` or `maxsat`.
#[pyfunction]
#[pyo3(signature = (instance, strategy = "inc", rotation = false, sb = false, time_limit = None, seed = 0, solver_cmd = None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    instance: &PyInstance,
    strategy: &str,
    rotation: bool,
    sb: bool,
    time_limit: Option<f64>,
    seed: u64,
    solver_cmd: Option<String>,
) -> PyResult<PyOutcome> {
    let mut cfg = SearchConfig::new(self::strategy(strategy)?, rotation, sb);
    cfg.solver = SolverConfig { seed, ..SolverConfig::default() };
    cfg.external = solver_cmd.map(ExternalSolver::new);
    let budget = match time_limit {
        Some(t) => SearchBudget::with_time_limit(std::time::Duration::try_from_secs_f64(t).map_err(value_error)?),
        None => SearchBudget::unlimited(),
    };
    let inst = instance.inner.clone();
    let inner = py.detach(move || run_search(&inst, &cfg, budget)).map_err(value_error)?;
    Ok(PyOutcome { inner })
}

/// `(area lower bound, FFD upper bound, FFD solution)`.
#[pyfunction]
#[pyo3(signature = (instance, rotation = false))]
fn bounds(instance: &PyInstance, rotation: bool) -> PyResult<(u32, u32, PySolution)> {
    let b = compute_bounds(&instance.inner, rotation).map_err(value_error)?;
    Ok((b.lower, b.upper, PySolution { inner: b.ffd_solution }))
}

/// `(ok, [(kind, detail), ...])`.
#[pyfunction]
#[pyo3(signature = (instance, solution, rotation = false))]
fn verify(instance: &PyInstance, solution: &PySolution, rotation: bool) -> (bool, Vec<(String, String)>) {
    let r = verify_solution(&instance.inner, &solution.inner, rotation);
    (r.ok, r.violations.into_iter().map(|v| (v.kind.to_string(), v.detail)).collect())
}

/// Exhaustive optimum for instances with at most seven copies.
#[pyfunction]
#[pyo3(signature = (instance, rotation = false))]
fn brute_force(py: Python<'_>, instance: &PyInstance, rotation: bool) -> PyResult<u32> {
    let inst = instance.inner.clone();
    py.detach(move || brute_force_optimal(&inst, rotation, OracleLimits::default())).map_err(value_error)
}

/// The formula for `sheets` sheets as DIMACS CNF (`dimacs`) or WCNF (`wcnf`).
#[pyfunction]
#[pyo3(signature = (instance, sheets, rotation = false, sb = false, format = "dimacs"))]
fn encode(instance: &PyInstance, sheets: u32, rotation: bool, sb: bool, format: &str) -> PyResult<String> {
    instance.inner.check_mode(rotation).map_err(value_error)?;
    let copies = expand_demands(&instance.inner);
    let e = encode_formula(&copies, &instance.inner, &EncodeConfig::new(sheets, rotation, sb)).map_err(value_error)?;
    match format {
        "dimacs" => Ok(export_dimacs(&e.formula)),
        "wcnf" => {
            let lower = compute_bounds(&instance.inner, rotation).map_err(value_error)?.lower;
            Ok(export_wcnf(&e.formula, &maxsat_soft_clauses(&e.varmap, lower)))
        }
        other => Err(value_error(format!("unknown format {other:?}; use dimacs or wcnf"))),
    }
}

/// One SVG document per sheet; raises on an invalid solution.
#[pyfunction]
#[pyo3(signature = (instance, solution, rotation = false))]
fn render(instance: &PyInstance, solution: &PySolution, rotation: bool) -> PyResult<Vec<String>> {
    cutstock::render::render_solution(&instance.inner, &solution.inner, rotation).map_err(|r| {
        let v: Vec<String> = r.violations.iter().map(ToString::to_string).collect();
        value_error(format!("invalid solution: {}", v.join("; ")))
    })
}

/// Aggregates `instance,config,status,k,vars,clauses,ttb` rows against an
/// `instance,bks` table; one dict per configuration.
#[pyfunction]
fn aggregate<'py>(py: Python<'py>, rows_csv: &str, bks_csv: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = parse_rows(rows_csv).map_err(value_error)?;
    let bks = parse_bks(bks_csv).map_err(value_error)?;
    aggregate_rows(&rows, &bks)
        .into_iter()
        .map(|m| {
            let d = PyDict::new(py);
            d.set_item("config", m.config)?;
            d.set_item("instances", m.instances)?;
            d.set_item("n_opt", m.n_opt)?;
            d.set_item("n_feas", m.n_feas)?;
            d.set_item("avg_ttb", m.avg_ttb)?;
            d.set_item("total_vars", m.total_vars)?;
            d.set_item("total_clauses", m.total_clauses)?;
            d.set_item("gap_percent", m.gap_percent)?;
            d.set_item("missing_bks", m.missing_bks)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn cutstock_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate, m)?)?;
    Ok(())
}
