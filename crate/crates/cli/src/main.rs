//! `cutstock`: solve, encode, verify, benchmark and render two-dimensional
//! cutting stock instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cutstock::bench::{aggregate, format_table, parse_bks, parse_rows, run_bench, write_rows, BenchJob, BenchRow};
use cutstock::render::render_solution;
use cutstock::satcore::{export_dimacs, export_wcnf, parse_dimacs, Budget, ExternalSolver, SatStatus, Solver, SolverConfig};
use cutstock::search::{maxsat_soft_clauses, Certificate};
use cutstock::{
    compute_bounds, encode, expand_demands, parse_instance, read_solution, solve, verify_solution, write_solution,
    EncodeConfig, Instance, OutcomeStatus, SearchBudget, SearchConfig, SolveOutcome, Strategy,
};

const SOLVER_ENV: &str = "CUTSTOCK_SOLVER_CMD";

#[derive(Parser)]
#[command(name = "cutstock", version, about = "Exact two-dimensional cutting stock via SAT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimise the number of sheets for one instance.
    Solve(SolveArgs),
    /// Write the formula for a fixed sheet count as DIMACS CNF or WCNF.
    Encode(EncodeArgs),
    /// Check a solution file against its instance.
    Verify(VerifyArgs),
    /// Run a configuration matrix over a directory, or aggregate existing rows.
    Bench(BenchArgs),
    /// Draw a verified solution as one SVG per sheet.
    Render(RenderArgs),
    /// Solve a DIMACS CNF file with the embedded engine, printing competition-style output.
    Sat(SatArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Sat,
    Inc,
    Maxsat,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Sat => Strategy::NonIncremental,
            StrategyArg::Inc => Strategy::Incremental,
            StrategyArg::Maxsat => Strategy::MaxSat,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "inc")]
    strategy: StrategyArg,
    /// Allow 90-degree rotation of items.
    #[arg(long)]
    rotation: bool,
    /// Add the symmetry-breaking clauses.
    #[arg(long)]
    sb: bool,
    /// Wall-clock limit in seconds for the whole run.
    #[arg(long)]
    time_limit: Option<f64>,
    /// External solver command; `{input}` is replaced by the problem path.
    #[arg(long, env = SOLVER_ENV)]
    solver_cmd: Option<String>,
    /// Where to write the best solution.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output; sheet `j` goes to `<stem>_sheet<j>.svg`.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dimacs,
    Wcnf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    sheets: u32,
    #[arg(long, value_enum, default_value = "dimacs")]
    format: Format,
    #[arg(long)]
    rotation: bool,
    #[arg(long)]
    sb: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the per-family clause counters to standard error.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    rotation: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Modes {
    Off,
    On,
    Both,
}

impl Modes {
    fn values(self) -> &'static [bool] {
        match self {
            Modes::Off => &[false],
            Modes::On => &[true],
            Modes::Both => &[false, true],
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files; every regular file is read, named by its stem.
    #[arg(long, required_unless_present = "rows")]
    dir: Option<PathBuf>,
    /// `instance,bks` file.
    #[arg(long)]
    bks: Option<PathBuf>,
    /// Aggregate an existing row file instead of solving.
    #[arg(long, conflicts_with = "dir")]
    rows: Option<PathBuf>,
    #[arg(long = "strategy", value_enum, num_args = 1.., default_values = ["sat", "inc", "maxsat"])]
    strategies: Vec<StrategyArg>,
    #[arg(long, value_enum, default_value = "both")]
    rotation: Modes,
    #[arg(long, value_enum, default_value = "both")]
    sb: Modes,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Row CSV destination; printed before the summary when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    rotation: bool,
    /// Output prefix; defaults to the solution path without extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SatArgs {
    input: PathBuf,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

fn input<T>(r: Result<T>) -> std::result::Result<T, InputError> {
    r.map_err(InputError)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(parse_instance(&text).with_context(|| format!("{}", path.display()))?.with_name(name))
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| anyhow::anyhow!("invalid time limit {s}"))
}

fn svg_path(base: &Path, sheet: usize) -> PathBuf {
    let stem = base.with_extension("");
    let mut name = stem.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!("_sheet{sheet}.svg"));
    stem.with_file_name(name)
}

fn write_svgs(instance: &Instance, solution: &cutstock::Solution, rotation: bool, base: &Path) -> Result<Vec<PathBuf>> {
    let svgs = render_solution(instance, solution, rotation).map_err(|r| {
        let v: Vec<String> = r.violations.iter().map(ToString::to_string).collect();
        anyhow::anyhow!("refusing to render an invalid solution: {}", v.join("; "))
    })?;
    let mut paths = Vec::new();
    for (i, svg) in svgs.iter().enumerate() {
        let p = svg_path(base, i + 1);
        fs::write(&p, svg).with_context(|| format!("cannot write {}", p.display()))?;
        paths.push(p);
    }
    Ok(paths)
}

fn record(o: &SolveOutcome, rotation: bool, sb: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "status={}", o.status);
    let _ = writeln!(s, "k={}", o.best_k);
    let _ = writeln!(s, "lower_bound={}", o.proven_lower);
    let _ = writeln!(s, "area_bound={}", o.area_bound);
    let _ = writeln!(s, "config={}", o.config_label);
    let _ = writeln!(s, "strategy={}", o.strategy);
    let _ = writeln!(s, "rotation={rotation}");
    let _ = writeln!(s, "sb={sb}");
    let _ = writeln!(s, "ttb={:.6}", o.time_to_best);
    let _ = writeln!(s, "elapsed={:.6}", o.elapsed);
    let _ = writeln!(s, "solver_calls={}", o.calls.len());
    let _ = writeln!(s, "formulas={}", o.formulas_built);
    let _ = writeln!(s, "vars={}", o.vars);
    let _ = writeln!(s, "clauses={}", o.clauses);
    let _ = writeln!(s, "learnt_clauses={}", o.learnt_clauses);
    match o.certificate {
        Some(Certificate::LowerBound) => s.push_str("certificate=area_bound\n"),
        Some(Certificate::Unsat { sheets }) => {
            let _ = writeln!(s, "certificate=unsat_at_{sheets}");
        }
        None => {}
    }
    if let Some(c) = o.maxsat_cost {
        let _ = writeln!(s, "maxsat_cost={c}");
    }
    for c in &o.calls {
        let _ = writeln!(s, "call=k:{},status:{},at:{:.6}", c.sheets, c.status, c.elapsed);
    }
    if let Some(d) = &o.diagnostic {
        let _ = writeln!(s, "diagnostic={}", d.replace('\n', " "));
    }
    s
}

fn cmd_solve(a: SolveArgs) -> std::result::Result<ExitCode, InputError> {
    let instance = input(load_instance(&a.input))?;
    let mut cfg = SearchConfig::new(a.strategy.into(), a.rotation, a.sb);
    cfg.solver = SolverConfig { seed: a.seed, ..SolverConfig::default() };
    cfg.external = a.solver_cmd.filter(|c| !c.trim().is_empty()).map(ExternalSolver::new);
    if cfg.external.is_some() && cfg.strategy == Strategy::Incremental {
        eprintln!("warning: the incremental strategy always uses the embedded engine; --solver-cmd ignored");
    }
    let budget = match a.time_limit {
        Some(t) => SearchBudget::with_time_limit(input(seconds(t))?),
        None => SearchBudget::unlimited(),
    };
    let outcome = input(solve(&instance, &cfg, budget).map_err(anyhow::Error::from))?;
    println!("{} k={}", outcome.status, outcome.best_k);
    print!("{}", record(&outcome, a.rotation, a.sb));
    if let Some(sol) = &outcome.best_solution {
        if let Some(out) = &a.out {
            input(fs::write(out, write_solution(sol)).with_context(|| format!("cannot write {}", out.display())))?;
        }
        if let Some(base) = &a.svg {
            for p in input(write_svgs(&instance, sol, a.rotation, base))? {
                println!("svg={}", p.display());
            }
        }
    }
    Ok(ExitCode::from(match outcome.status {
        OutcomeStatus::Optimal => 0,
        OutcomeStatus::Feasible => 10,
        OutcomeStatus::Unknown | OutcomeStatus::InfeasibleModelError => 20,
    }))
}

fn cmd_encode(a: EncodeArgs) -> std::result::Result<ExitCode, InputError> {
    let instance = input(load_instance(&a.input))?;
    input(instance.check_mode(a.rotation).map_err(anyhow::Error::from))?;
    let copies = expand_demands(&instance);
    let e = input(encode(&copies, &instance, &EncodeConfig::new(a.sheets, a.rotation, a.sb)).map_err(anyhow::Error::from))?;
    let text = match a.format {
        Format::Dimacs => export_dimacs(&e.formula),
        Format::Wcnf => {
            let lower = input(compute_bounds(&instance, a.rotation).map_err(anyhow::Error::from))?.lower;
            export_wcnf(&e.formula, &maxsat_soft_clauses(&e.varmap, lower))
        }
    };
    if a.audit {
        eprintln!("vars={}", e.formula.num_vars());
        eprintln!("{:#?}", e.counts);
    }
    match &a.out {
        Some(p) => input(fs::write(p, text).with_context(|| format!("cannot write {}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> std::result::Result<ExitCode, InputError> {
    let instance = input(load_instance(&a.input))?;
    let text = input(read(&a.solution))?;
    let sol = input(read_solution(&text, &instance).with_context(|| format!("{}", a.solution.display())))?;
    let report = verify_solution(&instance, &sol, a.rotation);
    if report.ok {
        println!("OK sheets={}", sol.sheets_used);
        return Ok(ExitCode::SUCCESS);
    }
    println!("INVALID violations={}", report.violations.len());
    for v in &report.violations {
        println!("{v}");
    }
    Ok(ExitCode::from(1))
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read directory {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn cmd_bench(a: BenchArgs) -> std::result::Result<ExitCode, InputError> {
    let bks: BTreeMap<String, u32> = match &a.bks {
        Some(p) => input(parse_bks(&input(read(p))?).map_err(anyhow::Error::from))?,
        None => BTreeMap::new(),
    };
    let rows: Vec<BenchRow> = if let Some(p) = &a.rows {
        input(parse_rows(&input(read(p))?).map_err(anyhow::Error::from))?
    } else {
        let dir = a.dir.as_ref().expect("clap requires --dir without --rows");
        let mut jobs = Vec::new();
        for path in input(instance_files(dir))? {
            match load_instance(&path) {
                Ok(instance) => jobs.push(BenchJob { name: instance.name.clone(), instance }),
                Err(e) => eprintln!("warning: skipping {}: {e:#}", path.display()),
            }
        }
        let mut configs = Vec::new();
        for &s in &a.strategies {
            for &rot in a.rotation.values() {
                for &sb in a.sb.values() {
                    let mut c = SearchConfig::new(s.into(), rot, sb);
                    c.solver.seed = a.seed;
                    configs.push(c);
                }
            }
        }
        let limit = input(seconds(a.time_limit))?;
        let mut rows = Vec::new();
        for r in run_bench(&jobs, &configs, &bks, Some(limit), a.jobs) {
            match r {
                Ok(row) => rows.push(row),
                Err((inst, cfg, e)) => eprintln!("warning: {inst} {cfg}: {e}"),
            }
        }
        rows
    };
    let metrics = aggregate(&rows, &bks);
    let mut missing: Vec<&String> = metrics.iter().flat_map(|m| &m.missing_bks).collect();
    missing.sort();
    missing.dedup();
    for m in missing {
        eprintln!("warning: no BKS entry for {m}; excluded from the gap");
    }
    let csv = write_rows(&rows);
    match &a.out {
        Some(p) => input(fs::write(p, csv).with_context(|| format!("cannot write {}", p.display())))?,
        None if a.rows.is_none() => println!("{csv}"),
        None => {}
    }
    print!("{}", format_table(&metrics));
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(a: RenderArgs) -> std::result::Result<ExitCode, InputError> {
    let instance = input(load_instance(&a.input))?;
    let text = input(read(&a.solution))?;
    let sol = input(read_solution(&text, &instance).with_context(|| format!("{}", a.solution.display())))?;
    let base = a.out.clone().unwrap_or_else(|| a.solution.clone());
    match write_svgs(&instance, &sol, a.rotation, &base) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_sat(a: SatArgs) -> std::result::Result<ExitCode, InputError> {
    let formula = input(parse_dimacs(&input(read(&a.input))?).map_err(anyhow::Error::from))?;
    let deadline = match a.time_limit {
        Some(t) => Some(std::time::Instant::now() + input(seconds(t))?),
        None => None,
    };
    let mut solver = Solver::from_formula(&formula, SolverConfig { seed: a.seed, ..SolverConfig::default() });
    let v = solver.solve_under(&[], &Budget::until(deadline)).expect("no assumptions");
    match v.status {
        SatStatus::Sat => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = v.model.expect("SAT carries a model").to_dimacs().iter().map(i32::to_string).collect();
            println!("v {} 0", lits.join(" "));
            Ok(ExitCode::from(10))
        }
        SatStatus::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(ExitCode::from(20))
        }
        SatStatus::Unknown => {
            println!("s UNKNOWN");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<ExitCode, InputError> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Render(a) => cmd_render(a),
        Command::Sat(a) => cmd_sat(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
