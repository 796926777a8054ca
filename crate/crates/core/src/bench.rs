//! Benchmark rows, their CSV form, and per-configuration aggregation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;

use crate::model::Instance;
use crate::search::{solve, OutcomeStatus, SearchBudget, SearchConfig, SearchError, SolveOutcome};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {msg}")]
    Row { line: u64, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowStatus {
    /// Optimality certified.
    Opt,
    /// Best known value reached without a proof.
    Feas,
    /// Neither of the above within the limit.
    Timeout,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Opt => "opt",
            RowStatus::Feas => "feas",
            RowStatus::Timeout => "timeout",
        })
    }
}

impl FromStr for RowStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "opt" => Ok(RowStatus::Opt),
            "feas" => Ok(RowStatus::Feas),
            "timeout" => Ok(RowStatus::Timeout),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

/// One `instance,config,status,k,vars,clauses,ttb` record. `vars` and
/// `clauses` are raw counts; `ttb` is absent for timeouts.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub config: String,
    pub status: RowStatus,
    pub k: u32,
    pub vars: u64,
    pub clauses: u64,
    pub ttb: Option<f64>,
}

pub const ROW_HEADER: [&str; 7] = ["instance", "config", "status", "k", "vars", "clauses", "ttb"];

impl BenchRow {
    pub fn from_outcome(instance: &str, outcome: &SolveOutcome, bks: Option<u32>) -> BenchRow {
        let status = match outcome.status {
            OutcomeStatus::Optimal => RowStatus::Opt,
            OutcomeStatus::Feasible if bks.is_some_and(|b| outcome.best_k <= b) => RowStatus::Feas,
            _ => RowStatus::Timeout,
        };
        BenchRow {
            instance: instance.to_string(),
            config: outcome.config_label.clone(),
            status,
            k: outcome.best_k,
            vars: outcome.vars,
            clauses: outcome.clauses,
            ttb: (status != RowStatus::Timeout).then_some(outcome.time_to_best),
        }
    }
}

fn field<'r>(rec: &'r csv::StringRecord, i: usize, line: u64) -> Result<&'r str, BenchError> {
    rec.get(i).map(str::trim).ok_or_else(|| BenchError::Row { line, msg: format!("missing column {}", ROW_HEADER[i]) })
}

fn number<T: FromStr>(s: &str, what: &str, line: u64) -> Result<T, BenchError> {
    s.parse().map_err(|_| BenchError::Row { line, msg: format!("bad {what} {s:?}") })
}

pub fn parse_rows(text: &str) -> Result<Vec<BenchRow>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let ttb = field(&rec, 6, line).unwrap_or("");
        rows.push(BenchRow {
            instance: field(&rec, 0, line)?.to_string(),
            config: field(&rec, 1, line)?.to_string(),
            status: field(&rec, 2, line)?.parse().map_err(|msg| BenchError::Row { line, msg })?,
            k: number(field(&rec, 3, line)?, "k", line)?,
            vars: number(field(&rec, 4, line)?, "vars", line)?,
            clauses: number(field(&rec, 5, line)?, "clauses", line)?,
            ttb: if ttb.is_empty() || ttb == "--" { None } else { Some(number(ttb, "ttb", line)?) },
        });
    }
    Ok(rows)
}

pub fn write_rows(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ROW_HEADER).expect("in-memory write");
    for r in rows {
        let ttb = r.ttb.map(|t| format!("{t:.3}")).unwrap_or_default();
        w.write_record([
            r.instance.as_str(),
            r.config.as_str(),
            &r.status.to_string(),
            &r.k.to_string(),
            &r.vars.to_string(),
            &r.clauses.to_string(),
            &ttb,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Reads an `instance,bks` file.
pub fn parse_bks(text: &str) -> Result<BTreeMap<String, u32>, BenchError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut map = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let name = rec.get(0).map(str::trim).unwrap_or_default();
        let value = rec.get(1).map(str::trim).unwrap_or_default();
        let bks: u32 = number(value, "bks", line)?;
        if bks == 0 {
            return Err(BenchError::Row { line, msg: "bks must be positive".into() });
        }
        map.insert(name.to_string(), bks);
    }
    Ok(map)
}

/// Aggregate row for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchMetrics {
    pub config: String,
    pub instances: usize,
    pub n_opt: usize,
    pub n_feas: usize,
    /// Mean TTB over the opt and feas rows; `None` when there are none.
    pub avg_ttb: Option<f64>,
    /// Sum of variables in thousands.
    pub total_vars: f64,
    /// Sum of clauses in millions.
    pub total_clauses: f64,
    /// Mean relative gap to BKS in percent over every row with a BKS entry.
    pub gap_percent: Option<f64>,
    /// Instances left out of the gap for lack of a BKS entry.
    pub missing_bks: Vec<String>,
}

/// Groups rows by configuration, in order of first appearance.
pub fn aggregate(rows: &[BenchRow], bks: &BTreeMap<String, u32>) -> Vec<BenchMetrics> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.config.as_str()) {
            order.push(&r.config);
        }
    }
    order
        .into_iter()
        .map(|config| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.config == config).collect();
            let solved: Vec<&BenchRow> = group.iter().copied().filter(|r| r.status != RowStatus::Timeout).collect();
            let ttbs: Vec<f64> = solved.iter().filter_map(|r| r.ttb).collect();
            let mut gaps = Vec::new();
            let mut missing_bks = Vec::new();
            for r in &group {
                match bks.get(&r.instance) {
                    Some(&b) => gaps.push((f64::from(r.k) - f64::from(b)) / f64::from(b) * 100.0),
                    None => missing_bks.push(r.instance.clone()),
                }
            }
            BenchMetrics {
                config: config.to_string(),
                instances: group.len(),
                n_opt: group.iter().filter(|r| r.status == RowStatus::Opt).count(),
                n_feas: group.iter().filter(|r| r.status == RowStatus::Feas).count(),
                avg_ttb: mean(&ttbs),
                total_vars: group.iter().map(|r| r.vars as f64).sum::<f64>() / 1e3,
                total_clauses: group.iter().map(|r| r.clauses as f64).sum::<f64>() / 1e6,
                gap_percent: mean(&gaps),
                missing_bks,
            }
        })
        .collect()
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Plain-text table with the columns Config, #Opt, #Feas, Avg TTB, Tot. Vars,
/// Tot. Cls and Gap.
pub fn format_table(metrics: &[BenchMetrics]) -> String {
    let opt = |v: Option<f64>, p: usize| v.map_or_else(|| "-".to_string(), |x| format!("{x:.p$}"));
    let mut out = format!(
        "{:<14} {:>5} {:>6} {:>12} {:>16} {:>16} {:>8}\n",
        "Config", "#Opt", "#Feas", "Avg TTB (s)", "Tot. Vars (1e3)", "Tot. Cls (1e6)", "Gap (%)"
    );
    for m in metrics {
        out.push_str(&format!(
            "{:<14} {:>5} {:>6} {:>12} {:>16.1} {:>16.1} {:>8}\n",
            m.config,
            m.n_opt,
            m.n_feas,
            opt(m.avg_ttb, 1),
            m.total_vars,
            m.total_clauses,
            opt(m.gap_percent, 2)
        ));
    }
    out
}

/// A named instance scheduled for benchmarking.
#[derive(Debug, Clone)]
pub struct BenchJob {
    pub name: String,
    pub instance: Instance,
}

/// Runs every instance under every configuration. Rows come back ordered by
/// instance then configuration, independent of `jobs`.
pub fn run_bench(
    jobs_list: &[BenchJob],
    configs: &[SearchConfig],
    bks: &BTreeMap<String, u32>,
    time_limit: Option<Duration>,
    jobs: usize,
) -> Vec<Result<BenchRow, (String, String, SearchError)>> {
    let tasks: Vec<(usize, usize)> =
        (0..jobs_list.len()).flat_map(|i| (0..configs.len()).map(move |c| (i, c))).collect();
    let results: Mutex<Vec<Option<Result<BenchRow, (String, String, SearchError)>>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(tasks.len().max(1)) {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, c)) = tasks.get(t) else { break };
                let job = &jobs_list[i];
                let cfg = &configs[c];
                let budget = match time_limit {
                    Some(l) => SearchBudget::with_time_limit(l),
                    None => SearchBudget::unlimited(),
                };
                let res = solve(&job.instance, cfg, budget)
                    .map(|o| BenchRow::from_outcome(&job.name, &o, bks.get(&job.name).copied()))
                    .map_err(|e| (job.name.clone(), cfg.label(), e));
                results.lock().expect("no worker panics")[t] = Some(res);
            });
        }
    });
    results.into_inner().expect("no worker panics").into_iter().map(|r| r.expect("every task ran")).collect()
}
