//! Runs a DIMACS/WCNF solver binary and parses its competition-style output
//! (`s ...` status line, `v ...` model lines, `o ...` cost lines).

use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::cnf::Model;
use super::solver::{SatStatus, SolveVerdict, Stats};

/// A command template such as `glucose -model {input}`. Without an
/// `{input}` placeholder the problem path is appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub template: String,
    pub timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(template: impl Into<String>) -> Self {
        ExternalSolver { template: template.into(), timeout: None }
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn run(&self, problem: &Path) -> SolveVerdict {
        run_external(&self.template, problem, self.timeout)
    }
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

fn command_line(template: &str, problem: &Path) -> String {
    let path = shell_quote(&problem.to_string_lossy());
    if template.contains("{input}") {
        template.replace("{input}", &path)
    } else {
        format!("{template} {path}")
    }
}

pub fn run_external(template: &str, problem: &Path, timeout: Option<Duration>) -> SolveVerdict {
    let cmd = command_line(template, problem);
    let mut child = match Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return SolveVerdict::unknown(format!("failed to start `{cmd}`: {e}")),
    };
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let deadline = timeout.map(|t| Instant::now() + t);
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) => {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                thread::sleep(Duration::from_millis(5));
            }
            Err(e) => return SolveVerdict::unknown(format!("waiting for `{cmd}` failed: {e}")),
        }
    };
    // Grandchildren may still hold the pipes after a kill, so the readers
    // are only joined for processes that exited on their own.
    let Some(status) = status else {
        return SolveVerdict::unknown(format!("`{cmd}` timed out"));
    };
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    let mut verdict = parse_solver_output(&out, status.code());
    if verdict.status == SatStatus::Unknown {
        let code = status.code().map_or_else(|| "a signal".to_string(), |c| format!("code {c}"));
        let mut msg = format!("`{cmd}` exited with {code}");
        if !err.trim().is_empty() {
            msg.push_str(": ");
            msg.push_str(err.trim());
        }
        if let Some(d) = verdict.diagnostic.take() {
            msg.push_str("; ");
            msg.push_str(&d);
        }
        verdict.diagnostic = Some(msg);
    }
    verdict
}

/// Parses solver stdout. Exit codes 10 and 20 stand in for a missing
/// status line. `v` lines may list signed literals or, as in recent MaxSAT
/// evaluations, a single 0/1 string.
pub fn parse_solver_output(stdout: &str, exit_code: Option<i32>) -> SolveVerdict {
    let mut status = None;
    let mut optimum = false;
    let mut cost = None;
    let mut lits: Vec<i32> = Vec::new();
    let mut bits: Option<Vec<bool>> = None;
    let mut problem = None;
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            optimum = rest.trim() == "OPTIMUM FOUND";
            status = Some(match rest.trim() {
                "SATISFIABLE" | "OPTIMUM FOUND" => SatStatus::Sat,
                "UNSATISFIABLE" => SatStatus::Unsat,
                _ => SatStatus::Unknown,
            });
        } else if let Some(rest) = line.strip_prefix("o ") {
            match rest.trim().parse::<u64>() {
                Ok(c) => cost = Some(c),
                Err(_) => problem = Some(format!("bad cost line `{line}`")),
            }
        } else if let Some(rest) = line.strip_prefix('v') {
            let rest = rest.trim();
            if !rest.is_empty() && !rest.contains(' ') && rest.chars().all(|c| c == '0' || c == '1') {
                bits = Some(rest.chars().map(|c| c == '1').collect());
                continue;
            }
            for tok in rest.split_whitespace() {
                match tok.parse::<i32>() {
                    Ok(0) => {}
                    Ok(l) => lits.push(l),
                    Err(_) => problem = Some(format!("bad model token `{tok}`")),
                }
            }
        }
    }
    let status = status.unwrap_or(match exit_code {
        Some(10) => SatStatus::Sat,
        Some(20) => SatStatus::Unsat,
        _ => SatStatus::Unknown,
    });
    let model = match (status, bits) {
        (SatStatus::Sat, Some(b)) => Some(Model::from_values(b)),
        (SatStatus::Sat, None) if !lits.is_empty() => {
            let n = lits.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0) as usize;
            let mut values = vec![false; n];
            for l in &lits {
                values[l.unsigned_abs() as usize - 1] = *l > 0;
            }
            Some(Model::from_values(values))
        }
        _ => None,
    };
    let (status, diagnostic) = match (status, &model, problem) {
        (_, _, Some(p)) => (SatStatus::Unknown, Some(p)),
        (SatStatus::Sat, None, None) => (SatStatus::Unknown, Some("SAT answer without a model".to_string())),
        (s, _, None) => (s, None),
    };
    let model = if status == SatStatus::Sat { model } else { None };
    SolveVerdict { status, model, stats: Stats::default(), cost, optimum: optimum && status == SatStatus::Sat, diagnostic }
}
