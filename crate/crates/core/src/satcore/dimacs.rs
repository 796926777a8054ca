use std::fmt::Write as _;

use super::cnf::CnfFormula;
use super::SatError;

/// A weighted soft clause for WCNF export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftClause {
    pub lits: Vec<i32>,
    pub weight: u64,
}

fn write_clause(out: &mut String, prefix: Option<u64>, lits: &[i32]) {
    if let Some(w) = prefix {
        let _ = write!(out, "{w} ");
    }
    for l in lits {
        let _ = write!(out, "{l} ");
    }
    out.push_str("0\n");
}

/// Standard DIMACS CNF: `p cnf V C` then one 0-terminated clause per line.
pub fn export_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::with_capacity(formula.num_clauses() * 16 + 32);
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses());
    for c in formula.clauses() {
        write_clause(&mut out, None, c);
    }
    out
}

/// Classic weighted partial MaxSAT format. Hard clauses carry the top
/// weight `1 + sum of soft weights` and are written before the soft ones.
pub fn export_wcnf(hard: &CnfFormula, soft: &[SoftClause]) -> String {
    let top = 1 + soft.iter().map(|s| s.weight).sum::<u64>();
    let max_soft_var = soft.iter().flat_map(|s| s.lits.iter()).map(|l| l.unsigned_abs()).max().unwrap_or(0);
    let vars = hard.num_vars().max(max_soft_var);
    let mut out = String::with_capacity((hard.num_clauses() + soft.len()) * 20 + 32);
    let _ = writeln!(out, "p wcnf {} {} {}", vars, hard.num_clauses() + soft.len(), top);
    for c in hard.clauses() {
        write_clause(&mut out, Some(top), c);
    }
    for s in soft {
        write_clause(&mut out, Some(s.weight), &s.lits);
    }
    out
}

/// Reads DIMACS CNF. Comment lines (`c`) are skipped and clauses may span
/// lines; the header counts are checked against the content.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let err = |line, msg: &str| SatError::Dimacs { line, msg: msg.to_string() };
    let mut header: Option<(u32, usize)> = None;
    let mut formula = CnfFormula::default();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('%') {
            continue;
        }
        if l.starts_with('p') {
            let f: Vec<&str> = l.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(err(line, "malformed problem line"));
            }
            let v = f[2].parse().map_err(|_| err(line, "bad variable count"))?;
            let c = f[3].parse().map_err(|_| err(line, "bad clause count"))?;
            header = Some((v, c));
            formula = CnfFormula::new(v);
            continue;
        }
        let (nv, _) = header.ok_or_else(|| err(line, "clause before problem line"))?;
        for tok in l.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| err(line, "bad literal"))?;
            if lit == 0 {
                formula.add_clause(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > nv || lit == i32::MIN {
                return Err(err(line, "literal exceeds declared variable count"));
            } else {
                current.push(lit);
            }
        }
    }
    let (_, nc) = header.ok_or_else(|| err(1, "missing problem line"))?;
    if !current.is_empty() {
        formula.add_clause(current);
    }
    if formula.num_clauses() != nc {
        return Err(err(text.lines().count(), "clause count disagrees with header"));
    }
    Ok(formula)
}
