//! Incremental CDCL engine.
//!
//! Two watched literals per clause, first-UIP learning with local
//! minimisation, VSIDS branching, phase saving, Luby restarts and LBD-based
//! learnt clause reduction. Assumptions are decided at the first decision
//! levels, so an UNSAT answer under assumptions keeps the permanent state
//! and every learnt clause intact.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cnf::{CnfFormula, Model};
use super::SatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Lit(u32);

impl Lit {
    fn from_dimacs(l: i32) -> Lit {
        let v = l.unsigned_abs() - 1;
        Lit(2 * v + u32::from(l < 0))
    }

    #[inline]
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    fn negative(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn with_sign(var: usize, negative: bool) -> Lit {
        Lit(2 * var as u32 + u32::from(negative))
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;
const NO_REASON: u32 = u32::MAX;

#[inline]
fn lit_value(assigns: &[i8], l: Lit) -> i8 {
    let v = assigns[l.var()];
    if l.negative() {
        -v
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

/// Tunable search parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Conflicts in the first Luby restart interval.
    pub restart_base: u64,
    /// Conflicts before the first learnt clause reduction.
    pub reduce_base: u64,
    /// Growth of the reduction interval after each reduction.
    pub reduce_increment: u64,
    /// Learnt clauses with at most this LBD survive every reduction.
    pub keep_lbd: u32,
    pub random_var_freq: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_base: 100,
            reduce_base: 2000,
            reduce_increment: 300,
            keep_lbd: 2,
            random_var_freq: 0.0,
            seed: 0,
        }
    }
}

/// Resource limits for a single solve call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn until(deadline: Option<Instant>) -> Self {
        Budget { max_conflicts: None, deadline }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub solve_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub reductions: u64,
    /// Learnt clauses currently held.
    pub learnt_clauses: u64,
    /// Learnt clauses ever derived, units included.
    pub learnt_total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

impl std::fmt::Display for SatStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SatStatus::Sat => "SAT",
            SatStatus::Unsat => "UNSAT",
            SatStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveVerdict {
    pub status: SatStatus,
    pub model: Option<Model>,
    pub stats: Stats,
    /// Objective value reported by an external MaxSAT solver.
    pub cost: Option<u64>,
    /// The external solver claimed optimality (`s OPTIMUM FOUND`).
    pub optimum: bool,
    pub diagnostic: Option<String>,
}

impl SolveVerdict {
    pub fn unknown(diagnostic: impl Into<String>) -> Self {
        SolveVerdict {
            status: SatStatus::Unknown,
            model: None,
            stats: Stats::default(),
            cost: None,
            optimum: false,
            diagnostic: Some(diagnostic.into()),
        }
    }
}

enum SearchResult {
    Sat,
    Unsat,
    Restart,
    Budget,
}

/// Indexed binary max-heap of variables ordered by activity.
#[derive(Debug, Default, Clone)]
struct VarHeap {
    heap: Vec<u32>,
    index: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.index.resize(n, NOT_IN_HEAP);
    }

    fn contains(&self, v: usize) -> bool {
        self.index[v] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.index[v] = self.heap.len();
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.index[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()? as usize;
        let last = self.heap.pop().unwrap();
        self.index[top] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.index[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r] as usize] > act[self.heap[l] as usize] { r } else { l };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.index[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i;
    }
}

/// Finite Luby sequence value for index `x` (0-based), base `y`.
fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0i32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    ok: bool,

    clauses: Vec<Clause>,
    free_slots: Vec<u32>,
    watches: Vec<Vec<Watcher>>,

    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    saved_phase: Vec<bool>,

    seen: Vec<bool>,
    level_stamp: Vec<u64>,
    stamp: u64,

    next_reduce: u64,
    reduce_interval: u64,
    rng: ChaCha8Rng,
    stats: Stats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let next_reduce = config.reduce_base;
        Solver {
            config,
            num_vars: 0,
            ok: true,
            clauses: Vec::new(),
            free_slots: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            saved_phase: Vec::new(),
            seen: Vec::new(),
            level_stamp: vec![0],
            stamp: 0,
            next_reduce,
            reduce_interval: next_reduce,
            rng,
            stats: Stats::default(),
        }
    }

    /// A solver loaded with every clause of `formula`.
    pub fn from_formula(formula: &CnfFormula, config: SolverConfig) -> Self {
        let mut s = Solver::new(config);
        s.add_formula(formula);
        s
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars as u32
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    /// False once the clause set has been proven unsatisfiable outright.
    pub fn is_consistent(&self) -> bool {
        self.ok
    }

    /// Declares variables up to `n` (1-based, inclusive).
    pub fn ensure_vars(&mut self, n: u32) {
        let n = n as usize;
        if n <= self.num_vars {
            return;
        }
        self.assigns.resize(n, UNDEF);
        self.level.resize(n, 0);
        self.reason.resize(n, NO_REASON);
        self.activity.resize(n, 0.0);
        self.saved_phase.resize(n, true);
        self.seen.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
        self.heap.grow(n);
        for v in self.num_vars..n {
            self.heap.insert(v, &self.activity);
        }
        self.num_vars = n;
    }

    pub fn new_var(&mut self) -> u32 {
        self.ensure_vars(self.num_vars as u32 + 1);
        self.num_vars as u32
    }

    pub fn add_formula(&mut self, formula: &CnfFormula) {
        self.ensure_vars(formula.num_vars());
        for c in formula.clauses() {
            self.add_clause(c).expect("formula literals are within its variable count");
        }
    }

    /// Adds a clause given in DIMACS literals. Tautologies are dropped and
    /// duplicate literals merged; an empty clause makes the solver
    /// permanently unsatisfiable.
    pub fn add_clause(&mut self, lits: &[i32]) -> Result<(), SatError> {
        for &l in lits {
            if l == 0 || l == i32::MIN {
                return Err(SatError::ZeroLiteral);
            }
            if l.unsigned_abs() as usize > self.num_vars {
                return Err(SatError::VarOutOfRange { var: l.unsigned_abs(), declared: self.num_vars as u32 });
            }
        }
        if !self.ok {
            return Ok(());
        }
        debug_assert!(self.trail_lim.is_empty());
        let mut c: Vec<Lit> = lits.iter().map(|&l| Lit::from_dimacs(l)).collect();
        c.sort_unstable_by_key(|l| l.0);
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return Ok(());
        }
        if c.iter().any(|&l| lit_value(&self.assigns, l) == TRUE) {
            return Ok(());
        }
        c.retain(|&l| lit_value(&self.assigns, l) != FALSE);
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(c, false, 0);
            }
        }
        Ok(())
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let (a, b) = (lits[0], lits[1]);
        let clause = Clause { lits, learnt, deleted: false, lbd, activity: 0.0 };
        let cref = match self.free_slots.pop() {
            Some(slot) => {
                self.clauses[slot as usize] = clause;
                slot
            }
            None => {
                self.clauses.push(clause);
                (self.clauses.len() - 1) as u32
            }
        };
        self.watches[(!a).code()].push(Watcher { cref, blocker: b });
        self.watches[(!b).code()].push(Watcher { cref, blocker: a });
        if learnt {
            self.stats.learnt_clauses += 1;
        }
        cref
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        lit_value(&self.assigns, l)
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var();
        self.assigns[v] = if l.negative() { FALSE } else { TRUE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() && conflict.is_none() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_value(&self.assigns, w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let clause = &mut self.clauses[cref as usize];
                if clause.deleted {
                    continue;
                }
                let lits = &mut clause.lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let watcher = Watcher { cref, blocker: first };
                if first != w.blocker && lit_value(&self.assigns, first) == TRUE {
                    ws[j] = watcher;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if lit_value(&self.assigns, lits[k]) != FALSE {
                        lits.swap(1, k);
                        self.watches[(!lits[1]).code()].push(watcher);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = watcher;
                j += 1;
                if lit_value(&self.assigns, first) == FALSE {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    let v = first.var();
                    self.assigns[v] = if first.negative() { FALSE } else { TRUE };
                    self.level[v] = self.trail_lim.len() as u32;
                    self.reason[v] = cref;
                    self.trail.push(first);
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
        }
        if conflict.is_some() {
            self.qhead = self.trail.len();
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit(0)];
        let mut pending = 0usize;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        let current = self.decision_level() as u32;

        loop {
            self.bump_clause(confl);
            let skip = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for k in skip..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var()];
            self.seen[lit.var()] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by the rest of the clause.
        let marked: Vec<Lit> = learnt[1..].to_vec();
        let mut kept = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            let r = self.reason[l.var()];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..]
                    .iter()
                    .all(|q| self.seen[q.var()] || self.level[q.var()] == 0);
            if !redundant {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for l in marked {
            self.seen[l.var()] = false;
        }

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var()] > self.level[learnt[max_i].var()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var()] as usize;
        }
        (learnt, bt)
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut count = 0;
        for l in lits {
            let lev = self.level[l.var()] as usize;
            if lev >= self.level_stamp.len() {
                self.level_stamp.resize(lev + 1, 0);
            }
            if self.level_stamp[lev] != self.stamp {
                self.level_stamp[lev] = self.stamp;
                count += 1;
            }
        }
        count
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.saved_phase[v] = l.negative();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if self.config.random_var_freq > 0.0
            && !self.heap.heap.is_empty()
            && self.rng.random::<f64>() < self.config.random_var_freq
        {
            let i = self.rng.random_range(0..self.heap.heap.len());
            let v = self.heap.heap[i] as usize;
            if self.assigns[v] == UNDEF {
                self.stats.decisions += 1;
                return Some(Lit::with_sign(v, self.saved_phase[v]));
            }
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                self.stats.decisions += 1;
                return Some(Lit::with_sign(v, self.saved_phase[v]));
            }
        }
        None
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let first = c.lits[0];
        self.reason[first.var()] == cref && self.value(first) == TRUE
    }

    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let mut candidates: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&cr| {
                let c = &self.clauses[cr as usize];
                c.learnt && !c.deleted && c.lbd > self.config.keep_lbd && !self.locked(cr)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.total_cmp(&cb.activity))
        });
        let remove = candidates.len() / 2;
        if remove == 0 {
            return;
        }
        for &cr in &candidates[..remove] {
            let c = &mut self.clauses[cr as usize];
            c.deleted = true;
            c.lits = Vec::new();
            self.stats.learnt_clauses -= 1;
        }
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        self.free_slots.extend_from_slice(&candidates[..remove]);
    }

    fn out_of_budget(&self, budget: &Budget, conflicts_at_start: u64) -> bool {
        if let Some(max) = budget.max_conflicts {
            if self.stats.conflicts - conflicts_at_start >= max {
                return true;
            }
        }
        matches!(budget.deadline, Some(d) if Instant::now() >= d)
    }

    fn search(&mut self, assumptions: &[Lit], conflict_limit: u64, budget: &Budget, start: u64) -> SearchResult {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                self.stats.learnt_total += 1;
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let lbd = self.lbd(&learnt);
                    let first = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay;
                if self.out_of_budget(budget, start) {
                    return SearchResult::Budget;
                }
                continue;
            }

            if conflicts >= conflict_limit {
                self.cancel_until(0);
                return SearchResult::Restart;
            }
            if self.stats.conflicts >= self.next_reduce {
                self.reduce_interval += self.config.reduce_increment;
                self.next_reduce = self.stats.conflicts + self.reduce_interval;
                self.reduce_db();
            }

            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => return SearchResult::Unsat,
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(a) => a,
                None => {
                    if self.stats.decisions % 512 == 0 && self.out_of_budget(budget, start) {
                        return SearchResult::Budget;
                    }
                    match self.pick_branch() {
                        Some(l) => l,
                        None => return SearchResult::Sat,
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, NO_REASON);
        }
    }

    /// Solves under `assumptions` (DIMACS literals). Learnt clauses persist
    /// across calls; an UNSAT answer caused only by the assumptions leaves
    /// the solver reusable.
    pub fn solve_under(&mut self, assumptions: &[i32], budget: &Budget) -> Result<SolveVerdict, SatError> {
        for &a in assumptions {
            if a == 0 || a == i32::MIN {
                return Err(SatError::ZeroLiteral);
            }
            if a.unsigned_abs() as usize > self.num_vars {
                return Err(SatError::VarOutOfRange { var: a.unsigned_abs(), declared: self.num_vars as u32 });
            }
        }
        self.stats.solve_calls += 1;
        let verdict = |s: &Solver, status, model| SolveVerdict {
            status,
            model,
            stats: s.stats,
            cost: None,
            optimum: false,
            diagnostic: None,
        };
        if !self.ok {
            return Ok(verdict(self, SatStatus::Unsat, None));
        }
        if self.propagate().is_some() {
            self.ok = false;
            return Ok(verdict(self, SatStatus::Unsat, None));
        }
        let assumptions: Vec<Lit> = assumptions.iter().map(|&a| Lit::from_dimacs(a)).collect();
        let start = self.stats.conflicts;
        let mut restarts = 0u64;
        let result = loop {
            let limit = (luby(2.0, restarts) * self.config.restart_base as f64) as u64;
            match self.search(&assumptions, limit.max(1), budget, start) {
                SearchResult::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    if self.out_of_budget(budget, start) {
                        break SearchResult::Budget;
                    }
                }
                other => break other,
            }
        };
        let out = match result {
            SearchResult::Sat => {
                let values = self.assigns.iter().map(|&a| a == TRUE).collect();
                verdict(self, SatStatus::Sat, Some(Model::from_values(values)))
            }
            SearchResult::Unsat => verdict(self, SatStatus::Unsat, None),
            _ => {
                let mut v = verdict(self, SatStatus::Unknown, None);
                v.diagnostic = Some("search budget exhausted".into());
                v
            }
        };
        self.cancel_until(0);
        Ok(out)
    }

    pub fn solve(&mut self) -> SolveVerdict {
        self.solve_under(&[], &Budget::unlimited()).expect("no assumptions to validate")
    }
}
