use std::fmt;

/// A literal in DIMACS convention: a non-zero integer whose magnitude is the
/// variable (1-based) and whose sign is the polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i32);

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable out of range: {var}");
        let v = var as i32;
        Literal(if positive { v } else { -v })
    }

    pub fn from_dimacs(lit: i32) -> Option<Self> {
        (lit != 0 && lit != i32::MIN).then_some(Literal(lit))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        Literal(-self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A clause set over variables `1..=num_vars`, literals in DIMACS form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> Self {
        CnfFormula { num_vars, clauses: Vec::new() }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn add_clause(&mut self, clause: Vec<i32>) {
        debug_assert!(clause.iter().all(|&l| l != 0 && l.unsigned_abs() <= self.num_vars));
        self.clauses.push(clause);
    }

    /// True when no clause repeats a literal or contains a complementary pair.
    pub fn is_well_formed(&self) -> bool {
        self.clauses.iter().all(|c| {
            let mut vars: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn satisfied_by(&self, model: &Model) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| model.value(l)))
    }
}

/// A total truth assignment indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    /// `values[i]` is the value of variable `i + 1`.
    pub fn from_values(values: Vec<bool>) -> Self {
        Model { values }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of a DIMACS literal; variables beyond the model read as false.
    pub fn value(&self, lit: i32) -> bool {
        let v = self.values.get(lit.unsigned_abs() as usize - 1).copied().unwrap_or(false);
        if lit > 0 {
            v
        } else {
            !v
        }
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { i as i32 + 1 } else { -(i as i32 + 1) })
            .collect()
    }
}
