use std::fmt::{self, Write as _};
use std::ops::Not;
use std::time::{Duration, Instant};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variables are numbered from 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, for dense tables.
    pub(crate) fn pos(self) -> usize {
        self.0 as usize - 1
    }

    pub fn positive(self) -> Lit {
        Lit((self.0 - 1) << 1)
    }

    pub fn negative(self) -> Lit {
        Lit(((self.0 - 1) << 1) | 1)
    }

    pub fn lit(self, polarity: bool) -> Lit {
        if polarity {
            self.positive()
        } else {
            self.negative()
        }
    }
}

/// A literal: a variable or its negation. Internally `2 * (var - 1) + sign`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a literal");
        let var = Var::new(value.unsigned_abs());
        var.lit(value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().index() as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

/// Conjunction of clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new() -> CnfFormula {
        CnfFormula::default()
    }

    pub fn with_vars(num_vars: u32) -> CnfFormula {
        CnfFormula { num_vars, clauses: Vec::new() }
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars)
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Adds a clause. An empty clause makes the formula unsatisfiable.
    pub fn add_clause(&mut self, clause: impl IntoIterator<Item = Lit>) {
        let clause: Clause = clause.into_iter().collect();
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var().index());
        }
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        for c in clauses {
            self.add_clause(c);
        }
    }

    pub fn is_satisfied_by(&self, model: &Model) -> bool {
        self.clauses.iter().all(|c| model.satisfies(c))
    }

    /// DIMACS CNF text with a `p cnf V C` header.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{} ", l.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<CnfFormula, String> {
        let mut formula = CnfFormula::new();
        let mut declared = None;
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(format!("bad header: {line}"));
                }
                let vars: u32 = parts[0].parse().map_err(|e| format!("bad header: {e}"))?;
                let clauses: usize = parts[1].parse().map_err(|e| format!("bad header: {e}"))?;
                formula.num_vars = vars;
                declared = Some(clauses);
                continue;
            }
            for tok in line.split_whitespace() {
                let v: i32 = tok.parse().map_err(|e| format!("bad literal {tok:?}: {e}"))?;
                if v == 0 {
                    formula.add_clause(std::mem::take(&mut current));
                } else {
                    current.push(Lit::from_dimacs(v));
                }
            }
        }
        if !current.is_empty() {
            return Err("unterminated clause".into());
        }
        match declared {
            Some(n) if n != formula.clauses.len() => {
                Err(format!("header declares {n} clauses, found {}", formula.clauses.len()))
            }
            None => Err("missing p cnf header".into()),
            _ => Ok(formula),
        }
    }
}

/// A full assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Value of `var`; variables beyond the model are false.
    pub fn value(&self, var: Var) -> bool {
        self.values.get(var.pos()).copied().unwrap_or(false)
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.lit_value(l))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Model),
    Unsat,
    /// The budget ran out before a verdict.
    Unknown,
}

/// Resource limits for a solve. Zero means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub wall_ms: u64,
    pub conflicts: u64,
    /// Maximum number of SAT oracle calls (MaxSAT iterations).
    pub sat_calls: u64,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { wall_ms: 0, conflicts: 0, sat_calls: 0 };

    pub fn wall(ms: u64) -> Budget {
        Budget { wall_ms: ms, ..Budget::UNLIMITED }
    }

    pub fn conflicts(n: u64) -> Budget {
        Budget { conflicts: n, ..Budget::UNLIMITED }
    }

    pub fn start(self) -> Limits {
        Limits {
            deadline: (self.wall_ms > 0).then(|| Instant::now() + Duration::from_millis(self.wall_ms)),
            conflicts_left: (self.conflicts > 0).then_some(self.conflicts),
            calls_left: (self.sat_calls > 0).then_some(self.sat_calls),
        }
    }
}

/// A running budget, shared across successive solver calls.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub conflicts_left: Option<u64>,
    pub calls_left: Option<u64>,
}

impl Limits {
    pub fn unlimited() -> Limits {
        Limits::default()
    }

    /// Whether a running solve must stop. The call limit is checked
    /// separately, before each solve starts.
    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d) || self.conflicts_left == Some(0)
    }

    pub(crate) fn take_call(&mut self) -> bool {
        match &mut self.calls_left {
            Some(0) => false,
            Some(n) => {
                *n -= 1;
                true
            }
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let l = Lit::from_dimacs(-3);
        assert_eq!(l.var(), Var::new(3));
        assert!(!l.is_positive());
        assert_eq!((!l).to_dimacs(), 3);
        assert_eq!(Var::new(1).positive().code(), 0);
    }

    #[test]
    fn dimacs_round_trip() {
        let mut f = CnfFormula::new();
        f.add_clause([Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        f.add_clause([Lit::from_dimacs(2)]);
        let text = f.to_dimacs();
        assert!(text.starts_with("p cnf 2 2\n"));
        assert_eq!(CnfFormula::from_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn dimacs_rejects_bad_count() {
        assert!(CnfFormula::from_dimacs("p cnf 1 2\n1 0\n").is_err());
    }
}
