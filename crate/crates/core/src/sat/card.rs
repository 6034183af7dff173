//! At-most-k cardinality constraints.

use super::cnf::{Clause, CnfFormula, Lit, Var};
use super::solver::Solver;

/// Something that hands out fresh variables.
pub trait VarSource {
    fn fresh_var(&mut self) -> Var;
}

impl VarSource for CnfFormula {
    fn fresh_var(&mut self) -> Var {
        self.new_var()
    }
}

impl VarSource for Solver {
    fn fresh_var(&mut self) -> Var {
        self.new_var()
    }
}

/// Pairwise at-most-one: `(¬a ∨ ¬b)` for every pair.
pub fn at_most_one(lits: &[Lit]) -> Vec<Clause> {
    let mut out = Vec::with_capacity(lits.len() * lits.len().saturating_sub(1) / 2);
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            out.push(vec![!lits[i], !lits[j]]);
        }
    }
    out
}

/// Clauses allowing at most `k` of `lits` to be true.
///
/// `k = 0` yields negated units, `k = 1` the pairwise encoding, and larger
/// `k` a sequential counter whose auxiliary variables come from `vars`.
/// Nothing is emitted when `k >= lits.len()`.
pub fn at_most_k(lits: &[Lit], k: usize, vars: &mut impl VarSource) -> Vec<Clause> {
    let n = lits.len();
    if k >= n {
        return Vec::new();
    }
    if k == 0 {
        return lits.iter().map(|&l| vec![!l]).collect();
    }
    if k == 1 {
        return at_most_one(lits);
    }
    // s[i][j]: at least j+1 of lits[0..=i] are true
    let s: Vec<Vec<Lit>> = (0..n - 1).map(|_| (0..k).map(|_| vars.fresh_var().positive()).collect()).collect();
    let mut out = Vec::new();
    out.push(vec![!lits[0], s[0][0]]);
    for j in 1..k {
        out.push(vec![!s[0][j]]);
    }
    for i in 1..n - 1 {
        out.push(vec![!lits[i], s[i][0]]);
        out.push(vec![!s[i - 1][0], s[i][0]]);
        for j in 1..k {
            out.push(vec![!lits[i], !s[i - 1][j - 1], s[i][j]]);
            out.push(vec![!s[i - 1][j], s[i][j]]);
        }
        out.push(vec![!lits[i], !s[i - 1][k - 1]]);
    }
    out.push(vec![!lits[n - 1], !s[n - 2][k - 1]]);
    out
}
