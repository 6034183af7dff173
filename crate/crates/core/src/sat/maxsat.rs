//! Unweighted partial MaxSAT by SAT-UNSAT linear search.
//!
//! Each soft clause `c` is relaxed to `c ∨ r` with a fresh `r`. After every
//! model violating `v` soft clauses the bound `Σ r ≤ v - 1` is added and the
//! oracle is called again. UNSAT proves the last model optimal. If the
//! budget runs out first, the best model so far is returned unproven.

use super::card::at_most_k;
use super::cnf::{Budget, Clause, CnfFormula, Lit, Model, SolveOutcome};
use super::solver::Solver;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSatResult {
    /// Best model found, restricted to the hard formula's variables.
    pub model: Option<Model>,
    /// Number of soft clauses the model violates.
    pub cost: Option<usize>,
    /// The model is proven optimal (or the hard formula proven UNSAT).
    pub optimal: bool,
    /// Violated-soft counts of successive models.
    pub history: Vec<usize>,
    pub sat_calls: u64,
}

pub fn violated(soft: &[Clause], model: &Model) -> usize {
    soft.iter().filter(|c| !model.satisfies(c)).count()
}

pub fn maxsat_linear(hard: &CnfFormula, soft: &[Clause], budget: Budget) -> MaxSatResult {
    let mut limits = budget.start();
    let mut solver = Solver::from_formula(hard);
    let base_vars = hard.num_vars().max(soft.iter().flatten().map(|l| l.var().index()).max().unwrap_or(0));
    solver.reserve_vars(base_vars as usize);
    let mut relax: Vec<Lit> = Vec::with_capacity(soft.len());
    for c in soft {
        let r = solver.new_var().positive();
        let mut relaxed = c.clone();
        relaxed.push(r);
        solver.add_clause(&relaxed);
        relax.push(r);
    }

    let mut result = MaxSatResult { model: None, cost: None, optimal: false, history: Vec::new(), sat_calls: 0 };
    loop {
        if !limits.take_call() {
            return result;
        }
        result.sat_calls += 1;
        match solver.solve(&mut limits) {
            SolveOutcome::Sat(full) => {
                let model = Model::new((1..=base_vars).map(|v| full.value(super::Var::new(v))).collect());
                let cost = violated(soft, &model);
                debug_assert!(result.cost.is_none_or(|c| cost < c), "linear search must improve");
                result.history.push(cost);
                result.model = Some(model);
                result.cost = Some(cost);
                if cost == 0 {
                    result.optimal = true;
                    return result;
                }
                for clause in at_most_k(&relax, cost - 1, &mut solver) {
                    solver.add_clause(&clause);
                }
            }
            SolveOutcome::Unsat => {
                result.optimal = true;
                return result;
            }
            SolveOutcome::Unknown => return result,
        }
    }
}
