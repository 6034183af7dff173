//! CNF formulas, a CDCL SAT oracle, cardinality encodings and linear-search
//! MaxSAT.

mod card;
mod cnf;
mod maxsat;
mod solver;

pub use card::{at_most_k, at_most_one, VarSource};
pub use cnf::{Budget, Clause, CnfFormula, Limits, Lit, Model, SolveOutcome, Var};
pub use maxsat::{maxsat_linear, violated, MaxSatResult};
pub use solver::{sat_solve, Solver, SolverStats};
