//! Solve a small MaxSAT instance, then again with a single solver call to
//! get a model without an optimality proof.
//!
//! ```bash
//! cargo run --example maxsat
//! ```

use flowdup::sat::{at_most_one, maxsat_linear, Budget, CnfFormula, Lit};

fn main() {
    let mut hard = CnfFormula::with_vars(4);
    let vars: Vec<Lit> = (1..=4).map(Lit::from_dimacs).collect();
    // pick at least one and at most one of four options
    hard.add_clause(vars.clone());
    for clause in at_most_one(&vars) {
        hard.add_clause(clause);
    }
    // each option would like to be picked
    let soft: Vec<Vec<Lit>> = vars.iter().map(|&l| vec![l]).collect();

    let best = maxsat_linear(&hard, &soft, Budget::UNLIMITED);
    println!("optimum: {:?} violated (optimal: {}, history {:?})", best.cost, best.optimal, best.history);

    let rushed = maxsat_linear(&hard, &soft, Budget { sat_calls: 1, ..Budget::UNLIMITED });
    println!("one call: {:?} violated (optimal: {})", rushed.cost, rushed.optimal);
}
