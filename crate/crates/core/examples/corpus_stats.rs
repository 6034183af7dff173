//! Count flows and nodes before and after input filtering.
//!
//! ```bash
//! cargo run --example corpus_stats
//! ```

use flowdup::fixtures::running_example;
use flowdup::generator::{generate, GenSpec};
use flowdup::pipeline::corpus_stats;
use flowdup::weight::Weight;

fn main() {
    let beta = Weight::from_units(5);
    println!("running example: {:?}", corpus_stats(&running_example(), beta).unwrap());
    let spec = GenSpec { n_flows: 100, pattern_size: 3, hosts: 2, padding: 1, disjoint: true, copies: 0, seed: 1 };
    println!("small generated flows: {:?}", corpus_stats(&generate(&spec).unwrap().corpus, beta).unwrap());
}
