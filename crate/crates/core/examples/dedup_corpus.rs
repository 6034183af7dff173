//! Collapse copy-pasted flows into isomorphic patterns before mining.
//!
//! ```bash
//! cargo run --example dedup_corpus
//! ```

use flowdup::flow::ingest;
use flowdup::generator::{generate, GenSpec};
use flowdup::graph::GraphId;
use flowdup::miner::dedup;
use flowdup::pipeline::mining_inputs;
use flowdup::sat::Budget;

fn main() {
    let spec = GenSpec { n_flows: 40, pattern_size: 3, hosts: 2, padding: 6, disjoint: false, copies: 15, seed: 2 };
    let flows = ingest(&generate(&spec).unwrap().corpus).unwrap();
    let out = dedup(mining_inputs(&flows), GraphId(flows.len() as u32), Budget::wall(1000));
    println!("{} flows -> {} representatives", flows.len(), out.representatives.len());
    for p in out.representatives.iter().filter(|p| out.isomorphic.contains(&p.id())) {
        println!("  pattern {} stands for flows {:?}", p.id(), p.flows().collect::<Vec<_>>());
    }
}
