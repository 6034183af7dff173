//! Build a partial inverted index and list the candidate partners it allows.
//!
//! ```bash
//! cargo run --example inverted_index
//! ```

use flowdup::generator::{generate, GenSpec};
use flowdup::graph::GraphId;
use flowdup::flow::ingest;
use flowdup::miner::InvertedIndex;
use flowdup::pipeline::mining_inputs;

fn main() {
    let spec = GenSpec { n_flows: 12, pattern_size: 4, hosts: 3, padding: 6, disjoint: false, copies: 0, seed: 4 };
    let flows = ingest(&generate(&spec).unwrap().corpus).unwrap();
    let graphs: Vec<_> = mining_inputs(&flows).into_iter().map(|p| p.graph).collect();
    for delta in [1.0, 0.3] {
        let index = InvertedIndex::build(&graphs, delta);
        let partners: usize = (0..graphs.len() as u32).map(|g| index.candidate_pairs(GraphId(g)).len()).sum();
        println!("delta {delta}: {} candidate pairs", partners / 2);
        println!("  flow 0 indexed under {:?}", index.indexed_labels(GraphId(0)));
    }
}
