//! Decide whether two graphs are isomorphic and merge them into one pattern.
//!
//! ```bash
//! cargo run --example isomorphism
//! ```

use flowdup::graph::{GraphId, LabeledGraph};
use flowdup::mcs::{isomorphism, merge_isomorphic, Pattern};
use flowdup::sat::Budget;

fn main() {
    let chain = LabeledGraph::from_labels(GraphId(0), &["x", "x", "x"], &[(0, 1, "C"), (1, 2, "C")]).unwrap();
    let renamed = LabeledGraph::from_labels(GraphId(1), &["x", "x", "x"], &[(2, 0, "C"), (1, 2, "C")]).unwrap();
    let star = LabeledGraph::from_labels(GraphId(2), &["x", "x", "x"], &[(0, 1, "C"), (0, 2, "C")]).unwrap();

    println!("chain ~ star: {}", isomorphism(&chain, &star, Budget::UNLIMITED).is_some());
    let bijection = isomorphism(&chain, &renamed, Budget::UNLIMITED).expect("same chain");
    println!("chain ~ renamed chain via {bijection:?}");

    let merged = merge_isomorphic(&Pattern::from_flow(chain), &Pattern::from_flow(renamed), &bijection, GraphId(3));
    println!("merged pattern occurs in {:?}", merged.flows().collect::<Vec<_>>());
}
