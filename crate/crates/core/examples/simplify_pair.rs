//! Shrink a graph pair with the simplification rules before matching.
//!
//! ```bash
//! cargo run --example simplify_pair
//! ```

use flowdup::graph::{GraphId, LabeledGraph};
use flowdup::preprocess::PairView;

fn main() {
    let g1 = LabeledGraph::from_labels(
        GraphId(0),
        &["Trim", "ToLower", "Replace", "Log", "Log", "Log"],
        &[(0, 1, "Connector"), (1, 2, "Connector"), (3, 4, "Connector")],
    )
    .unwrap();
    let g2 = LabeledGraph::from_labels(
        GraphId(1),
        &["Trim", "ToLower", "Replace", "Save"],
        &[(0, 1, "Connector"), (1, 2, "Connector"), (2, 3, "Connector")],
    )
    .unwrap();

    let mut view = PairView::new(&g1, &g2);
    view.simplify();
    println!("first:  {} -> {} edges", g1.edge_count(), view.g1.edge_count());
    println!("second: {} -> {} edges", g2.edge_count(), view.g2.edge_count());
    for removal in &view.log {
        println!("  {removal:?}");
    }
}
