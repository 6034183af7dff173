//! Extract the maximum common sub-graph of two flows.
//!
//! ```bash
//! cargo run --example common_subgraph
//! ```

use flowdup::fixtures::running_example;
use flowdup::flow::ingest;
use flowdup::graph::{ub, GraphId};
use flowdup::pipeline::mining_inputs;
use flowdup::mcs::extract_mcs;
use flowdup::sat::Budget;

fn main() {
    let flows = ingest(&running_example()).unwrap();
    let inputs = mining_inputs(&flows);
    let (a, b) = (&inputs[0], &inputs[1]);
    println!("bound on the shared weight: {}", ub(&a.graph, &b.graph));

    let x = extract_mcs(a, b, GraphId(2), Budget::wall(1000));
    let p = x.pattern.expect("the flows share a chain");
    println!("weight {} (optimal: {}, {} solver calls)", p.weight(), x.optimal, x.sat_calls);
    for e in p.graph.edges() {
        println!("  {}", p.graph.combined_label(e));
    }
    for (flow, occ) in &p.occurrences {
        println!("  in flow {flow}: {occ:?}");
    }
}
