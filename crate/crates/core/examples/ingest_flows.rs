//! Parse a corpus, validate its flows and print their labeled graphs.
//!
//! ```bash
//! cargo run --example ingest_flows
//! ```

use flowdup::fixtures::running_example;
use flowdup::flow::{ingest, parse_corpus, strip_boundary_nodes};

fn main() {
    let text = serde_json::to_string(&running_example()).unwrap();
    let corpus = parse_corpus(text.as_bytes()).expect("corpus parses");
    for (raw, g) in corpus.flows.iter().zip(ingest(&corpus).expect("flows validate")) {
        let stripped = strip_boundary_nodes(&g);
        println!("{} ({} nodes, {} after stripping Start/End)", raw.id, g.node_count(), stripped.node_count());
        for e in g.edges() {
            println!("  {}", g.combined_label(e));
        }
    }

    let broken = br#"{"flows":[{"id":"f","nodes":[{"id":"s","kind":"Start"},{"id":"x","kind":"If"}],"edges":[{"src":"s","dst":"x","kind":"Connector"}]}]}"#;
    let err = ingest(&parse_corpus(broken).unwrap()).unwrap_err();
    println!("rejected: {err}");
}
