//! Mine the normalization example and render each occurrence as DOT.
//!
//! ```bash
//! cargo run --example export_dot
//! ```

use flowdup::dot::occurrence_dot;
use flowdup::fixtures::running_example;
use flowdup::pipeline::mine_corpus;
use flowdup::report::MiningConfig;

fn main() {
    let corpus = running_example();
    let report = mine_corpus(&corpus, &MiningConfig::default()).unwrap();
    for p in &report.patterns {
        for flow in &corpus.flows {
            if p.occurrences.contains_key(&flow.id) {
                println!("{}", occurrence_dot(flow, p));
            }
        }
    }
}
