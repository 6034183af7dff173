//! Plant a chain into some flows of a synthetic corpus and find it again.
//!
//! ```bash
//! cargo run --example planted_recall
//! ```

use std::collections::BTreeSet;

use flowdup::generator::{generate, GenSpec};
use flowdup::pipeline::mine_corpus;
use flowdup::report::MiningConfig;

fn main() {
    let spec = GenSpec { n_flows: 50, pattern_size: 5, hosts: 4, padding: 10, disjoint: true, copies: 0, seed: 8 };
    let generated = generate(&spec).unwrap();
    let hosts: BTreeSet<&str> = generated.manifest.hosts.iter().map(|h| h.flow.as_str()).collect();
    println!("planted {:?} (weight {}) into {hosts:?}", generated.manifest.pattern_labels, generated.manifest.pattern_weight);

    let report = mine_corpus(&generated.corpus, &MiningConfig::default()).unwrap();
    for p in report.patterns.iter().filter(|p| p.root) {
        let flows: BTreeSet<&str> = p.occurrences.keys().map(String::as_str).collect();
        println!("root pattern {} weight {} in {flows:?}: all hosts covered = {}", p.id, p.weight, flows == hosts);
    }
}
