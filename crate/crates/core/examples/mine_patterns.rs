//! Mine a generated corpus with both miners and compare what they find.
//!
//! ```bash
//! cargo run --example mine_patterns
//! ```

use flowdup::generator::{generate, GenSpec};
use flowdup::pipeline::mine_corpus;
use flowdup::report::{AlgorithmName, MiningConfig};

fn main() {
    let spec = GenSpec { n_flows: 80, pattern_size: 4, hosts: 5, padding: 8, disjoint: false, copies: 10, seed: 21 };
    let corpus = generate(&spec).unwrap().corpus;
    for algorithm in [AlgorithmName::Greedy, AlgorithmName::Lazy] {
        let report = mine_corpus(&corpus, &MiningConfig { algorithm, ..MiningConfig::default() }).unwrap();
        println!(
            "{algorithm:?}: {} patterns, {} roots, duplicated weight {}, {:.1}% of flows, {} ms",
            report.patterns.len(),
            report.patterns.iter().filter(|p| p.root).count(),
            report.metrics.duplicated_weight,
            report.metrics.pct_flows_with_dup,
            report.timing.mining_ms
        );
        if let Some(top) = report.patterns.first() {
            let labels: Vec<&str> = top.nodes.iter().map(|n| n.label.as_str()).collect();
            println!("  heaviest: weight {} over {} flows, nodes {labels:?}", top.weight, top.occurrences.len());
        }
    }
}
