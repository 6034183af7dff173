//! How much of a corpus the mined patterns cover.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, GraphId, LabeledGraph, NodeId};
use crate::mcs::Pattern;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuplicationMetrics {
    /// Weight of every flow node and edge covered by some occurrence, each
    /// element counted once.
    pub duplicated_weight: Weight,
    pub pct_flows_with_dup: f64,
    pub pct_dup_nodes: f64,
}

/// Coverage of `patterns` over `corpus`, the full flows before any
/// stripping or filtering. `corpus[i]` must be the flow with id `i`.
pub fn duplication_metrics(corpus: &[LabeledGraph], patterns: &[Pattern]) -> DuplicationMetrics {
    let mut nodes: BTreeSet<(GraphId, NodeId)> = BTreeSet::new();
    let mut edges: BTreeSet<(GraphId, EdgeId)> = BTreeSet::new();
    for p in patterns {
        for (&flow, occ) in &p.occurrences {
            let host = &corpus[flow.0 as usize];
            nodes.extend(occ.values().map(|&v| (flow, v)));
            for e in p.graph.edges() {
                let he = host.edge_between(occ[&e.src], occ[&e.dst]).expect("occurrence maps edges to edges");
                edges.insert((flow, he.id));
            }
        }
    }
    let weight_of_nodes: Weight =
        nodes.iter().map(|&(f, v)| corpus[f.0 as usize].node(v).expect("occurrence node").weight).sum();
    let weight_of_edges: Weight =
        edges.iter().map(|&(f, e)| corpus[f.0 as usize].edge(e).expect("occurrence edge").weight).sum();
    let flows: BTreeSet<GraphId> = nodes.iter().map(|&(f, _)| f).collect();
    let total_nodes: usize = corpus.iter().map(LabeledGraph::node_count).sum();
    DuplicationMetrics {
        duplicated_weight: weight_of_nodes + weight_of_edges,
        pct_flows_with_dup: percent(flows.len(), corpus.len()),
        pct_dup_nodes: percent(nodes.len(), total_nodes),
    }
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn chain(id: u32, n: u32) -> LabeledGraph {
        let labels: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let edges: Vec<(u32, u32, &str)> = (1..n).map(|i| (i - 1, i, "C")).collect();
        LabeledGraph::from_labels(GraphId(id), &refs, &edges).unwrap()
    }

    fn pattern(id: u32, n: u32, hosts: &[(u32, u32)]) -> Pattern {
        let occurrences = hosts
            .iter()
            .map(|&(flow, offset)| (GraphId(flow), (0..n).map(|i| (NodeId(i), NodeId(i + offset))).collect()))
            .collect::<BTreeMap<_, _>>();
        Pattern { graph: chain(id, n), occurrences, parents: vec![] }
    }

    #[test]
    fn nothing_found() {
        let m = duplication_metrics(&[chain(0, 4)], &[]);
        assert_eq!(m.duplicated_weight, Weight::ZERO);
        assert_eq!(m.pct_flows_with_dup, 0.0);
        assert_eq!(m.pct_dup_nodes, 0.0);
    }

    #[test]
    fn one_pattern_on_two_flows() {
        let corpus = [chain(0, 3), chain(1, 3), chain(2, 5)];
        let m = duplication_metrics(&corpus, &[pattern(3, 3, &[(0, 0), (1, 0)])]);
        assert_eq!(m.duplicated_weight, Weight::from_units(10));
        assert!((m.pct_flows_with_dup - 200.0 / 3.0).abs() < 1e-9);
        assert!((m.pct_dup_nodes - 600.0 / 11.0).abs() < 1e-9);
    }

    #[test]
    fn overlapping_patterns_count_shared_nodes_once() {
        let corpus = [chain(0, 4), chain(1, 4)];
        let a = pattern(2, 3, &[(0, 0), (1, 0)]);
        let b = pattern(3, 2, &[(0, 2), (1, 2)]);
        let m = duplication_metrics(&corpus, &[a, b]);
        // per flow: nodes 0..=3 and edges 0..=2
        assert_eq!(m.duplicated_weight, Weight::from_units(14));
    }
}
