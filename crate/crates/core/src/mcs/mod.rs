//! Maximum common sub-graph extraction and isomorphism testing via SAT.

mod encode;
mod pattern;

use std::collections::BTreeMap;
use std::time::Instant;

pub use encode::{encode_iso, encode_mcs, McsInstance, VarMaps};
pub use pattern::{
    check_embedding, compose_occurrences, decode, post_process_branches, CommonSubgraph, Occurrence, Occurrences,
    Pattern,
};

use crate::graph::{GraphId, LabeledGraph, NodeId};
use crate::preprocess::{simplify_pair, PairView};
use crate::sat::{maxsat_linear, sat_solve, Budget, SolveOutcome};

/// Result of one pairwise extraction.
#[derive(Debug, Clone)]
pub struct Extraction {
    /// `None` when no non-empty common sub-graph was found.
    pub pattern: Option<Pattern>,
    /// The edge count is proven maximum.
    pub optimal: bool,
    pub sat_calls: u64,
}

/// Extracts a maximum common sub-graph of two patterns (or flows) and lifts
/// it to a pattern over their combined flows, identified as `id`.
///
/// Both graphs are simplified first; the one with fewer remaining edges
/// becomes the mapping target. The wall-clock part of `budget` covers
/// simplification and encoding as well as solving.
pub fn extract_mcs(first: &Pattern, second: &Pattern, id: GraphId, budget: Budget) -> Extraction {
    extract_mcs_with(first, second, id, budget, true)
}

/// [`extract_mcs`] with simplification optional.
pub fn extract_mcs_with(first: &Pattern, second: &Pattern, id: GraphId, budget: Budget, simplify: bool) -> Extraction {
    let started = Instant::now();
    let (s1, s2) = if simplify {
        simplify_pair(&first.graph, &second.graph)
    } else {
        (first.graph.clone(), second.graph.clone())
    };
    let swap = s2.edge_count() < s1.edge_count();
    let (g1, g2) = if swap { (&s2, &s1) } else { (&s1, &s2) };
    let instance = encode_mcs(g1, g2);

    let mut remaining = budget;
    if budget.wall_ms > 0 {
        let spent = started.elapsed().as_millis() as u64;
        remaining.wall_ms = budget.wall_ms.saturating_sub(spent).max(1);
    }
    let result = maxsat_linear(&instance.hard, &instance.soft, remaining);
    let pattern = result.model.as_ref().and_then(|model| {
        let mut common = post_process_branches(decode(model, &instance.vars, g1, g2));
        if swap {
            std::mem::swap(&mut common.into_first, &mut common.into_second);
        }
        (!common.is_empty()).then(|| compose_occurrences(&common, first, second, id))
    });
    Extraction { pattern, optimal: result.optimal, sat_calls: result.sat_calls }
}

/// A label- and edge-preserving bijection from the nodes of `g2` onto those
/// of `g1`, if one exists.
///
/// Returns `None` without calling the solver when node or edge counts
/// differ, the combined-label multisets differ, or a simplification rule
/// applies to the pair. A solver that runs out of budget counts as a
/// negative answer.
pub fn isomorphism(g1: &LabeledGraph, g2: &LabeledGraph, budget: Budget) -> Option<BTreeMap<NodeId, NodeId>> {
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    if g1.combined_label_counts() != g2.combined_label_counts() || PairView::new(g1, g2).any_rule_applicable() {
        return None;
    }
    let (formula, vars) = encode_iso(g1, g2);
    match sat_solve(&formula, budget) {
        SolveOutcome::Sat(model) => {
            Some(vars.mapping.iter().filter(|(_, &f)| model.value(f)).map(|(&(v, w), _)| (w, v)).collect())
        }
        SolveOutcome::Unsat | SolveOutcome::Unknown => None,
    }
}

pub fn is_isomorphic(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    isomorphism(g1, g2, Budget::UNLIMITED).is_some()
}

/// Merges `other` into `rep` given a bijection from `other`'s nodes onto
/// `rep`'s: the result keeps `rep`'s structure and occurs in both flow sets.
pub fn merge_isomorphic(rep: &Pattern, other: &Pattern, bijection: &BTreeMap<NodeId, NodeId>, id: GraphId) -> Pattern {
    let inverse: Occurrence = bijection.iter().map(|(&w, &v)| (v, w)).collect();
    let into_first: Occurrence = rep.graph.nodes().iter().map(|n| (n.id, n.id)).collect();
    let common = CommonSubgraph { graph: min_weights(&rep.graph, &other.graph, &inverse), into_first, into_second: inverse };
    compose_occurrences(&common, rep, other, id)
}

/// `rep` with each weight lowered to its counterpart's in `other` where
/// that is smaller.
fn min_weights(rep: &LabeledGraph, other: &LabeledGraph, into_other: &Occurrence) -> LabeledGraph {
    let nodes = rep
        .nodes()
        .iter()
        .map(|n| {
            let w = other.node(into_other[&n.id]).expect("bijective").weight;
            crate::graph::Node { weight: n.weight.min(w), ..n.clone() }
        })
        .collect();
    let edges = rep
        .edges()
        .iter()
        .map(|e| {
            let w = other.edge_between(into_other[&e.src], into_other[&e.dst]).expect("edge preserving").weight;
            crate::graph::Edge { weight: e.weight.min(w), ..e.clone() }
        })
        .collect();
    LabeledGraph::new(rep.id(), nodes, edges).expect("reweighted graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::refactor_weight;
    use crate::weight::Weight;

    fn flow(id: u32, labels: &[&str], edges: &[(u32, u32, &str)]) -> Pattern {
        Pattern::from_flow(LabeledGraph::from_labels(GraphId(id), labels, edges).unwrap())
    }

    fn running_pair() -> (Pattern, Pattern) {
        let simple = flow(0, &["Trim", "ToLower", "Replace"], &[(0, 1, "Connector"), (1, 2, "Connector")]);
        let looped = flow(
            1,
            &["ForEach", "Trim", "ToLower", "Replace", "ListAppend"],
            &[(0, 1, "Cycle"), (1, 2, "Connector"), (2, 3, "Connector"), (3, 4, "Connector"), (4, 0, "Connector")],
        );
        (simple, looped)
    }

    #[test]
    fn running_example_soft_clauses() {
        let (a, b) = running_pair();
        let inst = encode_mcs(&a.graph, &b.graph);
        assert_eq!(inst.soft.len(), 2);
        assert_eq!(inst.vars.control_flow.len(), 2);
    }

    #[test]
    fn running_example_extraction() {
        let (a, b) = running_pair();
        let x = extract_mcs(&a, &b, GraphId(2), Budget::UNLIMITED);
        assert!(x.optimal);
        let p = x.pattern.unwrap();
        assert_eq!((p.graph.node_count(), p.graph.edge_count()), (3, 2));
        assert_eq!(refactor_weight(&p.graph), Weight::from_units(5));
        assert_eq!(p.occurrences[&GraphId(1)].values().copied().collect::<Vec<_>>(), vec![NodeId(1), NodeId(2), NodeId(3)]);
        assert_eq!(p.parents, vec![GraphId(0), GraphId(1)]);
    }

    #[test]
    fn disjoint_labels_yield_nothing() {
        let a = flow(0, &["a", "b"], &[(0, 1, "C")]);
        let b = flow(1, &["c", "d"], &[(0, 1, "C")]);
        let x = extract_mcs(&a, &b, GraphId(2), Budget::UNLIMITED);
        assert!(x.pattern.is_none());
        assert!(x.optimal);
    }

    #[test]
    fn isomorphism_fast_paths_and_solver() {
        let (a, b) = running_pair();
        assert!(!is_isomorphic(&a.graph, &b.graph));
        assert!(is_isomorphic(&b.graph, &b.graph));
        let chain = LabeledGraph::from_labels(GraphId(0), &["x", "x", "x"], &[(0, 1, "C"), (1, 2, "C")]).unwrap();
        let star = LabeledGraph::from_labels(GraphId(1), &["x", "x", "x"], &[(0, 1, "C"), (0, 2, "C")]).unwrap();
        assert!(!is_isomorphic(&chain, &star));
    }

    #[test]
    fn isomorphic_merge_occurs_in_both() {
        let a = flow(0, &["x", "y"], &[(0, 1, "C")]);
        let b = flow(1, &["y", "x"], &[(1, 0, "C")]);
        let bij = isomorphism(&a.graph, &b.graph, Budget::UNLIMITED).unwrap();
        let m = merge_isomorphic(&a, &b, &bij, GraphId(5));
        assert_eq!(m.occurrences[&GraphId(1)], BTreeMap::from([(NodeId(0), NodeId(1)), (NodeId(1), NodeId(0))]));
        assert_eq!(m.id(), GraphId(5));
    }
}
