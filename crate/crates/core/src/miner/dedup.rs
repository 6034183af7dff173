//! Collapsing isomorphic graphs before mining.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{CombinedLabel, GraphId, LabeledGraph};
use crate::mcs::{isomorphism, merge_isomorphic, Pattern};
use crate::sat::Budget;

/// Sorted multiset of a graph's combined labels. Isomorphic graphs always
/// share a key.
pub fn dedup_key(g: &LabeledGraph) -> Vec<CombinedLabel> {
    let mut key = g.combined_labels();
    key.sort();
    key
}

/// Canonical text of a [`dedup_key`].
pub fn dedup_key_text(g: &LabeledGraph) -> String {
    dedup_key(g).iter().map(|l| l.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone)]
pub struct DedupOutcome {
    /// One graph per isomorphism class, in order of first appearance.
    pub representatives: Vec<Pattern>,
    /// Ids of representatives that merged two or more inputs.
    pub isomorphic: BTreeSet<GraphId>,
    pub next_id: GraphId,
}

/// Merges isomorphic inputs into single patterns occurring in all of their
/// flows.
///
/// Each input is compared with the earlier representatives sharing its key.
/// On the first isomorphic hit the representative becomes (or stays) an
/// isomorphic pattern: its first merge gives it the id `next_id`, later
/// merges keep that id. Parents of an isomorphic pattern are all the inputs
/// it absorbed.
pub fn dedup(graphs: Vec<Pattern>, mut next_id: GraphId, budget: Budget) -> DedupOutcome {
    let mut buckets: BTreeMap<Vec<CombinedLabel>, Vec<usize>> = BTreeMap::new();
    let mut representatives: Vec<Pattern> = Vec::new();
    let mut isomorphic = BTreeSet::new();
    for g in graphs {
        let bucket = buckets.entry(dedup_key(&g.graph)).or_default();
        let hit = bucket.iter().find_map(|&slot| {
            isomorphism(&representatives[slot].graph, &g.graph, budget).map(|bijection| (slot, bijection))
        });
        match hit {
            Some((slot, bijection)) => {
                let rep = &representatives[slot];
                let merged = if isomorphic.contains(&rep.id()) {
                    let mut parents = rep.parents.clone();
                    parents.push(g.id());
                    Pattern { parents, ..merge_isomorphic(rep, &g, &bijection, rep.id()) }
                } else {
                    let id = next_id;
                    next_id = GraphId(next_id.0 + 1);
                    isomorphic.insert(id);
                    merge_isomorphic(rep, &g, &bijection, id)
                };
                representatives[slot] = merged;
            }
            None => {
                bucket.push(representatives.len());
                representatives.push(g);
            }
        }
    }
    DedupOutcome { representatives, isomorphic, next_id }
}
