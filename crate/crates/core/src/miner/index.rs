//! Partial inverted index from combined labels to the graphs carrying them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::graph::{CombinedLabel, GraphId, LabeledGraph};

/// Slack absorbed before rounding `labels * delta` up, so that products such
/// as `10 * 0.3` count as exactly 3.
const PREFIX_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct InvertedIndex {
    postings: BTreeMap<CombinedLabel, BTreeSet<GraphId>>,
    indexed: HashMap<GraphId, Vec<CombinedLabel>>,
    /// Edge counts per combined label over the graphs the index was built
    /// from, and their total edge count.
    counts: HashMap<CombinedLabel, u64>,
    total_edges: u64,
    delta: f64,
}

impl InvertedIndex {
    /// Builds the index over `graphs`, posting each under the `delta`
    /// fraction (rounded up) of its distinct combined labels that are most
    /// frequent corpus-wide.
    pub fn build<'a>(graphs: impl IntoIterator<Item = &'a LabeledGraph>, delta: f64) -> InvertedIndex {
        assert!(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
        let graphs: Vec<&LabeledGraph> = graphs.into_iter().collect();
        let mut index = InvertedIndex { delta, ..InvertedIndex::default() };
        for g in &graphs {
            index.total_edges += g.edge_count() as u64;
            for (label, n) in g.combined_label_counts() {
                *index.counts.entry(label).or_insert(0) += n as u64;
            }
        }
        for g in graphs {
            index.insert(g);
        }
        index
    }

    /// Share of all indexed-corpus edges carrying `label`.
    pub fn frequency(&self, label: &CombinedLabel) -> f64 {
        if self.total_edges == 0 {
            return 0.0;
        }
        self.counts.get(label).copied().unwrap_or(0) as f64 / self.total_edges as f64
    }

    /// Posts `g` under its most frequent labels. Frequencies stay those of
    /// the corpus the index was built from.
    pub fn insert(&mut self, g: &LabeledGraph) {
        let mut bag: Vec<CombinedLabel> = g.combined_label_counts().into_keys().collect();
        bag.sort_by(|a, b| {
            let (fa, fb) = (self.counts.get(a).copied().unwrap_or(0), self.counts.get(b).copied().unwrap_or(0));
            fb.cmp(&fa).then_with(|| a.cmp(b))
        });
        let keep = ((bag.len() as f64 * self.delta) - PREFIX_EPSILON).ceil().max(0.0) as usize;
        bag.truncate(keep.min(bag.len()));
        for label in &bag {
            self.postings.entry(label.clone()).or_default().insert(g.id());
        }
        self.indexed.insert(g.id(), bag);
    }

    pub fn indexed_labels(&self, g: GraphId) -> &[CombinedLabel] {
        self.indexed.get(&g).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn postings(&self, label: &CombinedLabel) -> Option<&BTreeSet<GraphId>> {
        self.postings.get(label)
    }

    /// Graphs sharing a posting list with `g`, excluding `g`.
    pub fn candidate_pairs(&self, g: GraphId) -> BTreeSet<GraphId> {
        let mut out = BTreeSet::new();
        for label in self.indexed_labels(g) {
            out.extend(self.postings[label].iter().copied());
        }
        out.remove(&g);
        out
    }
}
