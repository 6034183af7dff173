use std::cmp::Ordering;

use crate::graph::GraphId;
use crate::weight::Weight;

/// A queued graph pair. Under [`Ord`], greater means popped first: higher
/// `ub`, then higher `edge_ub`, then the smaller id pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateEntry {
    pub ub: Weight,
    pub edge_ub: usize,
    pub lo: GraphId,
    pub hi: GraphId,
}

impl CandidateEntry {
    pub fn new(ub: Weight, edge_ub: usize, a: GraphId, b: GraphId) -> CandidateEntry {
        CandidateEntry { ub, edge_ub, lo: a.min(b), hi: a.max(b) }
    }
}

impl Ord for CandidateEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .cmp(&other.ub)
            .then(self.edge_ub.cmp(&other.edge_ub))
            .then(other.lo.cmp(&self.lo))
            .then(other.hi.cmp(&self.hi))
    }
}

impl PartialOrd for CandidateEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
