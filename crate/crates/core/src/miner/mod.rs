//! Corpus-level pattern mining: greedy and lazy pair selection, isomorphic
//! de-duplication, the inverted index and coverage metrics.
//!
//! Both miners repeatedly take the live graph pair with the highest bound on
//! its common refactor weight, extract a maximum common sub-graph and, when
//! it is heavy enough, replace the pair by the pattern. The lazy miner
//! computes pair bounds only as graphs get activated, yet extracts exactly
//! the same pairs in the same order as the greedy one.

mod dedup;
mod index;
mod metrics;
mod queue;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::time::Instant;

pub use dedup::{dedup, dedup_key, dedup_key_text, DedupOutcome};
pub use index::InvertedIndex;
pub use metrics::{duplication_metrics, DuplicationMetrics};
pub use queue::CandidateEntry;

use crate::graph::{weakly_connected_components, CombinedLabel, GraphId, GraphProfile, LabeledGraph};
use crate::mcs::{extract_mcs_with, Pattern};
use crate::sat::Budget;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    Lazy,
}

#[derive(Debug, Clone)]
pub struct MinerConfig {
    /// Minimum refactor weight of mined graphs and reported patterns.
    pub beta: Weight,
    /// Restrict pairs to those sharing an inverted-index posting, built with
    /// this fraction of each graph's labels.
    pub index_delta: Option<f64>,
    /// Per-extraction budget.
    pub mcs_budget: Budget,
    /// Simplify each pair before encoding it.
    pub preprocess: bool,
    /// Mining stops, keeping what it found, once this passes.
    pub deadline: Option<Instant>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            beta: Weight::from_units(5),
            index_delta: None,
            mcs_budget: Budget::wall(10_000),
            preprocess: true,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MiningStats {
    pub extractions: u64,
    pub optimal_extractions: u64,
    /// Pairs whose parents were evicted because extraction ran out of budget.
    pub timeouts: u64,
    /// Pair bounds computed.
    pub pairs_evaluated: u64,
    pub activations: u64,
    pub first_pattern_at: Option<Instant>,
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    /// Patterns in creation order.
    pub patterns: Vec<Pattern>,
    /// Mined patterns still live at the end: nothing mined later was built
    /// from them.
    pub roots: BTreeSet<GraphId>,
    /// Every graph, input or mined, still live at the end.
    pub live: BTreeSet<GraphId>,
    pub stats: MiningStats,
    pub budget_exhausted: bool,
    pub next_id: GraphId,
}

/// Order in which the lazy miner activates graphs when its queue runs dry:
/// heaviest first, ties to the smaller id.
pub fn activation_order<'a>(candidates: impl IntoIterator<Item = &'a Pattern>) -> Option<GraphId> {
    candidates.into_iter().map(|p| (Reverse(p.weight()), p.id())).min().map(|(_, id)| id)
}

pub fn mine(graphs: &[Pattern], algorithm: Algorithm, cfg: &MinerConfig, next_id: GraphId) -> MiningOutcome {
    match algorithm {
        Algorithm::Greedy => greedy_mine(graphs, cfg, next_id),
        Algorithm::Lazy => lazy_mine(graphs, cfg, next_id),
    }
}

/// Eager variant: bounds for every pair of eligible graphs are computed up
/// front.
pub fn greedy_mine(graphs: &[Pattern], cfg: &MinerConfig, next_id: GraphId) -> MiningOutcome {
    let mut m = Miner::new(graphs, cfg, next_id);
    let eligible: Vec<GraphId> = m.eligible.clone();
    for (i, &g) in eligible.iter().enumerate() {
        let later: BTreeSet<GraphId> = eligible[i + 1..].iter().copied().collect();
        m.push_pairs(g, &later);
    }
    m.active = eligible.into_iter().collect();
    while let Some(top) = m.queue.pop() {
        if m.expired() {
            break;
        }
        if top.ub < cfg.beta || !m.active.contains(&top.lo) || !m.active.contains(&top.hi) {
            continue;
        }
        if let Some(p) = m.process(top) {
            let partners = m.active.clone();
            m.push_pairs(p, &partners);
            m.active.insert(p);
        }
    }
    m.finish()
}

/// Lazy variant: a graph's pair bounds are computed when it is activated,
/// which happens only once the best queued pair involves it or it could
/// beat the best queued pair.
pub fn lazy_mine(graphs: &[Pattern], cfg: &MinerConfig, next_id: GraphId) -> MiningOutcome {
    let mut m = Miner::new(graphs, cfg, next_id);
    let bounds = PartnerBound::new(m.eligible.iter().map(|g| &m.graphs[g].graph));
    let mut lazy = LazySets::default();
    for g in m.eligible.clone() {
        lazy.insert(&m, &bounds, g);
    }
    loop {
        if m.expired() {
            break;
        }
        while let Some(top) = m.queue.peek() {
            let live = |g: &GraphId| m.active.contains(g) || lazy.contains(g);
            if top.ub < cfg.beta || !live(&top.lo) || !live(&top.hi) {
                m.queue.pop();
            } else {
                break;
            }
        }
        let Some(&top) = m.queue.peek() else {
            if lazy.len() <= 1 {
                break;
            }
            let g = lazy.heaviest();
            m.activate(&mut lazy, g);
            continue;
        };
        if let Some(&g) = [top.lo, top.hi].iter().find(|g| lazy.contains(g)) {
            m.activate(&mut lazy, g);
            continue;
        }
        if let Some(g) = lazy.reaching(top.ub) {
            m.activate(&mut lazy, g);
            continue;
        }
        m.queue.pop();
        if let Some(p) = m.process(top) {
            let partners = m.active.clone();
            m.push_pairs(p, &partners);
            lazy.insert(&m, &bounds, p);
        }
    }
    m.live_extra = lazy.ids();
    m.finish()
}

/// Inactive graphs of the lazy miner, ordered two ways.
#[derive(Default)]
struct LazySets {
    by_weight: BTreeSet<(Reverse<Weight>, GraphId)>,
    by_bound: BTreeSet<(Reverse<Weight>, GraphId)>,
    keys: HashMap<GraphId, (Weight, Weight)>,
}

impl LazySets {
    fn insert(&mut self, m: &Miner<'_>, bounds: &PartnerBound, g: GraphId) {
        let weight = m.profiles[&g].weight();
        let bound = bounds.bound(&m.graphs[&g].graph, m.inputs.contains(&g));
        self.by_weight.insert((Reverse(weight), g));
        self.by_bound.insert((Reverse(bound), g));
        self.keys.insert(g, (weight, bound));
    }

    fn remove(&mut self, g: GraphId) {
        let (weight, bound) = self.keys.remove(&g).expect("inactive graph");
        self.by_weight.remove(&(Reverse(weight), g));
        self.by_bound.remove(&(Reverse(bound), g));
    }

    fn contains(&self, g: &GraphId) -> bool {
        self.keys.contains_key(g)
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn heaviest(&self) -> GraphId {
        self.by_weight.first().expect("non-empty").1
    }

    /// An inactive graph that might pair with another inactive graph at a
    /// bound of at least `ub`.
    fn reaching(&self, ub: Weight) -> Option<GraphId> {
        self.by_bound.first().filter(|(Reverse(b), _)| *b >= ub).map(|&(_, g)| g)
    }

    fn ids(&self) -> BTreeSet<GraphId> {
        self.keys.keys().copied().collect()
    }
}

/// Per combined label, the two largest single-component masses among the
/// mining inputs, with their owners. Patterns never outweigh their
/// ancestors, so this bounds every partner a graph can meet.
struct PartnerBound {
    top: HashMap<CombinedLabel, [(Weight, Option<GraphId>); 2]>,
}

impl PartnerBound {
    fn new<'a>(graphs: impl Iterator<Item = &'a LabeledGraph>) -> PartnerBound {
        let mut top: HashMap<CombinedLabel, [(Weight, Option<GraphId>); 2]> = HashMap::new();
        for g in graphs {
            for (label, mass) in best_masses(g) {
                let slot = top.entry(label).or_insert([(Weight::ZERO, None); 2]);
                if mass > slot[0].0 {
                    slot[1] = slot[0];
                    slot[0] = (mass, Some(g.id()));
                } else if mass > slot[1].0 {
                    slot[1] = (mass, Some(g.id()));
                }
            }
        }
        PartnerBound { top }
    }

    /// Upper bound on `ub(g, h)` over all live `h` other than `g`.
    fn bound(&self, g: &LabeledGraph, is_input: bool) -> Weight {
        let mut best = Weight::ZERO;
        for masses in component_masses(g) {
            let mut total = Weight::ZERO;
            for (label, mass) in masses {
                if let Some(slot) = self.top.get(&label) {
                    let partner = if is_input && slot[0].1 == Some(g.id()) { slot[1].0 } else { slot[0].0 };
                    total += mass.min(partner);
                }
            }
            best = best.max(total);
        }
        best
    }
}

/// Per component, the summed `edge + src + dst` weight of each combined
/// label.
fn component_masses(g: &LabeledGraph) -> Vec<BTreeMap<CombinedLabel, Weight>> {
    weakly_connected_components(g)
        .iter()
        .map(|c| {
            let mut masses: BTreeMap<CombinedLabel, Weight> = BTreeMap::new();
            for &eid in &c.edge_ids {
                let e = g.edge(eid).expect("component edge");
                let mass = e.weight + g.node(e.src).expect("src").weight + g.node(e.dst).expect("dst").weight;
                *masses.entry(g.combined_label(e)).or_insert(Weight::ZERO) += mass;
            }
            masses
        })
        .collect()
}

/// Per combined label, the largest mass any single component of `g` holds.
fn best_masses(g: &LabeledGraph) -> BTreeMap<CombinedLabel, Weight> {
    let mut out: BTreeMap<CombinedLabel, Weight> = BTreeMap::new();
    for masses in component_masses(g) {
        for (label, mass) in masses {
            let slot = out.entry(label).or_insert(Weight::ZERO);
            *slot = (*slot).max(mass);
        }
    }
    out
}

struct Miner<'c> {
    cfg: &'c MinerConfig,
    graphs: HashMap<GraphId, Pattern>,
    profiles: HashMap<GraphId, GraphProfile>,
    inputs: BTreeSet<GraphId>,
    eligible: Vec<GraphId>,
    active: BTreeSet<GraphId>,
    /// Live graphs outside `active` at the end (lazy miner's inactive set).
    live_extra: BTreeSet<GraphId>,
    queue: BinaryHeap<CandidateEntry>,
    index: Option<InvertedIndex>,
    results: Vec<GraphId>,
    next_id: GraphId,
    stats: MiningStats,
    exhausted: bool,
}

impl<'c> Miner<'c> {
    fn new(graphs: &[Pattern], cfg: &'c MinerConfig, next_id: GraphId) -> Miner<'c> {
        let mut profiles = HashMap::new();
        let mut map = HashMap::new();
        let mut eligible = Vec::new();
        for p in graphs {
            let profile = GraphProfile::new(&p.graph);
            if profile.weight() >= cfg.beta {
                eligible.push(p.id());
            }
            profiles.insert(p.id(), profile);
            map.insert(p.id(), p.clone());
        }
        eligible.sort();
        let index = cfg.index_delta.map(|delta| InvertedIndex::build(eligible.iter().map(|g| &map[g].graph), delta));
        Miner {
            cfg,
            inputs: map.keys().copied().collect(),
            graphs: map,
            profiles,
            eligible,
            active: BTreeSet::new(),
            live_extra: BTreeSet::new(),
            queue: BinaryHeap::new(),
            index,
            results: Vec::new(),
            next_id,
            stats: MiningStats::default(),
            exhausted: false,
        }
    }

    fn expired(&mut self) -> bool {
        if self.cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Queues `g` against each of `partners` (other than itself) that the
    /// index allows, skipping pairs that cannot reach `beta`.
    fn push_pairs(&mut self, g: GraphId, partners: &BTreeSet<GraphId>) {
        let allowed: Option<BTreeSet<GraphId>> = self.index.as_ref().map(|idx| idx.candidate_pairs(g));
        let profile = &self.profiles[&g];
        for &h in partners {
            if h == g || allowed.as_ref().is_some_and(|a| !a.contains(&h)) {
                continue;
            }
            let other = &self.profiles[&h];
            let ub = profile.ub(other);
            self.stats.pairs_evaluated += 1;
            if ub >= self.cfg.beta {
                self.queue.push(CandidateEntry::new(ub, profile.edge_count_ub(other), g, h));
            }
        }
    }

    fn activate(&mut self, lazy: &mut LazySets, g: GraphId) {
        lazy.remove(g);
        self.stats.activations += 1;
        let partners = lazy.ids();
        self.push_pairs(g, &partners);
        self.active.insert(g);
    }

    /// Extracts the pair's common pattern. Returns the new pattern's id when
    /// it reaches `beta`; its parents are then retired.
    fn process(&mut self, top: CandidateEntry) -> Option<GraphId> {
        let mut budget = self.cfg.mcs_budget;
        if let Some(deadline) = self.cfg.deadline {
            let left = deadline.saturating_duration_since(Instant::now()).as_millis().max(1) as u64;
            budget.wall_ms = if budget.wall_ms == 0 { left } else { budget.wall_ms.min(left) };
        }
        let x = extract_mcs_with(&self.graphs[&top.lo], &self.graphs[&top.hi], self.next_id, budget, self.cfg.preprocess);
        self.stats.extractions += 1;
        if x.optimal {
            self.stats.optimal_extractions += 1;
        }
        let pattern = x.pattern.filter(|p| p.weight() >= self.cfg.beta);
        if pattern.is_none() {
            if !x.optimal {
                self.stats.timeouts += 1;
                self.active.remove(&top.lo);
                self.active.remove(&top.hi);
            }
            return None;
        }
        let p = pattern.expect("checked");
        let id = p.id();
        self.next_id = GraphId(id.0 + 1);
        self.active.remove(&top.lo);
        self.active.remove(&top.hi);
        self.stats.first_pattern_at.get_or_insert_with(Instant::now);
        if let Some(index) = &mut self.index {
            index.insert(&p.graph);
        }
        self.profiles.insert(id, GraphProfile::new(&p.graph));
        self.graphs.insert(id, p);
        self.results.push(id);
        Some(id)
    }

    fn finish(mut self) -> MiningOutcome {
        let live: BTreeSet<GraphId> = self.active.union(&self.live_extra).copied().collect();
        let roots = self.results.iter().copied().filter(|g| live.contains(g)).collect();
        let patterns = self.results.iter().map(|g| self.graphs.remove(g).expect("recorded pattern")).collect();
        MiningOutcome { patterns, roots, live, stats: self.stats, budget_exhausted: self.exhausted, next_id: self.next_id }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flow(id: u32, labels: &[&str], edges: &[(u32, u32, &str)]) -> Pattern {
        Pattern::from_flow(LabeledGraph::from_labels(GraphId(id), labels, edges).unwrap())
    }

    fn chain_flow(id: u32, labels: &[&str]) -> Pattern {
        let edges: Vec<(u32, u32, &str)> = (1..labels.len() as u32).map(|i| (i - 1, i, "C")).collect();
        flow(id, labels, &edges)
    }

    fn cfg() -> MinerConfig {
        MinerConfig { mcs_budget: Budget::UNLIMITED, ..MinerConfig::default() }
    }

    #[test]
    fn two_identical_flows() {
        let graphs = vec![chain_flow(0, &["a", "b", "c"]), chain_flow(1, &["a", "b", "c"])];
        for alg in [Algorithm::Greedy, Algorithm::Lazy] {
            let out = mine(&graphs, alg, &cfg(), GraphId(2));
            assert_eq!(out.patterns.len(), 1);
            let p = &out.patterns[0];
            assert_eq!(p.weight(), Weight::from_units(5));
            assert_eq!(p.flows().count(), 2);
            assert_eq!(out.roots, BTreeSet::from([GraphId(2)]));
        }
    }

    #[test]
    fn light_flows_are_ignored() {
        let graphs = vec![chain_flow(0, &["a", "b"]), chain_flow(1, &["a", "b"])];
        for alg in [Algorithm::Greedy, Algorithm::Lazy] {
            let out = mine(&graphs, alg, &cfg(), GraphId(2));
            assert!(out.patterns.is_empty());
            assert_eq!(out.stats.pairs_evaluated, 0);
        }
    }

    #[test]
    fn single_eligible_graph_enqueues_nothing() {
        let graphs = vec![chain_flow(0, &["a", "b", "c"])];
        let out = lazy_mine(&graphs, &cfg(), GraphId(1));
        assert!(out.patterns.is_empty());
        assert_eq!(out.stats.pairs_evaluated, 0);
    }

    #[test]
    fn shared_chain_across_three_flows() {
        let graphs = vec![
            chain_flow(0, &["p", "a", "b", "c", "q"]),
            chain_flow(1, &["r", "a", "b", "c"]),
            chain_flow(2, &["a", "b", "c", "s", "t"]),
        ];
        for alg in [Algorithm::Greedy, Algorithm::Lazy] {
            let out = mine(&graphs, alg, &cfg(), GraphId(3));
            assert_eq!(out.patterns.len(), 2, "{alg:?}");
            let last = out.patterns.last().unwrap();
            assert_eq!(last.flows().count(), 3);
            assert_eq!(last.parents.len(), 2);
            assert!(last.parents.contains(&out.patterns[0].id()));
            assert_eq!(out.roots, BTreeSet::from([last.id()]));
        }
    }

    #[test]
    fn activation_prefers_heavy_then_small_id() {
        let light = chain_flow(0, &["a", "b", "c"]);
        let heavy = chain_flow(1, &["a", "b", "c", "d", "e"]);
        let twin = chain_flow(2, &["a", "b", "c", "d", "e"]);
        assert_eq!(activation_order([&light]), Some(GraphId(0)));
        assert_eq!(activation_order([&light, &heavy]), Some(GraphId(1)));
        assert_eq!(activation_order([&twin, &heavy]), Some(GraphId(1)));
    }

    #[test]
    fn pair_coverage_without_patterns() {
        let graphs: Vec<Pattern> = (0..6)
            .map(|i| {
                let labels: Vec<String> = (0..3).map(|j| format!("g{i}n{j}")).collect();
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                chain_flow(i, &refs)
            })
            .collect();
        let out = lazy_mine(&graphs, &cfg(), GraphId(6));
        assert_eq!(out.stats.pairs_evaluated, 15);
        let out = greedy_mine(&graphs, &cfg(), GraphId(6));
        assert_eq!(out.stats.pairs_evaluated, 15);
    }

    #[test]
    fn partner_bound_dominates_every_pair_bound() {
        let graphs = vec![
            chain_flow(0, &["a", "b", "c", "a", "b"]),
            chain_flow(1, &["a", "b", "x"]),
            chain_flow(2, &["b", "c", "a", "b", "c"]),
        ];
        let bounds = PartnerBound::new(graphs.iter().map(|p| &p.graph));
        for g in &graphs {
            let b = bounds.bound(&g.graph, true);
            for h in graphs.iter().filter(|h| h.id() != g.id()) {
                assert!(b >= crate::graph::ub(&g.graph, &h.graph));
            }
        }
    }
}
