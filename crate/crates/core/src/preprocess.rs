//! Pairwise graph simplification ahead of MCS encoding.
//!
//! Three removal rules, each of which preserves the size of a maximum common
//! sub-graph of the pair:
//!
//! 1. edges whose combined label does not occur on the other side;
//! 2. orphan edges (endpoints touch no other edge) in excess of the other
//!    side's edge count for that combined label;
//! 3. heads/tails of simple-path components in excess of the other side's
//!    node count for the head/tail label.
//!
//! [`simplify_pair`] applies them in that order, then drops isolated nodes,
//! and repeats until nothing changes.

use std::collections::{BTreeMap, HashSet};

use crate::graph::{weakly_connected_components, CombinedLabel, EdgeId, LabeledGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    SharedLabels,
    OrphanExcess,
    SimplePathHead,
    SimplePathTail,
    Isolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Removal {
    pub side: Side,
    pub element: Element,
    pub rule: Rule,
}

/// Working copies of a graph pair plus a log of every removed element.
#[derive(Debug, Clone)]
pub struct PairView {
    pub g1: LabeledGraph,
    pub g2: LabeledGraph,
    pub log: Vec<Removal>,
}

impl PairView {
    pub fn new(g1: &LabeledGraph, g2: &LabeledGraph) -> PairView {
        PairView { g1: g1.clone(), g2: g2.clone(), log: Vec::new() }
    }

    fn side(&self, side: Side) -> &LabeledGraph {
        match side {
            Side::First => &self.g1,
            Side::Second => &self.g2,
        }
    }

    fn other(&self, side: Side) -> &LabeledGraph {
        match side {
            Side::First => &self.g2,
            Side::Second => &self.g1,
        }
    }

    fn remove_edges(&mut self, side: Side, edges: &[EdgeId], rule: Rule) {
        if edges.is_empty() {
            return;
        }
        let drop: HashSet<EdgeId> = edges.iter().copied().collect();
        let g = self.side(side).restrict(|_| true, |e| !drop.contains(&e.id));
        self.log.extend(edges.iter().map(|&e| Removal { side, element: Element::Edge(e), rule }));
        self.set(side, g);
    }

    fn remove_nodes(&mut self, side: Side, nodes: &[NodeId], rule: Rule) {
        if nodes.is_empty() {
            return;
        }
        let drop: HashSet<NodeId> = nodes.iter().copied().collect();
        let dropped_edges: Vec<EdgeId> = self
            .side(side)
            .edges()
            .iter()
            .filter(|e| drop.contains(&e.src) || drop.contains(&e.dst))
            .map(|e| e.id)
            .collect();
        self.log.extend(dropped_edges.into_iter().map(|e| Removal { side, element: Element::Edge(e), rule }));
        let g = self.side(side).restrict(|n| !drop.contains(&n.id), |_| true);
        self.log.extend(nodes.iter().map(|&n| Removal { side, element: Element::Node(n), rule }));
        self.set(side, g);
    }

    fn set(&mut self, side: Side, g: LabeledGraph) {
        match side {
            Side::First => self.g1 = g,
            Side::Second => self.g2 = g,
        }
    }

    /// Rule 1: drop edges whose combined label is absent from the other side.
    pub fn rule_shared_labels(&mut self) -> bool {
        let mut changed = false;
        for side in [Side::First, Side::Second] {
            let other = self.other(side).combined_label_counts();
            let g = self.side(side);
            let drop: Vec<EdgeId> =
                g.edges().iter().filter(|e| !other.contains_key(&g.combined_label(e))).map(|e| e.id).collect();
            changed |= !drop.is_empty();
            self.remove_edges(side, &drop, Rule::SharedLabels);
        }
        changed
    }

    /// Rule 2: trim orphan edges of a combined label down to the other
    /// side's edge count for it, dropping the largest `(src, dst)` first.
    pub fn rule_orphan_excess(&mut self) -> bool {
        let mut changed = false;
        for side in [Side::First, Side::Second] {
            let other = self.other(side).combined_label_counts();
            let g = self.side(side);
            let mut orphans: BTreeMap<CombinedLabel, Vec<(NodeId, NodeId, EdgeId)>> = BTreeMap::new();
            for e in g.edges() {
                if g.degree(e.src) == 1 && g.degree(e.dst) == 1 {
                    orphans.entry(g.combined_label(e)).or_default().push((e.src, e.dst, e.id));
                }
            }
            let mut drop = Vec::new();
            for (label, mut list) in orphans {
                let limit = other.get(&label).copied().unwrap_or(0);
                if list.len() > limit {
                    list.sort();
                    drop.extend(list[limit..].iter().map(|&(_, _, e)| e));
                }
            }
            drop.sort();
            changed |= !drop.is_empty();
            self.remove_edges(side, &drop, Rule::OrphanExcess);
        }
        changed
    }

    /// Rule 3: for groups of identical simple-path components outnumbering
    /// the other side's nodes with the head (tail) label, drop the head
    /// (tail) of the excess members, largest head id first.
    pub fn rule_simple_paths(&mut self) -> bool {
        let mut changed = false;
        for side in [Side::First, Side::Second] {
            for rule in [Rule::SimplePathHead, Rule::SimplePathTail] {
                let drop = self.excess_path_ends(side, rule);
                changed |= !drop.is_empty();
                self.remove_nodes(side, &drop, rule);
            }
        }
        changed
    }

    fn excess_path_ends(&self, side: Side, rule: Rule) -> Vec<NodeId> {
        let g = self.side(side);
        let other = self.other(side);
        let mut groups: BTreeMap<Vec<CombinedLabel>, Vec<Vec<NodeId>>> = BTreeMap::new();
        for path in simple_paths(g) {
            let seq = path
                .windows(2)
                .map(|w| g.combined_label(g.edge_between(w[0], w[1]).expect("chain edge")))
                .collect();
            groups.entry(seq).or_default().push(path);
        }
        let mut drop = Vec::new();
        for (_, mut members) in groups {
            let end = |p: &Vec<NodeId>| match rule {
                Rule::SimplePathHead => p[0],
                _ => *p.last().expect("non-empty path"),
            };
            let available = other.nodes_with_label(g.label(end(&members[0])));
            if members.len() > available {
                members.sort_by_key(|p| std::cmp::Reverse(p[0]));
                drop.extend(members[..members.len() - available].iter().map(end));
            }
        }
        drop.sort();
        drop
    }

    pub fn remove_isolates(&mut self) -> bool {
        let mut changed = false;
        for side in [Side::First, Side::Second] {
            let drop = self.side(side).isolated_nodes();
            changed |= !drop.is_empty();
            self.remove_nodes(side, &drop, Rule::Isolate);
        }
        changed
    }

    /// Whether any of the three rules would remove something. Isolated nodes
    /// do not count.
    pub fn any_rule_applicable(&self) -> bool {
        let mut probe = self.clone();
        probe.rule_shared_labels() || probe.rule_orphan_excess() || probe.rule_simple_paths()
    }

    /// Applies the rules round-robin until a fixpoint.
    pub fn simplify(&mut self) {
        loop {
            let mut changed = self.rule_shared_labels();
            changed |= self.rule_orphan_excess();
            changed |= self.rule_simple_paths();
            changed |= self.remove_isolates();
            if !changed {
                break;
            }
        }
    }
}

/// Components that are a directed chain `v1 -> ... -> vn` (n >= 2) with no
/// other edges, as node sequences from head to tail.
pub fn simple_paths(g: &LabeledGraph) -> Vec<Vec<NodeId>> {
    let mut paths = Vec::new();
    for c in weakly_connected_components(g) {
        if c.node_ids.len() < 2 || c.edge_ids.len() + 1 != c.node_ids.len() {
            continue;
        }
        let chain_like = c
            .node_ids
            .iter()
            .all(|&v| g.out_edges(v).count() <= 1 && g.in_edges(v).count() <= 1);
        if !chain_like {
            continue;
        }
        let heads: Vec<NodeId> = c.node_ids.iter().copied().filter(|&v| g.in_edges(v).next().is_none()).collect();
        if heads.len() != 1 {
            continue;
        }
        let mut path = vec![heads[0]];
        while let Some(e) = g.out_edges(*path.last().unwrap()).next() {
            path.push(e.dst);
        }
        if path.len() == c.node_ids.len() {
            paths.push(path);
        }
    }
    paths
}

/// Simplified copies of a pair; the inputs are untouched.
pub fn simplify_pair(g1: &LabeledGraph, g2: &LabeledGraph) -> (LabeledGraph, LabeledGraph) {
    let mut view = PairView::new(g1, g2);
    view.simplify();
    (view.g1, view.g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphId;

    fn g(nodes: &[&str], edges: &[(u32, u32, &str)]) -> LabeledGraph {
        LabeledGraph::from_labels(GraphId(0), nodes, edges).unwrap()
    }

    #[test]
    fn identical_graphs_untouched() {
        let a = g(&["a", "b", "c"], &[(0, 1, "x"), (1, 2, "y")]);
        let mut v = PairView::new(&a, &a);
        assert!(!v.rule_shared_labels());
        assert!(!v.rule_orphan_excess());
        assert!(!v.rule_simple_paths());
        let (s1, s2) = simplify_pair(&a, &a);
        assert_eq!(s1, a);
        assert_eq!(s2, a);
    }

    #[test]
    fn disjoint_alphabets_become_edgeless() {
        let a = g(&["a", "b"], &[(0, 1, "x")]);
        let b = g(&["c", "d"], &[(0, 1, "x")]);
        let mut v = PairView::new(&a, &b);
        assert!(v.rule_shared_labels());
        assert_eq!(v.g1.edge_count(), 0);
        assert_eq!(v.g2.edge_count(), 0);
        let (s1, s2) = simplify_pair(&a, &b);
        assert!(s1.is_empty() && s2.is_empty());
    }

    #[test]
    fn orphan_excess_trimmed_to_other_side_count() {
        let a = g(&["a", "b", "a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l"), (4, 5, "l")]);
        let b = g(&["a", "b", "c"], &[(0, 1, "l"), (1, 2, "m")]);
        let mut v = PairView::new(&a, &b);
        assert!(v.rule_orphan_excess());
        assert_eq!(v.g1.edge_count(), 1);
        // smallest (src, dst) survives
        assert_eq!(v.g1.edges()[0].id, EdgeId(0));
        assert!(!v.rule_orphan_excess());
    }

    #[test]
    fn no_orphans_no_change() {
        let a = g(&["a", "b", "c"], &[(0, 1, "l"), (1, 2, "l")]);
        let b = g(&["a", "b"], &[(0, 1, "l")]);
        assert!(!PairView::new(&a, &b).rule_orphan_excess());
    }

    #[test]
    fn orphans_within_bound_untouched() {
        let a = g(&["a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l")]);
        let b = g(&["a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l")]);
        assert!(!PairView::new(&a, &b).rule_orphan_excess());
    }

    #[test]
    fn simple_path_heads_trimmed() {
        let a = g(&["a", "b", "a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l"), (4, 5, "l")]);
        let b = g(&["a", "b", "b", "b"], &[(0, 1, "l"), (2, 1, "m"), (3, 1, "m")]);
        let mut v = PairView::new(&a, &b);
        assert!(v.rule_simple_paths());
        let heads_removed: Vec<NodeId> = v
            .log
            .iter()
            .filter(|r| r.side == Side::First && r.rule == Rule::SimplePathHead)
            .filter_map(|r| match r.element {
                Element::Node(n) => Some(n),
                _ => None,
            })
            .collect();
        assert_eq!(heads_removed, vec![NodeId(2), NodeId(4)]);
        assert_eq!(v.g1.edge_count(), 1);
    }

    #[test]
    fn simple_path_tails_trimmed() {
        let a = g(&["a", "b", "a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l"), (4, 5, "l")]);
        let b = g(&["a", "a", "a", "b"], &[(0, 3, "l"), (1, 3, "m"), (2, 3, "m")]);
        let mut v = PairView::new(&a, &b);
        assert!(v.rule_simple_paths());
        let tails: Vec<Removal> =
            v.log.iter().copied().filter(|r| r.side == Side::First && r.rule == Rule::SimplePathTail).collect();
        assert_eq!(tails.iter().filter(|r| matches!(r.element, Element::Node(_))).count(), 2);
        assert_eq!(v.g1.edge_count(), 1);
    }

    #[test]
    fn simple_paths_within_bound_untouched() {
        let a = g(&["a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l")]);
        let b = g(&["a", "b", "a", "b"], &[(0, 1, "l"), (2, 3, "l")]);
        assert!(!PairView::new(&a, &b).rule_simple_paths());
    }

    #[test]
    fn simple_path_detection() {
        let chain = g(&["a", "b", "c"], &[(0, 1, "x"), (1, 2, "x")]);
        assert_eq!(simple_paths(&chain), vec![vec![NodeId(0), NodeId(1), NodeId(2)]]);
        let fork = g(&["a", "b", "c"], &[(0, 1, "x"), (0, 2, "x")]);
        assert!(simple_paths(&fork).is_empty());
        let cycle = g(&["a", "b", "c"], &[(0, 1, "x"), (1, 2, "x"), (2, 0, "x")]);
        assert!(simple_paths(&cycle).is_empty());
    }

    #[test]
    fn simplify_is_idempotent_on_example() {
        let a = g(&["a", "b", "c", "a", "b"], &[(0, 1, "x"), (1, 2, "y"), (3, 4, "x")]);
        let b = g(&["a", "b", "d"], &[(0, 1, "x"), (1, 2, "y")]);
        let (s1, s2) = simplify_pair(&a, &b);
        let (t1, t2) = simplify_pair(&s1, &s2);
        assert_eq!((s1, s2), (t1, t2));
    }

    #[test]
    fn caller_graphs_not_modified() {
        let a = g(&["a", "b"], &[(0, 1, "x")]);
        let b = g(&["c", "d"], &[(0, 1, "x")]);
        let before = (a.clone(), b.clone());
        let _ = simplify_pair(&a, &b);
        assert_eq!((a, b), before);
    }
}
