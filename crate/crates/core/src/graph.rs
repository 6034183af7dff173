//! Labeled directed graphs, combined labels, weakly connected components and
//! the refactor-weight bounds used to prioritise graph pairs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// Identifies a graph within a corpus: an ingested flow or a mined pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for GraphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

/// Opaque label token. Equality is exact text equality; ordering is
/// lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(text: &str) -> Label {
        Label(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Label {
        Label::new(s)
    }
}

impl From<String> for Label {
    fn from(s: String) -> Label {
        Label(Arc::from(s))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `(source label, edge label, destination label)` of an edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CombinedLabel {
    pub src: Label,
    pub edge: Label,
    pub dst: Label,
}

impl fmt::Display for CombinedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.src, self.edge, self.dst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: Label,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub label: Label,
    pub weight: Weight,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} references missing node {node}")]
    MissingEndpoint { edge: EdgeId, node: NodeId },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edges {0} and {1} are parallel")]
    ParallelEdge(EdgeId, EdgeId),
}

/// Directed graph with labeled, weighted nodes and edges.
///
/// Nodes and edges are kept sorted by id. Ids need not be dense: graphs
/// derived by removing elements keep the ids of the originals so that
/// mappings back into source graphs remain valid.
#[derive(Clone)]
pub struct LabeledGraph {
    id: GraphId,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_pos: HashMap<NodeId, usize>,
    edge_at: HashMap<(NodeId, NodeId), usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledGraph")
            .field("id", &self.id)
            .field("nodes", &self.nodes)
            .field("edges", &self.edges)
            .finish()
    }
}

impl LabeledGraph {
    pub fn new(id: GraphId, mut nodes: Vec<Node>, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        nodes.sort_by_key(|n| n.id);
        edges.sort_by_key(|e| e.id);
        let mut node_pos = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_pos.insert(n.id, i).is_some() {
                return Err(GraphError::DuplicateNode(n.id));
            }
        }
        let mut edge_at: HashMap<(NodeId, NodeId), usize> = HashMap::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            if i > 0 && edges[i - 1].id == e.id {
                return Err(GraphError::DuplicateEdge(e.id));
            }
            let s = *node_pos
                .get(&e.src)
                .ok_or(GraphError::MissingEndpoint { edge: e.id, node: e.src })?;
            let d = *node_pos
                .get(&e.dst)
                .ok_or(GraphError::MissingEndpoint { edge: e.id, node: e.dst })?;
            if e.src == e.dst {
                return Err(GraphError::SelfLoop(e.id));
            }
            if let Some(&j) = edge_at.get(&(e.src, e.dst)) {
                let first: &Edge = &edges[j];
                return Err(GraphError::ParallelEdge(first.id, e.id));
            }
            edge_at.insert((e.src, e.dst), i);
            out_edges[s].push(i);
            in_edges[d].push(i);
        }
        Ok(LabeledGraph { id, nodes, edges, node_pos, edge_at, out_edges, in_edges })
    }

    /// Unit-weight graph with dense ids: node `i` gets label `nodes[i]`,
    /// edge `j` is `edges[j]`.
    pub fn from_labels(id: GraphId, nodes: &[&str], edges: &[(u32, u32, &str)]) -> Result<Self, GraphError> {
        let nodes = nodes
            .iter()
            .enumerate()
            .map(|(i, l)| Node { id: NodeId(i as u32), label: Label::new(l), weight: Weight::ONE })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(j, &(s, d, l))| Edge {
                id: EdgeId(j as u32),
                src: NodeId(s),
                dst: NodeId(d),
                label: Label::new(l),
                weight: Weight::ONE,
            })
            .collect();
        LabeledGraph::new(id, nodes, edges)
    }

    pub fn empty(id: GraphId) -> LabeledGraph {
        LabeledGraph::new(id, Vec::new(), Vec::new()).expect("empty graph is valid")
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn with_id(mut self, id: GraphId) -> LabeledGraph {
        self.id = id;
        self
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.node_pos.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.node_pos.contains_key(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    /// The edge `src -> dst`, if present.
    pub fn edge_between(&self, src: NodeId, dst: NodeId) -> Option<&Edge> {
        self.edge_at.get(&(src, dst)).map(|&i| &self.edges[i])
    }

    pub fn label(&self, id: NodeId) -> &Label {
        &self.node(id).expect("node exists").label
    }

    pub fn out_edges(&self, id: NodeId) -> impl Iterator<Item = &Edge> {
        let pos = self.node_pos[&id];
        self.out_edges[pos].iter().map(move |&i| &self.edges[i])
    }

    pub fn in_edges(&self, id: NodeId) -> impl Iterator<Item = &Edge> {
        let pos = self.node_pos[&id];
        self.in_edges[pos].iter().map(move |&i| &self.edges[i])
    }

    /// Number of edges touching `id`, in either direction.
    pub fn degree(&self, id: NodeId) -> usize {
        let pos = self.node_pos[&id];
        self.out_edges[pos].len() + self.in_edges[pos].len()
    }

    pub fn combined_label(&self, edge: &Edge) -> CombinedLabel {
        CombinedLabel {
            src: self.label(edge.src).clone(),
            edge: edge.label.clone(),
            dst: self.label(edge.dst).clone(),
        }
    }

    /// Combined label of every edge, in edge order.
    pub fn combined_labels(&self) -> Vec<CombinedLabel> {
        self.edges.iter().map(|e| self.combined_label(e)).collect()
    }

    /// Per combined label, the number of edges carrying it.
    pub fn combined_label_counts(&self) -> BTreeMap<CombinedLabel, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.edges {
            *counts.entry(self.combined_label(e)).or_insert(0) += 1;
        }
        counts
    }

    /// Number of nodes carrying `label`.
    pub fn nodes_with_label(&self, label: &Label) -> usize {
        self.nodes.iter().filter(|n| &n.label == label).count()
    }

    /// Sub-graph keeping only the listed nodes and edges. Edges whose
    /// endpoints are dropped are dropped too.
    pub fn restrict(&self, keep_node: impl Fn(&Node) -> bool, keep_edge: impl Fn(&Edge) -> bool) -> LabeledGraph {
        let nodes: Vec<Node> = self.nodes.iter().filter(|n| keep_node(n)).cloned().collect();
        let kept: std::collections::HashSet<NodeId> = nodes.iter().map(|n| n.id).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| kept.contains(&e.src) && kept.contains(&e.dst) && keep_edge(e))
            .cloned()
            .collect();
        LabeledGraph::new(self.id, nodes, edges).expect("restriction of a valid graph is valid")
    }

    /// Nodes with no incident edges.
    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| self.degree(n.id) == 0).map(|n| n.id).collect()
    }

    pub fn total_weight(&self) -> Weight {
        self.nodes.iter().map(|n| n.weight).sum::<Weight>() + self.edges.iter().map(|e| e.weight).sum::<Weight>()
    }
}

/// A maximal weakly connected sub-graph, as sorted id lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub node_ids: Vec<NodeId>,
    pub edge_ids: Vec<EdgeId>,
}

/// Weakly connected components, ordered by their smallest node id.
pub fn weakly_connected_components(g: &LabeledGraph) -> Vec<Component> {
    let n = g.nodes.len();
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Component> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        comp_of[start] = c;
        stack.push(start);
        let mut node_ids = Vec::new();
        while let Some(i) = stack.pop() {
            node_ids.push(g.nodes[i].id);
            for &e in g.out_edges[i].iter().chain(&g.in_edges[i]) {
                let edge = &g.edges[e];
                for end in [edge.src, edge.dst] {
                    let j = g.node_pos[&end];
                    if comp_of[j] == usize::MAX {
                        comp_of[j] = c;
                        stack.push(j);
                    }
                }
            }
        }
        node_ids.sort();
        components.push(Component { node_ids, edge_ids: Vec::new() });
    }
    for e in &g.edges {
        components[comp_of[g.node_pos[&e.src]]].edge_ids.push(e.id);
    }
    components
}

/// Largest component weight (node plus edge weights); zero for an empty
/// graph.
pub fn refactor_weight(g: &LabeledGraph) -> Weight {
    weakly_connected_components(g)
        .iter()
        .map(|c| component_weight(g, c))
        .max()
        .unwrap_or(Weight::ZERO)
}

pub fn component_weight(g: &LabeledGraph, c: &Component) -> Weight {
    let nodes: Weight = c.node_ids.iter().map(|&v| g.node(v).expect("component node").weight).sum();
    let edges: Weight = c.edge_ids.iter().map(|&e| g.edge(e).expect("component edge").weight).sum();
    nodes + edges
}

/// Per combined label, the summed `edge + src + dst` weight of the
/// component's edges carrying it. Sorted by label.
fn label_masses(g: &LabeledGraph, c: &Component) -> Vec<(CombinedLabel, Weight)> {
    let mut by_label: BTreeMap<CombinedLabel, Weight> = BTreeMap::new();
    for &eid in &c.edge_ids {
        let e = g.edge(eid).expect("component edge");
        let mass = e.weight + g.node(e.src).expect("src").weight + g.node(e.dst).expect("dst").weight;
        *by_label.entry(g.combined_label(e)).or_insert(Weight::ZERO) += mass;
    }
    by_label.into_iter().collect()
}

fn merge_min<K: Ord, V: Copy + Ord>(a: &[(K, V)], b: &[(K, V)], mut f: impl FnMut(V)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                f(a[i].1.min(b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
}

fn sum_min_mass(a: &[(CombinedLabel, Weight)], b: &[(CombinedLabel, Weight)]) -> Weight {
    let mut total = Weight::ZERO;
    merge_min(a, b, |w| total += w);
    total
}

/// Upper bound on the refactor weight of a common sub-graph lying in `c1`
/// and `c2`: for each shared combined label, the lighter side's summed
/// `edge + src + dst` weight.
pub fn comp_ub(g1: &LabeledGraph, c1: &Component, g2: &LabeledGraph, c2: &Component) -> Weight {
    sum_min_mass(&label_masses(g1, c1), &label_masses(g2, c2))
}

/// Maximum of [`comp_ub`] over all component pairs.
pub fn ub(g1: &LabeledGraph, g2: &LabeledGraph) -> Weight {
    GraphProfile::new(g1).ub(&GraphProfile::new(g2))
}

/// Upper bound on the edge count of a common sub-graph; used to break ties
/// between equal [`ub`] values.
pub fn edge_count_ub(g1: &LabeledGraph, g2: &LabeledGraph) -> usize {
    GraphProfile::new(g1).edge_count_ub(&GraphProfile::new(g2))
}

/// Precomputed label statistics of one graph, so that pair bounds can be
/// evaluated without revisiting the graph.
#[derive(Debug, Clone)]
pub struct GraphProfile {
    components: Vec<Vec<(CombinedLabel, Weight)>>,
    label_counts: Vec<(CombinedLabel, usize)>,
    weight: Weight,
    cap: Weight,
}

impl GraphProfile {
    pub fn new(g: &LabeledGraph) -> GraphProfile {
        let comps = weakly_connected_components(g);
        let weight = comps.iter().map(|c| component_weight(g, c)).max().unwrap_or(Weight::ZERO);
        let components: Vec<Vec<(CombinedLabel, Weight)>> = comps
            .iter()
            .filter(|c| !c.edge_ids.is_empty())
            .map(|c| label_masses(g, c))
            .collect();
        let cap = components
            .iter()
            .map(|m| m.iter().map(|(_, w)| *w).sum::<Weight>())
            .max()
            .unwrap_or(Weight::ZERO);
        GraphProfile { components, label_counts: g.combined_label_counts().into_iter().collect(), weight, cap }
    }

    /// Refactor weight of the profiled graph.
    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// Largest `ub` this graph can reach against any partner: no component
    /// pair can share more mass than one component holds.
    pub fn cap(&self) -> Weight {
        self.cap
    }

    pub fn ub(&self, other: &GraphProfile) -> Weight {
        let mut best = Weight::ZERO;
        for a in &self.components {
            for b in &other.components {
                best = best.max(sum_min_mass(a, b));
            }
        }
        best
    }

    pub fn edge_count_ub(&self, other: &GraphProfile) -> usize {
        let mut total = 0;
        merge_min(&self.label_counts, &other.label_counts, |n| total += n);
        total
    }

    pub fn combined_labels(&self) -> impl Iterator<Item = &CombinedLabel> {
        self.label_counts.iter().map(|(l, _)| l)
    }
}
