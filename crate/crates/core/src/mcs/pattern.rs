//! Patterns, their occurrences in original flows, and model decoding.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::flow::is_branch_label;
use crate::graph::{refactor_weight, Edge, EdgeId, GraphId, LabeledGraph, Node, NodeId};
use crate::sat::Model;
use crate::weight::Weight;

use super::encode::VarMaps;

/// Pattern node to host node.
pub type Occurrence = BTreeMap<NodeId, NodeId>;

/// Host flow to embedding.
pub type Occurrences = BTreeMap<GraphId, Occurrence>;

/// A graph together with its embeddings into original flows.
///
/// An original flow is a pattern occurring once, in itself, with no
/// parents. Patterns produced by merging graphs list the merged graph ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub graph: LabeledGraph,
    pub occurrences: Occurrences,
    pub parents: Vec<GraphId>,
}

impl Pattern {
    pub fn from_flow(graph: LabeledGraph) -> Pattern {
        let identity = graph.nodes().iter().map(|n| (n.id, n.id)).collect();
        let occurrences = BTreeMap::from([(graph.id(), identity)]);
        Pattern { graph, occurrences, parents: Vec::new() }
    }

    pub fn id(&self) -> GraphId {
        self.graph.id()
    }

    pub fn with_id(mut self, id: GraphId) -> Pattern {
        self.graph = self.graph.with_id(id);
        self
    }

    pub fn weight(&self) -> Weight {
        refactor_weight(&self.graph)
    }

    pub fn flows(&self) -> impl Iterator<Item = GraphId> + '_ {
        self.occurrences.keys().copied()
    }
}

/// A common sub-graph of a pair with its embedding into each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonSubgraph {
    pub graph: LabeledGraph,
    pub into_first: Occurrence,
    pub into_second: Occurrence,
}

impl CommonSubgraph {
    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }
}

/// Checks that `map` embeds `pattern` into `host`: injective, node labels
/// preserved, and every pattern edge lands on a host edge with the same label.
pub fn check_embedding(pattern: &LabeledGraph, host: &LabeledGraph, map: &Occurrence) -> Result<(), String> {
    let mut used = BTreeSet::new();
    for n in pattern.nodes() {
        let h = *map.get(&n.id).ok_or_else(|| format!("pattern node {} unmapped", n.id))?;
        let hn = host.node(h).ok_or_else(|| format!("pattern node {} maps to missing {}", n.id, h))?;
        if hn.label != n.label {
            return Err(format!("node {} labeled {} maps to {} labeled {}", n.id, n.label, h, hn.label));
        }
        if !used.insert(h) {
            return Err(format!("host node {h} used twice"));
        }
    }
    if map.len() != pattern.node_count() {
        return Err("mapping covers nodes outside the pattern".into());
    }
    for e in pattern.edges() {
        let he = host
            .edge_between(map[&e.src], map[&e.dst])
            .ok_or_else(|| format!("pattern edge {} has no host edge", e.id))?;
        if he.label != e.label {
            return Err(format!("pattern edge {} labeled {} maps to {}", e.id, e.label, he.label));
        }
    }
    Ok(())
}

/// Reads a common sub-graph off a model of an encoding of `g2` into `g1`.
///
/// Pattern nodes are the included target nodes, renumbered in ascending
/// order; pattern edges are the selected target edges. Weights are the
/// smaller of the two matched elements' weights.
pub fn decode(model: &Model, vars: &VarMaps, g1: &LabeledGraph, g2: &LabeledGraph) -> CommonSubgraph {
    let mut fresh: HashMap<NodeId, NodeId> = HashMap::new();
    let mut nodes = Vec::new();
    let mut into_first = Occurrence::new();
    let mut into_second = Occurrence::new();
    for v in g1.nodes() {
        if !model.value(vars.inclusion[&v.id]) {
            continue;
        }
        let mut images = vars.images(v.id).filter(|&(_, f)| model.value(f)).map(|(w, _)| w);
        let w = images.next().expect("included node has an image");
        assert!(images.next().is_none(), "node {} has several images", v.id);
        let p = NodeId(nodes.len() as u32);
        fresh.insert(v.id, p);
        let other = g2.node(w).expect("image exists");
        nodes.push(Node { id: p, label: v.label.clone(), weight: v.weight.min(other.weight) });
        into_first.insert(p, v.id);
        into_second.insert(p, w);
    }
    let mut edges = Vec::new();
    for e in g1.edges() {
        if !model.value(vars.control_flow[&e.id]) {
            continue;
        }
        let (ps, pd) = (fresh[&e.src], fresh[&e.dst]);
        let other = g2.edge_between(into_second[&ps], into_second[&pd]).expect("selected edge has a counterpart");
        assert_eq!(other.label, e.label, "selected edge label mismatch");
        edges.push(Edge {
            id: EdgeId(edges.len() as u32),
            src: ps,
            dst: pd,
            label: e.label.clone(),
            weight: e.weight.min(other.weight),
        });
    }
    let graph = LabeledGraph::new(g1.id(), nodes, edges).expect("decoded pattern is a valid graph");
    debug_assert_eq!(check_embedding(&graph, g1, &into_first), Ok(()));
    debug_assert_eq!(check_embedding(&graph, g2, &into_second), Ok(()));
    CommonSubgraph { graph, into_first, into_second }
}

/// Drops If/Switch nodes without an outgoing pattern edge, then any node
/// left isolated, until nothing changes. A branch node only belongs to a
/// pattern if at least one of its branches does.
pub fn post_process_branches(mut common: CommonSubgraph) -> CommonSubgraph {
    loop {
        let g = &common.graph;
        let dangling: BTreeSet<NodeId> = g
            .nodes()
            .iter()
            .filter(|n| is_branch_label(&n.label) && g.out_edges(n.id).next().is_none())
            .map(|n| n.id)
            .collect();
        if dangling.is_empty() {
            return common;
        }
        let pruned = g.restrict(|n| !dangling.contains(&n.id), |_| true);
        let isolated: BTreeSet<NodeId> = pruned.isolated_nodes().into_iter().collect();
        let graph = pruned.restrict(|n| !isolated.contains(&n.id), |_| true);
        common.into_first.retain(|p, _| graph.contains_node(*p));
        common.into_second.retain(|p, _| graph.contains_node(*p));
        common.graph = graph;
    }
}

/// Lifts a common sub-graph of two patterns to a pattern over original
/// flows by composing its embeddings with each parent's occurrences. Nodes
/// and edges are renumbered densely.
///
/// Panics if the parents share a flow or an embedding does not compose;
/// both indicate a bug upstream.
pub fn compose_occurrences(common: &CommonSubgraph, first: &Pattern, second: &Pattern, id: GraphId) -> Pattern {
    let renumber: BTreeMap<NodeId, NodeId> =
        common.graph.nodes().iter().enumerate().map(|(i, n)| (n.id, NodeId(i as u32))).collect();
    let nodes = common.graph.nodes().iter().map(|n| Node { id: renumber[&n.id], ..n.clone() }).collect();
    let edges = common
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(j, e)| Edge { id: EdgeId(j as u32), src: renumber[&e.src], dst: renumber[&e.dst], ..e.clone() })
        .collect();
    let graph = LabeledGraph::new(id, nodes, edges).expect("renumbered pattern is valid");

    let mut occurrences = Occurrences::new();
    for (into, parent) in [(&common.into_first, first), (&common.into_second, second)] {
        for (&flow, occ) in &parent.occurrences {
            let lifted: Occurrence = renumber
                .iter()
                .map(|(old, &new)| {
                    let mid = into[old];
                    (new, *occ.get(&mid).unwrap_or_else(|| panic!("{mid} of {} missing in flow {flow}", parent.id())))
                })
                .collect();
            assert!(occurrences.insert(flow, lifted).is_none(), "flow {flow} occurs in both parents");
        }
    }
    Pattern { graph, occurrences, parents: vec![first.id(), second.id()] }
}
