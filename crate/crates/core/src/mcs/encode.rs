//! MaxSAT encoding of the maximum common sub-graph problem for a graph pair.
//!
//! Nodes of the second graph are mapped into nodes of the first (the
//! target). Mapping variables exist only for label-compatible node pairs, so
//! label consistency holds by construction.

use std::collections::BTreeMap;

use crate::graph::{EdgeId, LabeledGraph, NodeId};
use crate::sat::{at_most_one, Clause, CnfFormula, Var};

/// Variables of an encoding, keyed by the graph elements they describe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarMaps {
    /// `o_v`: target node `v` is part of the common sub-graph.
    pub inclusion: BTreeMap<NodeId, Var>,
    /// `f_{v,v'}`: node `v'` of the second graph is mapped to target node `v`.
    pub mapping: BTreeMap<(NodeId, NodeId), Var>,
    /// `c_e`: target edge `e` is part of the common sub-graph.
    pub control_flow: BTreeMap<EdgeId, Var>,
}

impl VarMaps {
    /// Mapping variables of target node `v`, in ascending `v'` order.
    pub fn images(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Var)> + '_ {
        self.mapping.range((v, NodeId(0))..=(v, NodeId(u32::MAX))).map(|(&(_, w), &x)| (w, x))
    }
}

#[derive(Debug, Clone)]
pub struct McsInstance {
    pub hard: CnfFormula,
    pub soft: Vec<Clause>,
    pub vars: VarMaps,
}

/// Builds the hard formula and unit soft clauses for mapping `g2` into `g1`.
pub fn encode_mcs(g1: &LabeledGraph, g2: &LabeledGraph) -> McsInstance {
    build(g1, g2, true)
}

fn build(g1: &LabeledGraph, g2: &LabeledGraph, forbid_isolates: bool) -> McsInstance {
    let mut hard = CnfFormula::new();
    let mut vars = VarMaps::default();

    for v in g1.nodes() {
        vars.inclusion.insert(v.id, hard.new_var());
    }
    for v in g1.nodes() {
        for w in g2.nodes() {
            if v.label == w.label {
                vars.mapping.insert((v.id, w.id), hard.new_var());
            }
        }
    }
    for e in g1.edges() {
        vars.control_flow.insert(e.id, hard.new_var());
    }

    // inclusion: o_v <-> OR_v' f_{v,v'}
    for v in g1.nodes() {
        let o = vars.inclusion[&v.id];
        let images: Vec<Var> = vars.images(v.id).map(|(_, f)| f).collect();
        let mut clause = vec![o.negative()];
        clause.extend(images.iter().map(|f| f.positive()));
        hard.add_clause(clause);
        for f in &images {
            hard.add_clause([o.positive(), f.negative()]);
        }
    }

    // one-to-one: at most one image per target node
    for v in g1.nodes() {
        let lits: Vec<_> = vars.images(v.id).map(|(_, f)| f.positive()).collect();
        hard.extend(at_most_one(&lits));
    }

    // function property: each second-graph node maps to at most one target
    let mut preimages: BTreeMap<NodeId, Vec<_>> = BTreeMap::new();
    for (&(_, w), f) in &vars.mapping {
        preimages.entry(w).or_default().push(f.positive());
    }
    for lits in preimages.values() {
        hard.extend(at_most_one(lits));
    }

    // control-flow consistency
    for e in g1.edges() {
        let c = vars.control_flow[&e.id];
        for (u2, fu) in vars.images(e.src) {
            for (v2, fv) in vars.images(e.dst) {
                if u2 == v2 {
                    continue;
                }
                let matched = g2.edge_between(u2, v2).is_some_and(|e2| e2.label == e.label);
                if !matched {
                    hard.add_clause([fu.negative(), fv.negative(), c.negative()]);
                }
            }
        }
    }

    // no spurious edges
    for e in g1.edges() {
        let c = vars.control_flow[&e.id];
        hard.add_clause([c.negative(), vars.inclusion[&e.src].positive()]);
        hard.add_clause([c.negative(), vars.inclusion[&e.dst].positive()]);
    }

    // no isolate nodes
    for v in g1.nodes().iter().filter(|_| forbid_isolates) {
        let mut clause = vec![vars.inclusion[&v.id].negative()];
        clause.extend(g1.out_edges(v.id).chain(g1.in_edges(v.id)).map(|e| vars.control_flow[&e.id].positive()));
        hard.add_clause(clause);
    }

    let soft = g1.edges().iter().map(|e| vec![vars.control_flow[&e.id].positive()]).collect();
    McsInstance { hard, soft, vars }
}

/// Decision variant: satisfiable iff `g2` maps bijectively onto `g1`
/// preserving node labels, edges and edge labels.
///
/// The no-isolate clauses of [`encode_mcs`] are not required here and are
/// dropped so that graphs with isolated nodes can still be matched.
pub fn encode_iso(g1: &LabeledGraph, g2: &LabeledGraph) -> (CnfFormula, VarMaps) {
    let McsInstance { hard: mut iso, vars, .. } = build(g1, g2, false);

    for o in vars.inclusion.values() {
        iso.add_clause([o.positive()]);
    }
    for c in vars.control_flow.values() {
        iso.add_clause([c.positive()]);
    }
    for w in g2.nodes() {
        let clause: Vec<_> =
            g1.nodes().iter().filter_map(|v| vars.mapping.get(&(v.id, w.id))).map(|f| f.positive()).collect();
        iso.add_clause(clause);
    }
    // every second-graph edge must land on an equally labeled target edge
    for e2 in g2.edges() {
        for v in g1.nodes() {
            let Some(fu) = vars.mapping.get(&(v.id, e2.src)) else { continue };
            for w in g1.nodes() {
                if v.id == w.id {
                    continue;
                }
                let Some(fv) = vars.mapping.get(&(w.id, e2.dst)) else { continue };
                let matched = g1.edge_between(v.id, w.id).is_some_and(|e1| e1.label == e2.label);
                if !matched {
                    iso.add_clause([fu.negative(), fv.negative()]);
                }
            }
        }
    }
    (iso, vars)
}
