//! Brute-force reference implementations and random instance generators
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use flowdup::graph::{refactor_weight, Edge, EdgeId, GraphId, Label, LabeledGraph, Node, NodeId};
use flowdup::sat::{Clause, CnfFormula, Lit, Model, Var};
use flowdup::weight::Weight;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const NODE_LABELS: [&str; 3] = ["a", "b", "c"];
pub const EDGE_LABELS: [&str; 2] = ["C", "D"];

/// Random unit-weight graph with `n` nodes drawn from the first
/// `node_labels` labels, each ordered node pair joined with probability
/// `density`.
pub fn random_graph(rng: &mut ChaCha8Rng, id: u32, n: usize, node_labels: usize, density: f64) -> LabeledGraph {
    let labels: Vec<&str> = (0..n).map(|_| NODE_LABELS[rng.gen_range(0..node_labels)]).collect();
    let mut edges = Vec::new();
    for s in 0..n as u32 {
        for d in 0..n as u32 {
            if s != d && rng.gen_bool(density) {
                edges.push((s, d, EDGE_LABELS[rng.gen_range(0..EDGE_LABELS.len())]));
            }
        }
    }
    LabeledGraph::from_labels(GraphId(id), &labels, &edges).unwrap()
}

/// The same graph with node ids permuted and elements re-ordered.
pub fn shuffled(rng: &mut ChaCha8Rng, g: &LabeledGraph, id: u32) -> LabeledGraph {
    let mut perm: Vec<u32> = (0..g.node_count() as u32).collect();
    perm.shuffle(rng);
    let old: Vec<NodeId> = g.nodes().iter().map(|n| n.id).collect();
    let rename: BTreeMap<NodeId, NodeId> = old.iter().zip(&perm).map(|(&o, &p)| (o, NodeId(p))).collect();
    let nodes = g.nodes().iter().map(|n| Node { id: rename[&n.id], ..n.clone() }).collect();
    let mut edges: Vec<Edge> = g.edges().iter().map(|e| Edge { src: rename[&e.src], dst: rename[&e.dst], ..e.clone() }).collect();
    edges.shuffle(rng);
    let edges = edges.into_iter().enumerate().map(|(i, e)| Edge { id: EdgeId(i as u32), ..e }).collect();
    LabeledGraph::new(GraphId(id), nodes, edges).unwrap()
}

/// A non-isomorphic graph with the same node labels and combined-label
/// multiset as `g`, when a single edge rewiring finds one.
pub fn same_key_variant(rng: &mut ChaCha8Rng, g: &LabeledGraph, id: u32) -> Option<LabeledGraph> {
    let edges = g.edges();
    for _ in 0..50 {
        if edges.len() < 2 {
            return None;
        }
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        let (a, b) = (&edges[i], &edges[j]);
        if i == j || a.label != b.label || g.label(a.dst) != g.label(b.dst) || a.dst == b.dst {
            continue;
        }
        // swap the targets of two edges whose targets share a label
        if a.src == b.dst || b.src == a.dst {
            continue;
        }
        if g.edge_between(a.src, b.dst).is_some() || g.edge_between(b.src, a.dst).is_some() {
            continue;
        }
        let mut new_edges = edges.to_vec();
        new_edges[i].dst = b.dst;
        new_edges[j].dst = a.dst;
        let h = LabeledGraph::new(GraphId(id), g.nodes().to_vec(), new_edges).unwrap();
        if !isomorphic_brute(g, &h) {
            return Some(h);
        }
    }
    None
}

/// Best common sub-graph found by exhaustive search over partial injective
/// label-preserving node mappings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteMcs {
    /// Maximum number of common edges.
    pub edges: usize,
    /// Largest refactor weight among the maximum-edge common sub-graphs,
    /// with matched elements weighted by the lighter side.
    pub weight: Weight,
}

pub fn brute_mcs(g1: &LabeledGraph, g2: &LabeledGraph) -> BruteMcs {
    let n2: Vec<&Node> = g2.nodes().iter().collect();
    let mut best = BruteMcs { edges: 0, weight: Weight::ZERO };
    let mut assign: Vec<Option<NodeId>> = vec![None; n2.len()];
    let mut used = BTreeSet::new();
    search(g1, g2, &n2, 0, &mut assign, &mut used, &mut best);
    best
}

fn search(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    n2: &[&Node],
    at: usize,
    assign: &mut Vec<Option<NodeId>>,
    used: &mut BTreeSet<NodeId>,
    best: &mut BruteMcs,
) {
    if at == n2.len() {
        let (edges, weight) = score(g1, g2, n2, assign);
        if edges > best.edges || (edges == best.edges && weight > best.weight) {
            *best = BruteMcs { edges, weight };
        }
        return;
    }
    assign[at] = None;
    search(g1, g2, n2, at + 1, assign, used, best);
    for v in g1.nodes() {
        if v.label == n2[at].label && !used.contains(&v.id) {
            used.insert(v.id);
            assign[at] = Some(v.id);
            search(g1, g2, n2, at + 1, assign, used, best);
            used.remove(&v.id);
        }
    }
    assign[at] = None;
}

/// Matched edges of a mapping and the refactor weight of the common graph
/// they span (isolated mapped nodes dropped).
fn score(g1: &LabeledGraph, g2: &LabeledGraph, n2: &[&Node], assign: &[Option<NodeId>]) -> (usize, Weight) {
    let image: BTreeMap<NodeId, NodeId> =
        n2.iter().zip(assign).filter_map(|(w, v)| v.map(|v| (w.id, v))).collect();
    let mut edges = Vec::new();
    let mut touched = BTreeSet::new();
    for e2 in g2.edges() {
        let (Some(&s), Some(&d)) = (image.get(&e2.src), image.get(&e2.dst)) else { continue };
        if let Some(e1) = g1.edge_between(s, d) {
            if e1.label == e2.label {
                touched.insert(e2.src);
                touched.insert(e2.dst);
                edges.push(Edge {
                    id: EdgeId(edges.len() as u32),
                    src: e2.src,
                    dst: e2.dst,
                    label: e2.label.clone(),
                    weight: e1.weight.min(e2.weight),
                });
            }
        }
    }
    let nodes = touched
        .iter()
        .map(|&w| {
            let n = g2.node(w).unwrap();
            Node { id: w, label: n.label.clone(), weight: n.weight.min(g1.node(image[&w]).unwrap().weight) }
        })
        .collect();
    let count = edges.len();
    let common = LabeledGraph::new(GraphId(0), nodes, edges).unwrap();
    (count, refactor_weight(&common))
}

/// Isomorphism by trying every label-preserving bijection.
pub fn isomorphic_brute(g1: &LabeledGraph, g2: &LabeledGraph) -> bool {
    if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let n2: Vec<&Node> = g2.nodes().iter().collect();
    let mut assign = vec![NodeId(0); n2.len()];
    let mut used = BTreeSet::new();
    bijection(g1, g2, &n2, 0, &mut assign, &mut used)
}

fn bijection(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    n2: &[&Node],
    at: usize,
    assign: &mut Vec<NodeId>,
    used: &mut BTreeSet<NodeId>,
) -> bool {
    if at == n2.len() {
        let image: BTreeMap<NodeId, NodeId> = n2.iter().zip(assign.iter()).map(|(w, &v)| (w.id, v)).collect();
        return g2.edges().iter().all(|e| {
            g1.edge_between(image[&e.src], image[&e.dst]).is_some_and(|e1| e1.label == e.label)
        });
    }
    for v in g1.nodes() {
        if v.label == n2[at].label && !used.contains(&v.id) {
            used.insert(v.id);
            assign[at] = v.id;
            let found = bijection(g1, g2, n2, at + 1, assign, used);
            used.remove(&v.id);
            if found {
                return true;
            }
        }
    }
    false
}

/// Random CNF with clauses of 1 to 3 literals over `1..=vars`.
pub fn random_clauses(rng: &mut ChaCha8Rng, vars: u32, count: usize) -> Vec<Clause> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).map(|_| Var::new(rng.gen_range(1..=vars)).lit(rng.gen_bool(0.5))).collect()
        })
        .collect()
}

/// Fewest soft clauses violated by any model of the hard clauses, or `None`
/// when the hard clauses are unsatisfiable.
pub fn brute_maxsat(vars: u32, hard: &CnfFormula, soft: &[Clause]) -> Option<usize> {
    (0u32..1 << vars)
        .filter_map(|bits| {
            let model = Model::new((0..vars).map(|i| bits >> i & 1 == 1).collect());
            hard.is_satisfied_by(&model).then(|| soft.iter().filter(|c| !model.satisfies(c)).count())
        })
        .min()
}

pub fn lits(dimacs: &[i32]) -> Clause {
    dimacs.iter().map(|&d| Lit::from_dimacs(d)).collect()
}

/// A parsed DOT digraph: node attributes by id, edges with attributes.
#[derive(Debug, Default)]
pub struct DotGraph {
    pub name: String,
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Sym(char),
    Arrow,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => out.push(Tok::Sym(c)),
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                out.push(Tok::Arrow);
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some('n') => s.push('\n'),
                            Some(e) => s.push(e),
                            None => return Err("dangling escape".into()),
                        },
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err("unterminated string".into()),
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric() || n == '_' || n == '.' {
                        s.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

/// Parses the subset of the DOT grammar used by digraphs with node, edge
/// and default-attribute statements.
pub fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let toks = tokenize(text)?;
    let mut i = 0;
    let next = |i: &mut usize| -> Result<Tok, String> {
        let t = toks.get(*i).cloned().ok_or("unexpected end of input")?;
        *i += 1;
        Ok(t)
    };
    let expect_id = |t: Tok| match t {
        Tok::Id(s) => Ok(s),
        other => Err(format!("expected identifier, got {other:?}")),
    };
    if next(&mut i)? != Tok::Id("digraph".into()) {
        return Err("expected digraph".into());
    }
    let mut g = DotGraph { name: expect_id(next(&mut i)?)?, ..DotGraph::default() };
    if next(&mut i)? != Tok::Sym('{') {
        return Err("expected {".into());
    }
    loop {
        let head = next(&mut i)?;
        if head == Tok::Sym('}') {
            break;
        }
        let first = expect_id(head)?;
        let mut target = None;
        if toks.get(i) == Some(&Tok::Arrow) {
            i += 1;
            target = Some(expect_id(next(&mut i)?)?);
        }
        let mut attrs = BTreeMap::new();
        if toks.get(i) == Some(&Tok::Sym('[')) {
            i += 1;
            loop {
                let t = next(&mut i)?;
                if t == Tok::Sym(']') {
                    break;
                }
                if t == Tok::Sym(',') {
                    continue;
                }
                let key = expect_id(t)?;
                if next(&mut i)? != Tok::Sym('=') {
                    return Err(format!("expected = after {key}"));
                }
                attrs.insert(key, expect_id(next(&mut i)?)?);
            }
        }
        if next(&mut i)? != Tok::Sym(';') {
            return Err("expected ;".into());
        }
        match target {
            Some(dst) => g.edges.push((first, dst, attrs)),
            None if first == "node" || first == "edge" || first == "graph" => {}
            None => {
                g.nodes.insert(first, attrs);
            }
        }
    }
    if i != toks.len() {
        return Err("trailing input".into());
    }
    Ok(g)
}

pub fn label(s: &str) -> Label {
    Label::new(s)
}
