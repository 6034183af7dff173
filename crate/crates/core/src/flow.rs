//! Corpus ingestion: the JSON corpus format, logic-flow structural
//! validation, label derivation and removal of Start/End nodes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, EdgeId, GraphError, GraphId, Label, LabeledGraph, Node, NodeId};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlowNodeKind {
    Start,
    End,
    Instruction,
    ForEach,
    If,
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlowEdgeKind {
    Connector,
    True,
    False,
    Cycle,
    Condition,
    Otherwise,
}

impl FlowNodeKind {
    pub fn name(self) -> &'static str {
        match self {
            FlowNodeKind::Start => "Start",
            FlowNodeKind::End => "End",
            FlowNodeKind::Instruction => "Instruction",
            FlowNodeKind::ForEach => "ForEach",
            FlowNodeKind::If => "If",
            FlowNodeKind::Switch => "Switch",
        }
    }

    pub fn parse(s: &str) -> Option<FlowNodeKind> {
        Some(match s {
            "Start" => FlowNodeKind::Start,
            "End" => FlowNodeKind::End,
            "Instruction" => FlowNodeKind::Instruction,
            "ForEach" => FlowNodeKind::ForEach,
            "If" => FlowNodeKind::If,
            "Switch" => FlowNodeKind::Switch,
            _ => return None,
        })
    }
}

impl FlowEdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            FlowEdgeKind::Connector => "Connector",
            FlowEdgeKind::True => "True",
            FlowEdgeKind::False => "False",
            FlowEdgeKind::Cycle => "Cycle",
            FlowEdgeKind::Condition => "Condition",
            FlowEdgeKind::Otherwise => "Otherwise",
        }
    }

    pub fn parse(s: &str) -> Option<FlowEdgeKind> {
        Some(match s {
            "Connector" => FlowEdgeKind::Connector,
            "True" => FlowEdgeKind::True,
            "False" => FlowEdgeKind::False,
            "Cycle" => FlowEdgeKind::Cycle,
            "Condition" => FlowEdgeKind::Condition,
            "Otherwise" => FlowEdgeKind::Otherwise,
            _ => return None,
        })
    }
}

/// How a corpus is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusMode {
    /// Logic flows: closed node/edge kinds, structural validation.
    #[default]
    Flow,
    /// Arbitrary labeled graphs; kinds are free text and nothing is validated
    /// beyond graph well-formedness.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub id: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attrs: Option<BTreeMap<String, serde_json::Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub src: String,
    pub dst: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFlow {
    pub id: String,
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<RawNode>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    #[serde(default)]
    pub mode: CorpusMode,
    pub flows: Vec<RawFlow>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed corpus at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("duplicate flow id {0:?}")]
    DuplicateFlow(String),
    #[error("flow {flow:?}: duplicate node id {node:?}")]
    DuplicateNode { flow: String, node: String },
    #[error("flow {flow:?}: edge #{index} ({src:?} -> {dst:?}) references missing node {missing:?}")]
    MissingNode { flow: String, index: usize, src: String, dst: String, missing: String },
    #[error("flow {flow:?}: unknown node kind {kind:?} on node {node:?}")]
    UnknownNodeKind { flow: String, node: String, kind: String },
    #[error("flow {flow:?}: unknown edge kind {kind:?} on edge #{index}")]
    UnknownEdgeKind { flow: String, index: usize, kind: String },
    #[error("flow {flow:?}: node {node:?} has invalid weight {weight}")]
    InvalidWeight { flow: String, node: String, weight: f64 },
    #[error("flow {flow:?}: {source}")]
    Graph { flow: String, source: GraphError },
    #[error("flow {flow:?} violates {} structural rule(s): {}", violations.len(), join(violations))]
    Invalid { flow: String, violations: Vec<Violation> },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Parses a corpus strictly: unknown fields are rejected, and in flow mode so
/// are unknown node/edge kinds. Flow ids must be unique and edges must
/// reference declared nodes.
pub fn parse_corpus(input: &[u8]) -> Result<Corpus, IngestError> {
    let corpus: Corpus = serde_json::from_slice(input).map_err(|e| IngestError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = HashSet::new();
    for flow in &corpus.flows {
        if !seen.insert(flow.id.as_str()) {
            return Err(IngestError::DuplicateFlow(flow.id.clone()));
        }
        check_references(flow)?;
        if corpus.mode == CorpusMode::Flow {
            for n in &flow.nodes {
                if FlowNodeKind::parse(&n.kind).is_none() {
                    return Err(IngestError::UnknownNodeKind {
                        flow: flow.id.clone(),
                        node: n.id.clone(),
                        kind: n.kind.clone(),
                    });
                }
            }
            for (index, e) in flow.edges.iter().enumerate() {
                if FlowEdgeKind::parse(&e.kind).is_none() {
                    return Err(IngestError::UnknownEdgeKind { flow: flow.id.clone(), index, kind: e.kind.clone() });
                }
            }
        }
    }
    Ok(corpus)
}

fn check_references(flow: &RawFlow) -> Result<(), IngestError> {
    let mut ids = HashSet::new();
    for n in &flow.nodes {
        if !ids.insert(n.id.as_str()) {
            return Err(IngestError::DuplicateNode { flow: flow.id.clone(), node: n.id.clone() });
        }
    }
    for (index, e) in flow.edges.iter().enumerate() {
        for end in [&e.src, &e.dst] {
            if !ids.contains(end.as_str()) {
                return Err(IngestError::MissingNode {
                    flow: flow.id.clone(),
                    index,
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    missing: end.clone(),
                });
            }
        }
    }
    Ok(())
}

/// One broken structural rule of a logic flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    NotWeaklyConnected,
    SelfLoop { edge: usize },
    ParallelEdge { edge: usize },
    StartCount { found: usize },
    StartHasIncoming { node: String },
    EndHasBranch { node: String },
    EndWithoutIncoming { node: String },
    BranchCount { node: String, kind: FlowNodeKind, branch: FlowEdgeKind, found: usize },
    UnexpectedBranch { node: String, kind: FlowNodeKind, branch: FlowEdgeKind },
    CycleWithoutPathBack { node: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "flow has no nodes"),
            Violation::NotWeaklyConnected => write!(f, "flow is not weakly connected"),
            Violation::SelfLoop { edge } => write!(f, "edge #{edge} is a self-loop"),
            Violation::ParallelEdge { edge } => write!(f, "edge #{edge} is parallel to an earlier edge"),
            Violation::StartCount { found } => write!(f, "only one Start node allowed, found {found}"),
            Violation::StartHasIncoming { node } => write!(f, "Start node {node:?} has incoming edges"),
            Violation::EndHasBranch { node } => write!(f, "End node {node:?} has outgoing branches"),
            Violation::EndWithoutIncoming { node } => write!(f, "End node {node:?} has no incoming edge"),
            Violation::BranchCount { node, kind, branch, found } => write!(
                f,
                "{} node {node:?} has {found} {} branch(es)",
                kind.name(),
                branch.name()
            ),
            Violation::UnexpectedBranch { node, kind, branch } => {
                write!(f, "{} node {node:?} cannot have a {} branch", kind.name(), branch.name())
            }
            Violation::CycleWithoutPathBack { node } => {
                write!(f, "ForEach node {node:?} has no path back to itself through its Cycle branch")
            }
        }
    }
}

/// Checks the structural rules of a logic flow. Kinds that fail to parse are
/// reported by [`parse_corpus`]; here they are skipped.
pub fn validate_flow(f: &RawFlow) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    if f.nodes.is_empty() {
        return Err(vec![Violation::Empty]);
    }
    let index: HashMap<&str, usize> = f.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    let kinds: Vec<Option<FlowNodeKind>> = f.nodes.iter().map(|n| FlowNodeKind::parse(&n.kind)).collect();
    let n = f.nodes.len();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut in_deg = vec![0usize; n];
    let mut pairs = HashSet::new();
    for (i, e) in f.edges.iter().enumerate() {
        let (Some(&s), Some(&d)) = (index.get(e.src.as_str()), index.get(e.dst.as_str())) else {
            continue;
        };
        if s == d {
            violations.push(Violation::SelfLoop { edge: i });
        }
        if !pairs.insert((s, d)) {
            violations.push(Violation::ParallelEdge { edge: i });
        }
        out[s].push((d, i));
        in_deg[d] += 1;
    }

    // weak connectivity
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, succ) in out.iter().enumerate() {
        for &(d, _) in succ {
            undirected[s].push(d);
            undirected[d].push(s);
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &undirected[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        violations.push(Violation::NotWeaklyConnected);
    }

    let starts: Vec<usize> = (0..n).filter(|&i| kinds[i] == Some(FlowNodeKind::Start)).collect();
    if starts.len() != 1 {
        violations.push(Violation::StartCount { found: starts.len() });
    }

    for u in 0..n {
        let Some(kind) = kinds[u] else { continue };
        let node = &f.nodes[u].id;
        let branch_kinds: Vec<Option<FlowEdgeKind>> =
            out[u].iter().map(|&(_, e)| FlowEdgeKind::parse(&f.edges[e].kind)).collect();
        let count = |k: FlowEdgeKind| branch_kinds.iter().filter(|b| **b == Some(k)).count();
        let allowed: &[FlowEdgeKind] = match kind {
            FlowNodeKind::Start | FlowNodeKind::Instruction => &[FlowEdgeKind::Connector],
            FlowNodeKind::End => &[],
            FlowNodeKind::If => &[FlowEdgeKind::True, FlowEdgeKind::False],
            FlowNodeKind::ForEach => &[FlowEdgeKind::Connector, FlowEdgeKind::Cycle],
            FlowNodeKind::Switch => &[FlowEdgeKind::Condition, FlowEdgeKind::Otherwise],
        };
        let mut reported = HashSet::new();
        for b in branch_kinds.iter().flatten() {
            if !allowed.contains(b) && reported.insert(*b) {
                violations.push(Violation::UnexpectedBranch { node: node.clone(), kind, branch: *b });
            }
        }
        let mut exactly_one = |b: FlowEdgeKind| {
            let found = count(b);
            if found != 1 {
                violations.push(Violation::BranchCount { node: node.clone(), kind, branch: b, found });
            }
        };
        match kind {
            FlowNodeKind::Start => {
                exactly_one(FlowEdgeKind::Connector);
                if in_deg[u] > 0 {
                    violations.push(Violation::StartHasIncoming { node: node.clone() });
                }
            }
            FlowNodeKind::Instruction => exactly_one(FlowEdgeKind::Connector),
            FlowNodeKind::End => {
                if !out[u].is_empty() {
                    violations.push(Violation::EndHasBranch { node: node.clone() });
                }
                if in_deg[u] == 0 {
                    violations.push(Violation::EndWithoutIncoming { node: node.clone() });
                }
            }
            FlowNodeKind::If => {
                exactly_one(FlowEdgeKind::True);
                exactly_one(FlowEdgeKind::False);
            }
            FlowNodeKind::ForEach => {
                exactly_one(FlowEdgeKind::Connector);
                exactly_one(FlowEdgeKind::Cycle);
                let cycles: Vec<usize> = out[u]
                    .iter()
                    .filter(|&&(_, e)| FlowEdgeKind::parse(&f.edges[e].kind) == Some(FlowEdgeKind::Cycle))
                    .map(|&(d, _)| d)
                    .collect();
                if cycles.len() == 1 && !reaches(&out, cycles[0], u) {
                    violations.push(Violation::CycleWithoutPathBack { node: node.clone() });
                }
            }
            FlowNodeKind::Switch => {
                exactly_one(FlowEdgeKind::Otherwise);
                let found = count(FlowEdgeKind::Condition);
                if found == 0 {
                    violations.push(Violation::BranchCount {
                        node: node.clone(),
                        kind,
                        branch: FlowEdgeKind::Condition,
                        found,
                    });
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn reaches(out: &[Vec<(usize, usize)>], from: usize, target: usize) -> bool {
    let mut seen = vec![false; out.len()];
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        if u == target {
            return true;
        }
        if std::mem::replace(&mut seen[u], true) {
            continue;
        }
        stack.extend(out[u].iter().map(|&(d, _)| d));
    }
    false
}

/// Attribute keys whose counts make up the weight of a database access.
pub const DB_WEIGHT_ATTRS: [&str; 3] = ["tables", "filters", "sorts"];

fn attr_weight(attrs: &BTreeMap<String, serde_json::Value>) -> Option<f64> {
    let mut found = false;
    let mut total = 0.0;
    for key in DB_WEIGHT_ATTRS {
        if let Some(v) = attrs.get(key).and_then(|v| v.as_f64()) {
            found = true;
            total += v;
        }
    }
    found.then_some(total)
}

/// Builds the labeled graph of a flow. Node `i` and edge `j` in file order
/// get ids `i` and `j`.
///
/// Labels default to the kind name. Condition branches get their evaluation
/// order appended (`Condition#2`). Node weight is the explicit `weight`,
/// else the sum of the `tables`/`filters`/`sorts` attributes, else 1.
pub fn derive_labels(f: &RawFlow, id: GraphId) -> Result<LabeledGraph, IngestError> {
    let index: HashMap<&str, u32> = f.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i as u32)).collect();
    let mut nodes = Vec::with_capacity(f.nodes.len());
    for (i, n) in f.nodes.iter().enumerate() {
        let label = n.label.clone().unwrap_or_else(|| n.kind.clone());
        let raw = n.weight.or_else(|| n.attrs.as_ref().and_then(attr_weight)).unwrap_or(1.0);
        let weight = Weight::from_f64(raw).ok_or_else(|| IngestError::InvalidWeight {
            flow: f.id.clone(),
            node: n.id.clone(),
            weight: raw,
        })?;
        nodes.push(Node { id: NodeId(i as u32), label: Label::from(label), weight });
    }
    let mut edges = Vec::with_capacity(f.edges.len());
    for (j, e) in f.edges.iter().enumerate() {
        let lookup = |end: &String| {
            index.get(end.as_str()).copied().ok_or_else(|| IngestError::MissingNode {
                flow: f.id.clone(),
                index: j,
                src: e.src.clone(),
                dst: e.dst.clone(),
                missing: end.clone(),
            })
        };
        let mut label = e.label.clone().unwrap_or_else(|| e.kind.clone());
        if e.kind == FlowEdgeKind::Condition.name() {
            if let Some(order) = e.order {
                label = format!("{label}#{order}");
            }
        }
        edges.push(Edge {
            id: EdgeId(j as u32),
            src: NodeId(lookup(&e.src)?),
            dst: NodeId(lookup(&e.dst)?),
            label: Label::from(label),
            weight: Weight::ONE,
        });
    }
    LabeledGraph::new(id, nodes, edges).map_err(|source| IngestError::Graph { flow: f.id.clone(), source })
}

pub fn is_boundary_label(label: &Label) -> bool {
    matches!(label.as_str(), "Start" | "End")
}

/// Labels of If/Switch nodes: the bare kind name, or the kind followed by
/// `:` and a qualifier.
pub fn is_branch_label(label: &Label) -> bool {
    let s = label.as_str();
    ["If", "Switch"].iter().any(|k| s.strip_prefix(k).is_some_and(|rest| rest.is_empty() || rest.starts_with(':')))
}

/// Drops Start/End-labeled nodes and their incident edges. Remaining ids are
/// unchanged.
pub fn strip_boundary_nodes(g: &LabeledGraph) -> LabeledGraph {
    g.restrict(|n| !is_boundary_label(&n.label), |_| true)
}

/// Validates (in flow mode) and labels every flow of a corpus. Flow `i`
/// becomes graph `i`.
pub fn ingest(corpus: &Corpus) -> Result<Vec<LabeledGraph>, IngestError> {
    corpus
        .flows
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if corpus.mode == CorpusMode::Flow {
                validate_flow(f).map_err(|violations| IngestError::Invalid { flow: f.id.clone(), violations })?;
            }
            derive_labels(f, GraphId(i as u32))
        })
        .collect()
}
