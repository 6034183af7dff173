//! Small hand-written corpora.

use crate::flow::{Corpus, CorpusMode, RawEdge, RawFlow, RawNode};

fn node(id: &str, kind: &str, label: &str) -> RawNode {
    RawNode { id: id.into(), kind: kind.into(), label: Some(label.into()), weight: None, attrs: None }
}

fn edge(src: &str, dst: &str, kind: &str) -> RawEdge {
    RawEdge { src: src.into(), dst: dst.into(), kind: kind.into(), label: None, order: None }
}

/// Normalizes a string: trim, lower-case, replace.
pub fn normalize_flow() -> RawFlow {
    RawFlow {
        id: "normalize".into(),
        name: "Normalize".into(),
        nodes: vec![
            node("start", "Start", "Start"),
            node("trim", "Instruction", "Trim"),
            node("lower", "Instruction", "ToLower"),
            node("replace", "Instruction", "Replace"),
            node("end", "End", "End"),
        ],
        edges: vec![
            edge("start", "trim", "Connector"),
            edge("trim", "lower", "Connector"),
            edge("lower", "replace", "Connector"),
            edge("replace", "end", "Connector"),
        ],
    }
}

/// Normalizes every string of a list, collecting the results.
pub fn normalize_list_flow() -> RawFlow {
    RawFlow {
        id: "normalize_list".into(),
        name: "NormalizeList".into(),
        nodes: vec![
            node("start", "Start", "Start"),
            node("loop", "ForEach", "ForEach"),
            node("trim", "Instruction", "Trim"),
            node("lower", "Instruction", "ToLower"),
            node("replace", "Instruction", "Replace"),
            node("append", "Instruction", "ListAppend"),
            node("end", "End", "End"),
        ],
        edges: vec![
            edge("start", "loop", "Connector"),
            edge("loop", "trim", "Cycle"),
            edge("trim", "lower", "Connector"),
            edge("lower", "replace", "Connector"),
            edge("replace", "append", "Connector"),
            edge("append", "loop", "Connector"),
            edge("loop", "end", "Connector"),
        ],
    }
}

/// The two normalization flows, sharing a Trim, ToLower, Replace chain.
pub fn running_example() -> Corpus {
    Corpus { mode: CorpusMode::Flow, flows: vec![normalize_flow(), normalize_list_flow()] }
}
