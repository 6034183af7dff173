//! Graphviz rendering of flows with a pattern occurrence highlighted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::flow::{RawFlow, RawNode};
use crate::report::ReportPattern;

pub const HIGHLIGHT: &str = "yellow";

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn node_label(n: &RawNode) -> &str {
    n.label.as_deref().unwrap_or(&n.kind)
}

/// The flow as a DOT digraph, with the nodes and edges of `pattern`'s
/// occurrence in it filled. Start/End nodes are drawn dashed.
pub fn occurrence_dot(flow: &RawFlow, pattern: &ReportPattern) -> String {
    let occ: BTreeMap<u32, &str> = pattern
        .occurrences
        .get(&flow.id)
        .map(|m| m.iter().filter_map(|(k, v)| Some((k.parse().ok()?, v.as_str()))).collect())
        .unwrap_or_default();
    let mapped: BTreeSet<&str> = occ.values().copied().collect();
    let mapped_edges: BTreeSet<(&str, &str)> =
        pattern.edges.iter().filter_map(|e| Some((*occ.get(&e.src)?, *occ.get(&e.dst)?))).collect();

    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&format!("{}#{}", flow.id, pattern.id))).unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for n in &flow.nodes {
        let mut attrs = vec![format!("label={}", quote(node_label(n)))];
        if n.kind == "Start" || n.kind == "End" {
            attrs.push("style=dashed".into());
        } else if mapped.contains(n.id.as_str()) {
            attrs.push("style=filled".into());
            attrs.push(format!("fillcolor={}", quote(HIGHLIGHT)));
        }
        writeln!(out, "  {} [{}];", quote(&n.id), attrs.join(", ")).unwrap();
    }
    for e in &flow.edges {
        let label = match (e.label.as_deref(), e.order) {
            (Some(l), _) => l.to_string(),
            (None, Some(o)) => format!("{}#{o}", e.kind),
            (None, None) => e.kind.clone(),
        };
        let mut attrs = vec![format!("label={}", quote(&label))];
        if mapped_edges.contains(&(e.src.as_str(), e.dst.as_str())) {
            attrs.push(format!("color={}", quote(HIGHLIGHT)));
            attrs.push("penwidth=3".into());
        }
        writeln!(out, "  {} -> {} [{}];", quote(&e.src), quote(&e.dst), attrs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}

/// File name for one occurrence, safe on any file system.
pub fn occurrence_file_name(pattern_id: u32, flow_id: &str) -> String {
    let safe: String = flow_id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    format!("pattern{pattern_id}_{safe}.dot")
}
