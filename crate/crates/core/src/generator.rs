//! Seeded synthetic corpora with a planted duplicated chain.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{Corpus, CorpusMode, RawEdge, RawFlow, RawNode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n_flows: usize,
    /// Nodes of the planted chain; its weight is `2 * pattern_size - 1`.
    pub pattern_size: usize,
    /// Flows receiving the planted chain.
    pub hosts: usize,
    /// Nodes of filler structure per flow, besides Start and End.
    pub padding: usize,
    /// Give every flow its own filler labels, so that the planted chain is
    /// the only structure flows share.
    pub disjoint: bool,
    /// Trailing flows that are verbatim copies of earlier flows without the
    /// planted chain.
    #[serde(default)]
    pub copies: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot plant into {hosts} hosts of a {n_flows}-flow corpus")]
    TooManyHosts { hosts: usize, n_flows: usize },
    #[error("a planted pattern needs at least 2 nodes, got {0}")]
    PatternTooSmall(usize),
    #[error("{copies} copies need at least one original flow without the planted chain")]
    NothingToCopy { copies: usize },
}

/// Where the planted chain landed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: GenSpec,
    pub pattern_labels: Vec<String>,
    pub pattern_weight: u64,
    pub hosts: Vec<PlantedHost>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedHost {
    pub flow: String,
    /// Flow node ids of the chain, in chain order.
    pub nodes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub corpus: Corpus,
    pub manifest: Manifest,
}

/// Filler labels of shared-alphabet corpora.
const SHARED_ALPHABET: [&str; 6] = ["Assign", "Query", "Log", "Call", "Format", "Validate"];

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    let originals = spec.n_flows.saturating_sub(spec.copies);
    if spec.hosts > originals {
        return Err(GenError::TooManyHosts { hosts: spec.hosts, n_flows: originals });
    }
    if spec.copies > 0 && originals == spec.hosts {
        return Err(GenError::NothingToCopy { copies: spec.copies });
    }
    if spec.hosts > 0 && spec.pattern_size < 2 {
        return Err(GenError::PatternTooSmall(spec.pattern_size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pattern_labels: Vec<String> = (0..spec.pattern_size).map(|k| format!("P{k}")).collect();
    let hosts: BTreeSet<usize> = sample(&mut rng, originals, spec.hosts).into_iter().collect();
    let mut flows = Vec::with_capacity(spec.n_flows);
    let mut planted = Vec::new();
    for i in 0..originals {
        let mut b = FlowBuilder::new(format!("flow{i:04}"), spec.disjoint.then_some(i));
        let plant = hosts.contains(&i).then(|| rng.gen_range(0..=spec.padding));
        let mut emitted = 0;
        let mut chain_nodes = None;
        while emitted < spec.padding || (plant.is_some() && chain_nodes.is_none()) {
            if chain_nodes.is_none() && plant.is_some_and(|p| emitted >= p) {
                chain_nodes = Some(b.chain(&pattern_labels));
                continue;
            }
            emitted += b.block(&mut rng, spec.padding - emitted);
        }
        if let Some(nodes) = chain_nodes {
            planted.push(PlantedHost { flow: b.flow.id.clone(), nodes });
        }
        flows.push(b.finish());
    }
    let plain: Vec<usize> = (0..originals).filter(|i| !hosts.contains(i)).collect();
    for i in originals..spec.n_flows {
        let mut copy = flows[plain[rng.gen_range(0..plain.len())]].clone();
        copy.id = format!("flow{i:04}");
        copy.name = copy.id.clone();
        flows.push(copy);
    }
    let manifest = Manifest {
        spec: spec.clone(),
        pattern_weight: if spec.hosts > 0 { 2 * spec.pattern_size as u64 - 1 } else { 0 },
        pattern_labels,
        hosts: planted,
    };
    Ok(Generated { corpus: Corpus { mode: CorpusMode::Flow, flows }, manifest })
}

struct FlowBuilder {
    flow: RawFlow,
    /// Node every next block hangs off with a Connector.
    exit: String,
    owner: Option<usize>,
    fresh: usize,
}

impl FlowBuilder {
    fn new(id: String, owner: Option<usize>) -> FlowBuilder {
        let mut flow = RawFlow { id, name: String::new(), nodes: Vec::new(), edges: Vec::new() };
        flow.name = flow.id.clone();
        let mut b = FlowBuilder { flow, exit: String::new(), owner, fresh: 0 };
        b.exit = b.node("Start", "Start".into());
        b
    }

    fn node(&mut self, kind: &str, label: String) -> String {
        let id = format!("n{}", self.flow.nodes.len());
        self.flow.nodes.push(RawNode { id: id.clone(), kind: kind.into(), label: Some(label), weight: None, attrs: None });
        id
    }

    fn edge(&mut self, src: &str, dst: &str, kind: &str, order: Option<i64>) {
        self.flow.edges.push(RawEdge { src: src.into(), dst: dst.into(), kind: kind.into(), label: None, order });
    }

    /// Label of a filler node of the given kind.
    fn label(&mut self, rng: &mut ChaCha8Rng, kind: &str) -> String {
        match self.owner {
            Some(flow) => {
                self.fresh += 1;
                format!("{kind}:f{flow}_{}", self.fresh)
            }
            None if kind == "Instruction" => SHARED_ALPHABET[rng.gen_range(0..SHARED_ALPHABET.len())].to_string(),
            None => kind.to_string(),
        }
    }

    fn filler(&mut self, rng: &mut ChaCha8Rng, kind: &str) -> String {
        let label = self.label(rng, kind);
        self.node(kind, label)
    }

    fn attach(&mut self, entry: &str, exit: String) {
        let from = std::mem::replace(&mut self.exit, exit);
        self.edge(&from, entry, "Connector", None);
    }

    fn chain(&mut self, labels: &[String]) -> Vec<String> {
        let ids: Vec<String> = labels.iter().map(|l| self.node("Instruction", l.clone())).collect();
        for w in ids.windows(2) {
            self.edge(&w[0], &w[1], "Connector", None);
        }
        self.attach(&ids[0].clone(), ids[ids.len() - 1].clone());
        ids
    }

    /// Appends a random filler block of at most `room` nodes (at least one)
    /// and returns its size.
    fn block(&mut self, rng: &mut ChaCha8Rng, room: usize) -> usize {
        let choice = rng.gen_range(0..6);
        match choice {
            3 if room >= 4 => {
                let cond = self.filler(rng, "If");
                let yes = self.filler(rng, "Instruction");
                let no = self.filler(rng, "Instruction");
                let join = self.filler(rng, "Instruction");
                self.edge(&cond, &yes, "True", None);
                self.edge(&cond, &no, "False", None);
                self.edge(&yes, &join, "Connector", None);
                self.edge(&no, &join, "Connector", None);
                self.attach(&cond.clone(), join);
                4
            }
            4 if room >= 3 => {
                let head = self.filler(rng, "ForEach");
                let body = rng.gen_range(1..=(room - 1).min(3));
                let ids: Vec<String> = (0..body).map(|_| self.filler(rng, "Instruction")).collect();
                self.edge(&head, &ids[0], "Cycle", None);
                for w in ids.windows(2) {
                    self.edge(&w[0], &w[1], "Connector", None);
                }
                self.edge(&ids[body - 1], &head, "Connector", None);
                self.attach(&head.clone(), head);
                body + 1
            }
            5 if room >= 5 => {
                let switch = self.filler(rng, "Switch");
                let arms: Vec<String> = (0..3).map(|_| self.filler(rng, "Instruction")).collect();
                let join = self.filler(rng, "Instruction");
                self.edge(&switch, &arms[0], "Condition", Some(1));
                self.edge(&switch, &arms[1], "Condition", Some(2));
                self.edge(&switch, &arms[2], "Otherwise", None);
                for arm in &arms {
                    self.edge(arm, &join, "Connector", None);
                }
                self.attach(&switch.clone(), join);
                5
            }
            _ => {
                let id = self.filler(rng, "Instruction");
                self.attach(&id.clone(), id);
                1
            }
        }
    }

    fn finish(mut self) -> RawFlow {
        let end = self.node("End", "End".into());
        let exit = self.exit.clone();
        self.edge(&exit, &end, "Connector", None);
        self.flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::validate_flow;

    fn spec(n_flows: usize, hosts: usize, disjoint: bool, seed: u64) -> GenSpec {
        GenSpec { n_flows, pattern_size: 4, hosts, padding: 12, disjoint, copies: 0, seed }
    }

    #[test]
    fn flows_validate() {
        for seed in 0..20 {
            for disjoint in [true, false] {
                let g = generate(&spec(10, 3, disjoint, seed)).unwrap();
                for f in &g.corpus.flows {
                    assert_eq!(validate_flow(f), Ok(()), "seed {seed}: {f:?}");
                    assert_eq!(f.nodes.len(), 2 + 12 + if g.manifest.hosts.iter().any(|h| h.flow == f.id) { 4 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn manifest_lists_hosts() {
        let g = generate(&spec(10, 3, true, 7)).unwrap();
        assert_eq!(g.manifest.hosts.len(), 3);
        assert_eq!(g.manifest.pattern_weight, 7);
        for h in &g.manifest.hosts {
            let f = g.corpus.flows.iter().find(|f| f.id == h.flow).unwrap();
            let labels: Vec<&str> = h
                .nodes
                .iter()
                .map(|id| f.nodes.iter().find(|n| &n.id == id).unwrap().label.as_deref().unwrap())
                .collect();
            assert_eq!(labels, ["P0", "P1", "P2", "P3"]);
        }
    }

    #[test]
    fn seeded_output_repeats() {
        let a = serde_json::to_string(&generate(&spec(20, 5, false, 3)).unwrap().corpus).unwrap();
        let b = serde_json::to_string(&generate(&spec(20, 5, false, 3)).unwrap().corpus).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn copies_repeat_plain_flows() {
        let g = generate(&GenSpec { copies: 4, ..spec(10, 3, true, 5) }).unwrap();
        assert_eq!(g.corpus.flows.len(), 10);
        let hosts: Vec<&str> = g.manifest.hosts.iter().map(|h| h.flow.as_str()).collect();
        for copy in &g.corpus.flows[6..] {
            let original = g.corpus.flows[..6].iter().find(|f| f.nodes == copy.nodes && f.edges == copy.edges).unwrap();
            assert!(!hosts.contains(&original.id.as_str()));
        }
    }

    #[test]
    fn empty_and_impossible_specs() {
        assert!(generate(&spec(0, 0, true, 1)).unwrap().corpus.flows.is_empty());
        assert_eq!(generate(&spec(2, 3, true, 1)), Err(GenError::TooManyHosts { hosts: 3, n_flows: 2 }));
    }
}
