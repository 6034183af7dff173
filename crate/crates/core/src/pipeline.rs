//! End-to-end mining of a parsed corpus into a [`Report`].

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use crate::flow::{ingest, strip_boundary_nodes, Corpus, IngestError};
use crate::graph::{GraphId, LabeledGraph};
use crate::mcs::Pattern;
use crate::miner::{dedup, duplication_metrics, mine, MinerConfig, MiningOutcome};
use crate::report::{MiningConfig, ParentRef, Report, ReportEdge, ReportNode, ReportPattern, Timing};
use crate::sat::Budget;
use crate::weight::Weight;

/// Everything a mining run produced, before it is rendered as a report.
#[derive(Debug, Clone)]
pub struct MiningRun {
    /// Labeled flows, unstripped; flow `i` has graph id `i`.
    pub flows: Vec<LabeledGraph>,
    /// Graphs handed to the miner: stripped flows, after de-duplication when
    /// enabled.
    pub inputs: Vec<Pattern>,
    /// Reported patterns: heavy isomorphic groups, then mined patterns.
    pub patterns: Vec<Pattern>,
    pub roots: BTreeSet<GraphId>,
    pub outcome: MiningOutcome,
    pub mining_time: Duration,
    pub first_pattern_time: Option<Duration>,
}

/// Flow-level inputs of the miner: each flow without its Start/End nodes.
pub fn mining_inputs(flows: &[LabeledGraph]) -> Vec<Pattern> {
    flows.iter().map(|g| Pattern::from_flow(strip_boundary_nodes(g))).collect()
}

pub fn run_mining(corpus: &Corpus, config: &MiningConfig) -> Result<MiningRun, IngestError> {
    let flows = ingest(corpus)?;
    let start = Instant::now();
    let beta = Weight::from_f64(config.beta).unwrap_or(Weight::ZERO);
    let mcs_budget = Budget::wall(config.mcs_budget_ms);
    let n = GraphId(flows.len() as u32);
    let inputs = mining_inputs(&flows);
    let (inputs, isomorphic, next_id) = if config.dedup {
        let out = dedup(inputs, n, mcs_budget);
        (out.representatives, out.isomorphic, out.next_id)
    } else {
        (inputs, BTreeSet::new(), n)
    };
    let heavy_iso: Vec<Pattern> =
        inputs.iter().filter(|p| isomorphic.contains(&p.id()) && p.weight() >= beta).cloned().collect();
    let dedup_done = start.elapsed();

    let cfg = MinerConfig {
        beta,
        index_delta: config.index.then_some(config.delta),
        mcs_budget,
        preprocess: config.preprocess,
        deadline: config.total_budget_s.map(|s| start + Duration::from_secs_f64(s)),
    };
    let outcome = mine(&inputs, config.algorithm.into(), &cfg, next_id);
    let mining_time = start.elapsed();

    let first_pattern_time = match outcome.stats.first_pattern_at {
        Some(at) => Some(at.saturating_duration_since(start)),
        None => (!heavy_iso.is_empty()).then_some(dedup_done),
    };
    let mut roots = outcome.roots.clone();
    roots.extend(heavy_iso.iter().map(Pattern::id).filter(|g| outcome.live.contains(g)));
    let mut patterns = heavy_iso;
    patterns.extend(outcome.patterns.iter().cloned());
    Ok(MiningRun { flows, inputs, patterns, roots, outcome, mining_time, first_pattern_time })
}

/// Renders a run as a report, translating graph ids back to the corpus'
/// flow and node ids.
pub fn build_report(corpus: &Corpus, config: &MiningConfig, run: &MiningRun) -> Report {
    let n = corpus.flows.len() as u32;
    let mut patterns: Vec<ReportPattern> = run
        .patterns
        .iter()
        .map(|p| {
            let parents = (!p.parents.is_empty()).then(|| {
                p.parents
                    .iter()
                    .map(|g| if g.0 < n { ParentRef::Flow(corpus.flows[g.0 as usize].id.clone()) } else { ParentRef::Pattern(g.0) })
                    .collect()
            });
            let g = &p.graph;
            let nodes =
                g.nodes().iter().map(|v| ReportNode { id: v.id.0, label: v.label.to_string(), weight: v.weight }).collect();
            let edges = g
                .edges()
                .iter()
                .map(|e| ReportEdge { src: e.src.0, dst: e.dst.0, label: e.label.to_string(), weight: e.weight })
                .collect();
            let occurrences = p
                .occurrences
                .iter()
                .map(|(flow, occ)| {
                    let raw = &corpus.flows[flow.0 as usize];
                    let map: BTreeMap<String, String> =
                        occ.iter().map(|(pv, fv)| (pv.0.to_string(), raw.nodes[fv.0 as usize].id.clone())).collect();
                    (raw.id.clone(), map)
                })
                .collect();
            ReportPattern { id: p.id().0, weight: p.weight(), parents, root: run.roots.contains(&p.id()), nodes, edges, occurrences }
        })
        .collect();
    patterns.sort_by(|a, b| b.weight.cmp(&a.weight).then(a.id.cmp(&b.id)));
    Report {
        config: config.clone(),
        metrics: duplication_metrics(&run.flows, &run.patterns),
        timing: Timing {
            mining_ms: run.mining_time.as_millis() as u64,
            first_pattern_ms: run.first_pattern_time.map(|d| d.as_millis() as u64),
            mcs_total: run.outcome.stats.extractions,
            mcs_optimal: run.outcome.stats.optimal_extractions,
        },
        budget_exhausted: run.outcome.budget_exhausted,
        patterns,
    }
}

pub fn mine_corpus(corpus: &Corpus, config: &MiningConfig) -> Result<Report, IngestError> {
    let run = run_mining(corpus, config)?;
    Ok(build_report(corpus, config, &run))
}

/// Corpus size before and after the miner's input filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CorpusStats {
    pub flows: usize,
    pub nodes: usize,
    /// Flows whose stripped graph reaches `beta`.
    pub flows_considered: usize,
    /// Nodes of those flows, Start/End excluded.
    pub nodes_considered: usize,
}

pub fn corpus_stats(corpus: &Corpus, beta: Weight) -> Result<CorpusStats, IngestError> {
    let flows = ingest(corpus)?;
    let considered: Vec<Pattern> = mining_inputs(&flows).into_iter().filter(|p| p.weight() >= beta).collect();
    Ok(CorpusStats {
        flows: flows.len(),
        nodes: flows.iter().map(LabeledGraph::node_count).sum(),
        flows_considered: considered.len(),
        nodes_considered: considered.iter().map(|p| p.graph.node_count()).sum(),
    })
}
