mod common;

use std::collections::BTreeSet;

use flowdup::fixtures::running_example;
use flowdup::flow::{Corpus, CorpusMode};
use flowdup::generator::{generate, GenSpec};
use flowdup::pipeline::{corpus_stats, mine_corpus};
use flowdup::report::{AlgorithmName, MiningConfig, ParentRef, Report};
use flowdup::weight::Weight;

#[test]
fn empty_corpus_gives_empty_report() {
    let report = mine_corpus(&Corpus::default(), &MiningConfig::default()).unwrap();
    assert!(report.patterns.is_empty());
    assert_eq!(report.metrics.duplicated_weight, Weight::ZERO);
    assert_eq!(report.metrics.pct_flows_with_dup, 0.0);
    assert_eq!(report.timing.first_pattern_ms, None);
    assert!(!report.budget_exhausted);
}

#[test]
fn running_example_report() {
    let report = mine_corpus(&running_example(), &MiningConfig::default()).unwrap();
    assert_eq!(report.patterns.len(), 1);
    let p = &report.patterns[0];
    assert_eq!(p.weight, Weight::from_units(5));
    assert!(p.root);
    assert_eq!(p.parents, Some(vec![ParentRef::Flow("normalize".into()), ParentRef::Flow("normalize_list".into())]));
    let lower = &p.occurrences["normalize_list"];
    assert_eq!(lower.values().cloned().collect::<BTreeSet<_>>(), BTreeSet::from(["trim".into(), "lower".into(), "replace".into()]));
    assert_eq!(report.metrics.duplicated_weight, Weight::from_units(10));
    assert_eq!(report.metrics.pct_flows_with_dup, 100.0);
    assert!((report.metrics.pct_dup_nodes - 50.0).abs() < 1e-9);
}

#[test]
fn report_round_trips() {
    let corpus = generate(&GenSpec {
        n_flows: 30,
        pattern_size: 4,
        hosts: 3,
        padding: 8,
        disjoint: false,
        copies: 4,
        seed: 2,
    })
    .unwrap()
    .corpus;
    let report = mine_corpus(&corpus, &MiningConfig::default()).unwrap();
    assert!(!report.patterns.is_empty());
    let text = report.to_json();
    assert_eq!(Report::from_json(&text).unwrap(), report);
    let weights: Vec<(Weight, u32)> = report.patterns.iter().map(|p| (p.weight, p.id)).collect();
    assert!(weights.windows(2).all(|w| w[0].0 > w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1)));
}

#[test]
fn algorithms_give_identical_pattern_sections() {
    let corpus = generate(&GenSpec {
        n_flows: 40,
        pattern_size: 3,
        hosts: 4,
        padding: 7,
        disjoint: false,
        copies: 3,
        seed: 11,
    })
    .unwrap()
    .corpus;
    let run = |algorithm| {
        let report = mine_corpus(&corpus, &MiningConfig { algorithm, ..MiningConfig::default() }).unwrap();
        serde_json::to_string(&report.patterns).unwrap()
    };
    assert_eq!(run(AlgorithmName::Greedy), run(AlgorithmName::Lazy));
}

#[test]
fn exhausted_budget_still_reports() {
    let corpus = generate(&GenSpec {
        n_flows: 60,
        pattern_size: 4,
        hosts: 3,
        padding: 10,
        disjoint: false,
        copies: 0,
        seed: 4,
    })
    .unwrap()
    .corpus;
    let report = mine_corpus(&corpus, &MiningConfig { total_budget_s: Some(0.0), ..MiningConfig::default() }).unwrap();
    assert!(report.budget_exhausted);
    assert_eq!(report.timing.mcs_total, 0);
}

#[test]
fn stats_of_running_example() {
    let s = corpus_stats(&running_example(), Weight::from_units(5)).unwrap();
    assert_eq!((s.flows, s.nodes, s.flows_considered, s.nodes_considered), (2, 12, 2, 8));
    let empty = corpus_stats(&Corpus { mode: CorpusMode::Flow, flows: vec![] }, Weight::from_units(5)).unwrap();
    assert_eq!((empty.flows, empty.nodes, empty.flows_considered, empty.nodes_considered), (0, 0, 0, 0));
}

#[test]
fn stats_skip_light_flows() {
    let mut corpus = running_example();
    let mut light = flowdup::fixtures::normalize_flow();
    light.id = "tiny".into();
    light.nodes.retain(|n| n.id != "lower" && n.id != "replace");
    light.edges = vec![
        flowdup::flow::RawEdge { src: "start".into(), dst: "trim".into(), kind: "Connector".into(), label: None, order: None },
        flowdup::flow::RawEdge { src: "trim".into(), dst: "end".into(), kind: "Connector".into(), label: None, order: None },
    ];
    corpus.flows.push(light);
    let s = corpus_stats(&corpus, Weight::from_units(5)).unwrap();
    assert_eq!((s.flows, s.flows_considered), (3, 2));
}
