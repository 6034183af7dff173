mod common;

use common::*;
use flowdup::graph::{edge_count_ub, refactor_weight, ub, GraphId};
use flowdup::mcs::{extract_mcs, isomorphism, Pattern};
use flowdup::miner::dedup_key;
use flowdup::preprocess::simplify_pair;
use flowdup::sat::{maxsat_linear, sat_solve, Budget, CnfFormula, SolveOutcome};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, n1: usize, n2: usize, labels: usize) -> (flowdup::graph::LabeledGraph, flowdup::graph::LabeledGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_graph(&mut rng, 0, n1, labels, 0.35), random_graph(&mut rng, 1, n2, labels, 0.35))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bounds_are_symmetric(seed in any::<u64>(), n1 in 1usize..8, n2 in 1usize..8) {
        let (g1, g2) = pair(seed, n1, n2, 3);
        prop_assert_eq!(ub(&g1, &g2), ub(&g2, &g1));
        prop_assert_eq!(edge_count_ub(&g1, &g2), edge_count_ub(&g2, &g1));
    }

    #[test]
    fn self_bound_covers_own_weight(seed in any::<u64>(), n in 1usize..8) {
        let (g, _) = pair(seed, n, 1, 2);
        // a graph is a common sub-graph of itself once isolated nodes go
        let connected = g.restrict(|v| g.degree(v.id) > 0, |_| true);
        prop_assert!(ub(&g, &g) >= refactor_weight(&connected));
    }

    #[test]
    fn extraction_stays_under_bounds(seed in any::<u64>(), n1 in 2usize..7, n2 in 2usize..7) {
        let (g1, g2) = pair(seed, n1, n2, 2);
        let x = extract_mcs(&Pattern::from_flow(g1.clone()), &Pattern::from_flow(g2.clone()), GraphId(2), Budget::UNLIMITED);
        prop_assert!(x.optimal);
        if let Some(p) = x.pattern {
            prop_assert!(p.weight() <= ub(&g1, &g2));
            prop_assert!(p.graph.edge_count() <= edge_count_ub(&g1, &g2));
            prop_assert!(p.graph.isolated_nodes().is_empty());
            prop_assert_eq!(p.flows().collect::<Vec<_>>(), vec![GraphId(0), GraphId(1)]);
        }
    }

    #[test]
    fn simplification_only_removes(seed in any::<u64>(), n1 in 1usize..8, n2 in 1usize..8) {
        let (g1, g2) = pair(seed, n1, n2, 3);
        let (s1, s2) = simplify_pair(&g1, &g2);
        for (s, g) in [(&s1, &g1), (&s2, &g2)] {
            for n in s.nodes() {
                prop_assert_eq!(g.node(n.id), Some(n));
            }
            for e in s.edges() {
                prop_assert_eq!(g.edge(e.id), Some(e));
            }
            prop_assert!(s.isolated_nodes().is_empty());
        }
        let again = simplify_pair(&s1, &s2);
        prop_assert_eq!(again, (s1, s2));
    }

    #[test]
    fn shuffled_copies_are_isomorphic(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 0, n, 3, 0.3);
        let h = shuffled(&mut rng, &g, 1);
        prop_assert_eq!(dedup_key(&g), dedup_key(&h));
        let bijection = isomorphism(&g, &h, Budget::UNLIMITED);
        prop_assert!(bijection.is_some());
        for e in h.edges() {
            let b = bijection.as_ref().unwrap();
            let image = g.edge_between(b[&e.src], b[&e.dst]);
            prop_assert!(image.is_some_and(|x| x.label == e.label));
        }
    }

    #[test]
    fn sat_agrees_with_enumeration(seed in any::<u64>(), vars in 1u32..10, clauses in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = CnfFormula::with_vars(vars);
        for c in random_clauses(&mut rng, vars, clauses) {
            f.add_clause(c);
        }
        let satisfiable = brute_maxsat(vars, &f, &[]).is_some();
        match sat_solve(&f, Budget::UNLIMITED) {
            SolveOutcome::Sat(m) => prop_assert!(satisfiable && f.is_satisfied_by(&m)),
            SolveOutcome::Unsat => prop_assert!(!satisfiable),
            SolveOutcome::Unknown => prop_assert!(false, "unlimited budget gave up"),
        }
    }

    #[test]
    fn maxsat_history_strictly_improves(seed in any::<u64>(), vars in 1u32..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hard = CnfFormula::with_vars(vars);
        for c in random_clauses(&mut rng, vars, vars as usize) {
            hard.add_clause(c);
        }
        let soft = random_clauses(&mut rng, vars, 12);
        let r = maxsat_linear(&hard, &soft, Budget::UNLIMITED);
        prop_assert!(r.history.windows(2).all(|w| w[1] < w[0]));
        prop_assert_eq!(r.cost, brute_maxsat(vars, &hard, &soft));
    }
}
