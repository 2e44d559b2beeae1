mod common;

use common::*;
use proptest::prelude::*;
use transmig_core::placement::run_ga;
use transmig_core::{
    group_score, place_exhaustive, place_ga, place_heuristic, place_random, CodecRate, Demand, DemandSet, GaParams,
    GraphBuilder, HeuristicParams, NetworkGraph, NodeId, Objective, PlacementError, Roles,
};

/// Two 5-node stars joined by a 4-hop bar; the source sits mid-bar and each
/// star's centre is a candidate, as are the bar nodes.
fn dumbbell() -> (NetworkGraph, DemandSet) {
    let n = NodeId;
    let mut b = GraphBuilder::new();
    // bar: 0 - 1 - 2(src) - 3 - 4 ; star centres 0 and 4
    for i in 0..5 {
        let roles = if i == 2 { Roles::SOURCE } else { Roles::CANDIDATE };
        b.add_node(n(i), roles);
    }
    for i in 0..4 {
        b.add_edge(n(i), n(i + 1), 1e6);
    }
    for (centre, first) in [(0, 10), (4, 20)] {
        for leaf in first..first + 4 {
            b.add_node(n(leaf), Roles::CLIENT);
            b.add_edge(n(centre), n(leaf), 1e6);
        }
    }
    let g = b.build().unwrap();
    let demands = (10..14)
        .chain(20..24)
        .map(|c| Demand::new(n(2), n(c), CodecRate::new("HD", 25.0), "movie"))
        .collect();
    let ds = DemandSet::new(&g, demands).unwrap();
    (g, ds)
}

#[test]
fn heuristic_splits_the_dumbbell() {
    let (g, ds) = dumbbell();
    let p = place_heuristic(&g, &ds, &HeuristicParams::new(2, 0.1).unwrap()).unwrap();
    let mut t = p.transcoders.clone();
    t.sort();
    assert_eq!(t, vec![NodeId(0), NodeId(4)]);
    let best = place_exhaustive(&g, &ds, 2, Objective::NetworkLoad, 1000).unwrap();
    let fw = floyd_warshall(&g);
    assert_eq!(oracle_load(&fw, &ds, &p.transcoders), best.score.unwrap());
    // 8 leaves of one hop plus two 2-hop trunks, 25 Mb/s each
    assert_eq!(best.score.unwrap(), 25.0 * (8.0 + 4.0));
}

#[test]
fn single_candidate_gives_one_answer() {
    let n = NodeId;
    let g = GraphBuilder::new()
        .node(n(0), Roles::SOURCE)
        .node(n(1), Roles::CANDIDATE)
        .node(n(2), Roles::CLIENT)
        .edge(n(0), n(1), 100.0)
        .edge(n(1), n(2), 100.0)
        .build()
        .unwrap();
    let ds = DemandSet::new(&g, vec![Demand::new(n(0), n(2), CodecRate::new("HD", 25.0), "a")]).unwrap();
    let h = place_heuristic(&g, &ds, &HeuristicParams::new(1, 0.05).unwrap()).unwrap();
    let ga = place_ga(&g, &ds, 1, &GaParams::default(), None).unwrap();
    let ex = place_exhaustive(&g, &ds, 1, Objective::NetworkLoad, 10).unwrap();
    let r = place_random(&g, 1, 9).unwrap();
    for p in [&h, &ga, &ex, &r] {
        assert_eq!(p.transcoders, vec![n(1)]);
    }
    assert_eq!(ex.score, Some(50.0));
    let over = place_heuristic(&g, &ds, &HeuristicParams::new(3, 0.05).unwrap()).unwrap();
    assert!(over.truncated);
    assert_eq!(over.transcoders.len(), 1);
}

#[test]
fn ga_reaches_the_exhaustive_optimum_on_small_graphs() {
    let mut hits = 0;
    for seed in 0..10 {
        let (g, ds) = random_scenario(seed, 12, 0.15, 1e9);
        if g.candidates().len() < 3 {
            hits += 1;
            continue;
        }
        let ex = place_exhaustive(&g, &ds, 2, Objective::NetworkLoad, 10_000).unwrap();
        let params = GaParams { generations: 60, seed, ..GaParams::default() };
        let ga = place_ga(&g, &ds, 2, &params, None).unwrap();
        if close(ga.score.unwrap(), ex.score.unwrap()) {
            hits += 1;
        }
        assert!(ga.score.unwrap() >= ex.score.unwrap() - 1e-9);
    }
    assert!(hits >= 9, "GA matched the optimum on {hits}/10");
}

#[test]
fn exhaustive_budget_is_enforced() {
    let (g, ds) = random_scenario(3, 14, 0.2, 1e9);
    let k = g.candidates().len() / 2;
    match place_exhaustive(&g, &ds, k, Objective::NetworkLoad, 2) {
        Err(PlacementError::BudgetExceeded { combinations, budget }) => {
            assert!(combinations > 2);
            assert_eq!(budget, 2);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn blocking_objective_counts_refusals() {
    for seed in 0..10 {
        let (g, ds) = random_scenario(seed, 10, 0.2, 60.0);
        let ex = place_exhaustive(&g, &ds, 1, Objective::Blocked, 1000).unwrap();
        for c in g.candidates() {
            let blocked = transmig_core::admit_demands(&g, &ds, &[c]).blocked.len() as f64;
            assert!(ex.score.unwrap() <= blocked);
        }
        let run = run_ga(&g, &ds, 1, &GaParams { objective: Objective::Blocked, ..GaParams::default() }, None).unwrap();
        assert!(run.placement.score.unwrap() >= ex.score.unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn heuristic_output_is_valid(seed in any::<u64>(), n in 4u32..16, k in 1usize..4, lambda in 0.001f64..=0.1) {
        let (g, ds) = random_scenario(seed, n, 0.2, 1e9);
        let p = place_heuristic(&g, &ds, &HeuristicParams::new(k, lambda).unwrap()).unwrap();
        let cands = g.candidates();
        prop_assert_eq!(p.transcoders.len(), k.min(cands.len()));
        let mut t = p.transcoders.clone();
        t.sort();
        t.dedup();
        prop_assert_eq!(t.len(), p.transcoders.len());
        prop_assert!(p.transcoders.iter().all(|x| cands.contains(x)));
        prop_assert_eq!(p.score.unwrap(), group_score(&g, &p.transcoders, &ds).unwrap());
        // deterministic
        prop_assert_eq!(place_heuristic(&g, &ds, &HeuristicParams::new(k, lambda).unwrap()).unwrap(), p);
    }

    #[test]
    fn ga_and_random_are_reproducible(seed in any::<u64>(), n in 5u32..14) {
        let (g, ds) = random_scenario(seed, n, 0.2, 1e9);
        let k = 2.min(g.candidates().len());
        let params = GaParams { generations: 5, population: 12, seed, ..GaParams::default() };
        prop_assert_eq!(place_ga(&g, &ds, k, &params, None).unwrap(), place_ga(&g, &ds, k, &params, None).unwrap());
        prop_assert_eq!(place_random(&g, k, seed).unwrap(), place_random(&g, k, seed).unwrap());
    }
}
