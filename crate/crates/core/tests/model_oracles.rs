mod common;

use common::*;
use proptest::prelude::*;
use transmig_core::placement::Evaluator;
use transmig_core::{
    admit_demands, build_routes, hop_distances, network_load, place_exhaustive, DemandSet, NodeId, Objective,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_matches_floyd_warshall(seed in any::<u64>(), n in 3u32..16, p in 0.0f64..0.4) {
        let (g, _) = random_scenario(seed, n, p, 1e9);
        let fw = floyd_warshall(&g);
        for &a in g.nodes() {
            let row = hop_distances(&g, a).unwrap();
            for &b in g.nodes() {
                prop_assert_eq!(row[&b], fw.get(a, b));
            }
        }
    }

    #[test]
    fn routes_use_nearest_site_and_shortest_paths(seed in any::<u64>(), n in 3u32..16, p in 0.0f64..0.4, k in 1usize..4) {
        let (g, ds) = random_scenario(seed, n, p, 1e9);
        let fw = floyd_warshall(&g);
        let cands = g.candidates();
        let placement: Vec<NodeId> = cands.iter().copied().take(k).collect();
        let plan = build_routes(&g, &ds, &placement).unwrap();
        for leaf in &plan.leaves {
            let dm = &ds.as_slice()[leaf.demand];
            let via = leaf.via.unwrap();
            prop_assert_eq!(via, nearest(&fw, &placement, dm.destination));
            prop_assert_eq!(leaf.path.len() as u32 - 1, fw.get(via, dm.destination));
            for w in leaf.path.windows(2) {
                prop_assert!(g.capacity(w[0], w[1]).is_some());
            }
        }
        for t in &plan.trunks {
            prop_assert_eq!(t.path.len() as u32 - 1, fw.get(t.source, t.transcoder));
        }
        let load = network_load(&plan).total_load;
        prop_assert!(close(load, oracle_load(&fw, &ds, &placement)));
    }

    #[test]
    fn fast_evaluator_agrees_with_routing(seed in any::<u64>(), n in 3u32..16, p in 0.0f64..0.4, k in 1usize..4) {
        let (g, ds) = random_scenario(seed, n, p, 1e9);
        let eval = Evaluator::new(&g, &ds).unwrap();
        let cands = g.candidates();
        let placement: Vec<NodeId> = cands.iter().rev().copied().take(k).collect();
        let expected = network_load(&build_routes(&g, &ds, &placement).unwrap()).total_load;
        prop_assert!(close(eval.load(&placement), expected));
    }

    #[test]
    fn admission_respects_every_capacity(seed in any::<u64>(), n in 3u32..16, p in 0.0f64..0.4, cap in 20.0f64..400.0) {
        let (g, ds) = random_scenario(seed, n, p, cap);
        let placement: Vec<NodeId> = g.candidates().into_iter().take(2).collect();
        let report = admit_demands(&g, &ds, &placement);
        prop_assert_eq!(report.admitted + report.blocked.len(), ds.len());
        // route only the admitted demands and re-measure each edge
        let kept: Vec<usize> = (0..ds.len()).filter(|i| !report.blocked.contains(i)).collect();
        if kept.is_empty() {
            return Ok(());
        }
        let admitted = ds.reordered(&kept);
        let recheck = network_load(&build_routes(&g, &admitted, &placement).unwrap());
        for (e, used) in &recheck.per_edge {
            let (a, b) = e.endpoints();
            prop_assert!(*used <= g.capacity(a, b).unwrap() + 1e-9);
            prop_assert!(close(*used, report.per_edge[e]));
        }
        prop_assert!(close(recheck.total_load, report.total_load));
    }

    #[test]
    fn exhaustive_finds_brute_force_minimum(seed in any::<u64>(), n in 3u32..12, p in 0.0f64..0.4, k in 1usize..3) {
        let (g, ds) = random_scenario(seed, n, p, 1e9);
        let cands = g.candidates();
        prop_assume!(k <= cands.len());
        let fw = floyd_warshall(&g);
        let best = subsets(&cands, k)
            .iter()
            .map(|s| oracle_load(&fw, &ds, s))
            .fold(f64::INFINITY, f64::min);
        let p = place_exhaustive(&g, &ds, k, Objective::NetworkLoad, 1_000_000).unwrap();
        prop_assert!(close(p.score.unwrap(), best));
        prop_assert!(close(oracle_load(&fw, &ds, &p.transcoders), best));
    }
}

#[test]
fn generous_capacity_blocks_nothing() {
    for seed in 0..20 {
        let (g, ds) = random_scenario(seed, 12, 0.2, 1e9);
        let placement = g.candidates();
        let r = admit_demands(&g, &ds, &placement);
        assert!(r.blocked.is_empty());
        let plan_load = network_load(&build_routes(&g, &ds, &placement).unwrap()).total_load;
        assert!(close(r.total_load, plan_load));
    }
}

#[test]
fn unused_demand_set_is_empty_ok() {
    let (g, _) = random_scenario(1, 6, 0.2, 1e9);
    let empty = DemandSet::new(&g, vec![]).unwrap();
    let r = admit_demands(&g, &empty, &g.candidates());
    assert_eq!((r.admitted, r.total_load), (0, 0.0));
}
