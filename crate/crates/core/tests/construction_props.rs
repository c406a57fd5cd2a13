//! End-to-end construction properties on a small random corpus (the wide
//! sweep lives in the acceptance suite).

use std::collections::BTreeSet;

use ftbfs_core::construction::{
    baseline_ftbfs, build_structure, build_structure_with, last_unprotected_edges, BuildOptions,
};
use ftbfs_core::corpus::{corpus_graph, small_oracle_graph};
use ftbfs_core::graph::{Graph, View};
use ftbfs_core::search::hop_distances;
use ftbfs_core::tree::build_bfs_tree;
use ftbfs_core::verify::{unprotected_by_distance, verify_structure};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn structures_verify_and_contain_the_tree() {
    for seed in 0..30u64 {
        let (g, s) = small_oracle_graph(seed);
        for eps in [0.2, 0.34] {
            let built = build_structure(&g, s, eps).unwrap();
            let h = built.structure_edges();
            let rep = verify_structure(&g, &[s], &h, &built.reinforced_edges).unwrap();
            assert!(rep.ok, "seed {seed} eps {eps}: {:?}", rep.violations.first());
            let tree = build_bfs_tree(&g, s);
            assert!(
                tree.tree_edges().iter().all(|e| h.contains(e)),
                "seed {seed}: structure must contain the tree"
            );
            assert!(built.backup_edges.is_disjoint(&built.reinforced_edges));
        }
    }
}

#[test]
fn reinforcement_scan_agrees_with_distance_oracle() {
    // Against deliberately crippled structures: the last-protection scan
    // must cover at least whatever the exact distance oracle flags, and
    // reinforcing the scan's output must always verify.
    for seed in 40..70u64 {
        let (g, s) = small_oracle_graph(seed);
        let tree = build_bfs_tree(&g, s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        let mut h: BTreeSet<usize> = tree.tree_edges().iter().copied().collect();
        // Bare tree plus, on odd seeds, a random sprinkle of non-tree edges:
        // partially protected structures make the scan earn its keep.
        if seed % 2 == 1 {
            for e in 0..g.m() {
                if !tree.is_tree_edge(e) && rng.random_bool(0.4) {
                    h.insert(e);
                }
            }
        }
        let scan = last_unprotected_edges(&g, &tree, &h);
        let oracle = unprotected_by_distance(&g, s, &h);
        assert!(
            oracle.is_subset(&scan),
            "seed {seed}: distance-unprotected edge missing from the scan"
        );
        let rep = verify_structure(&g, &[s], &h, &scan).unwrap();
        assert!(rep.ok, "seed {seed}: reinforcing the scan must suffice");
    }
}

#[test]
fn whole_graph_always_verifies() {
    for seed in 200..215u64 {
        let (g, s) = corpus_graph(seed);
        let all: BTreeSet<usize> = (0..g.m()).collect();
        let rep = verify_structure(&g, &[s], &all, &BTreeSet::new()).unwrap();
        assert!(rep.ok, "seed {seed}");
    }
}

#[test]
fn baseline_envelope_and_exact_coverage() {
    for seed in 80..110u64 {
        let (g, s) = corpus_graph(seed);
        let h = baseline_ftbfs(&g, s).unwrap();
        let n = g.n() as f64;
        assert!(
            h.len() as f64 <= n.powf(1.5) + n,
            "seed {seed}: baseline exceeded its envelope"
        );
        let tree = build_bfs_tree(&g, s);
        assert!(
            last_unprotected_edges(&g, &tree, &h).is_empty(),
            "seed {seed}: baseline must last-protect everything"
        );
    }
}

#[test]
fn non_tree_failures_are_free() {
    for seed in 120..140u64 {
        let (g, s) = small_oracle_graph(seed);
        let tree = build_bfs_tree(&g, s);
        let h: BTreeSet<usize> = tree.tree_edges().iter().copied().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gv = View::new(&g);
        let mut hv = View::new(&g);
        for e in 0..g.m() {
            if !h.contains(&e) {
                hv.delete_edge(e);
            }
        }
        for _ in 0..5 {
            let e = rng.random_range(0..g.m());
            if tree.is_tree_edge(e) {
                continue;
            }
            gv.delete_edge(e);
            assert_eq!(
                hop_distances(&gv, s),
                hop_distances(&hv, s),
                "seed {seed}: non-tree failure changed a distance"
            );
            gv.undelete_edge(e);
        }
    }
}

#[test]
fn epsilon_routes_agree_on_soundness() {
    // Baseline route and forced machinery both verify on one instance.
    let (g, s) = small_oracle_graph(999);
    for (eps, force) in [(0.7, false), (0.7, true), (1.0, false)] {
        let opts = BuildOptions {
            force_eps_machinery: force,
            ..Default::default()
        };
        let built = build_structure_with(&g, s, eps, &opts).unwrap();
        let rep =
            verify_structure(&g, &[s], &built.structure_edges(), &built.reinforced_edges)
                .unwrap();
        assert!(rep.ok, "eps {eps} force {force}");
    }
}

/// Wide randomized soak (run on demand: `-- --ignored soak`).
#[test]
#[ignore]
fn soak_wide_corpus() {
    use rayon::prelude::*;
    let cases: Vec<(u64, f64, bool)> = (0..1500u64)
        .flat_map(|i| {
            [
                (7_000_000 + i, 0.05, false),
                (7_000_000 + i, 0.2, false),
                (7_000_000 + i, 0.65, true),
            ]
        })
        .collect();
    cases.par_iter().for_each(|&(seed, eps, force)| {
        let (g, s) = corpus_graph(seed);
        let opts = BuildOptions {
            force_eps_machinery: force,
            ..Default::default()
        };
        let built = build_structure_with(&g, s, eps, &opts).unwrap();
        let rep = verify_structure(&g, &[s], &built.structure_edges(), &built.reinforced_edges)
            .unwrap();
        assert!(
            rep.ok,
            "seed {seed} eps {eps} force {force}: {:?}",
            rep.violations.first()
        );
    });
}

#[test]
fn deep_quota_gadget_builds_and_verifies() {
    // A chain with per-rung bypass ladders of decreasing length: every rung
    // failure has a distinct-last-edge optimal bypass, concentrating many
    // distinct last edges at few targets. Exercises the heavy/light split
    // and the contested sweep end to end at small quotas.
    let mut edges = vec![(0usize, 1usize), (1, 2), (2, 3)];
    let mut next = 4usize;
    let mut z = Vec::new();
    for (anchor, len) in [(0usize, 8usize), (1, 6), (2, 4)] {
        let mut prev = anchor;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        z.push(prev);
    }
    let (x1, x2) = (next, next + 1);
    next += 2;
    edges.push((3, x1));
    edges.push((3, x2));
    for &zj in &z {
        edges.push((x1, zj));
        edges.push((x2, zj));
    }
    let g = Graph::new(next, edges).unwrap();
    for eps in [0.05, 0.2, 0.45] {
        let built = build_structure(&g, 0, eps).unwrap();
        let rep =
            verify_structure(&g, &[0], &built.structure_edges(), &built.reinforced_edges)
                .unwrap();
        assert!(rep.ok, "eps {eps}: {:?}", rep.violations.first());
    }
}
