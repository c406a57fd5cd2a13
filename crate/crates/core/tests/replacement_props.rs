//! Structural properties of replacement paths and interference on random
//! instances (the full-width run lives in the acceptance suite).

use ftbfs_core::corpus::small_oracle_graph;
use ftbfs_core::interference::{
    branch_intersects, classify, interferes, no_unrelated_interference, InterferenceGraph,
    PairSet,
};
use ftbfs_core::replacement::all_replacement_paths;
use ftbfs_core::tree::build_bfs_tree;
use ftbfs_core::verify::check_replacement_invariants;

#[test]
fn replacement_invariants_on_random_instances() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let (g, s) = small_oracle_graph(seed);
        checked += check_replacement_invariants(&g, s).unwrap_or_else(|err| {
            panic!("seed {seed}: {err}");
        });
    }
    assert!(checked > 200, "suite exercised only {checked} pairs");
}

#[test]
fn interference_is_symmetric_and_classification_partitions() {
    let mut asymmetric_branch_witness = false;
    for seed in 100..160u64 {
        let (g, s) = small_oracle_graph(seed);
        let tree = build_bfs_tree(&g, s);
        let (_, up) = all_replacement_paths(&g, &tree);
        let ig = InterferenceGraph::build(&tree, &up);
        let keys: Vec<_> = up.keys().copied().collect();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                if a.0 == b.0 {
                    continue;
                }
                let pa = up.get(a).unwrap();
                let pb = up.get(b).unwrap();
                assert_eq!(
                    interferes(pa, pb).unwrap(),
                    interferes(pb, pa).unwrap(),
                    "seed {seed}: interference must be symmetric"
                );
                if branch_intersects(&tree, pa, pb) != branch_intersects(&tree, pb, pa) {
                    asymmetric_branch_witness = true;
                }
            }
        }

        let working = PairSet::from_keys("all", keys.iter().copied());
        let parts = classify(&ig, &working, 1);
        let mut union = parts.crossing.keys.clone();
        assert!(
            parts.mutual.keys.iter().all(|k| union.insert(*k)),
            "seed {seed}: crossing and mutual overlap"
        );
        assert!(
            parts.passive.keys.iter().all(|k| union.insert(*k)),
            "seed {seed}: passive overlaps another class"
        );
        assert_eq!(union, working.keys, "seed {seed}: classes must cover the input");

        // Mutual partnership: every mutual pair has a mutual partner.
        for key in &parts.mutual.keys {
            let partner = ig
                .unrelated_partners(key)
                .iter()
                .find(|p| working.contains(p) && !parts.crossing.contains(p));
            let partner = partner.unwrap_or_else(|| {
                panic!("seed {seed}: mutual pair {key:?} lacks a partner")
            });
            assert!(
                parts.mutual.contains(partner),
                "seed {seed}: partner of a mutual pair must be mutual"
            );
        }
        assert!(no_unrelated_interference(&ig, &parts.passive));
    }
    // The branch relation is genuinely one-directional somewhere in the
    // corpus; if no witness ever appears the check is vacuous, which the
    // suite tolerates but records.
    if !asymmetric_branch_witness {
        eprintln!("note: no asymmetric branch-intersection witness in this corpus");
    }
}
