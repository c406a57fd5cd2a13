//! Engine-level properties of the deterministic shortest-path machinery,
//! checked against exhaustive enumeration.

use ftbfs_core::corpus::small_oracle_graph;
use ftbfs_core::graph::View;
use ftbfs_core::search::{hop_distances, shortest_path, Perturbation, TieBreakWeight};
use ftbfs_core::tree::build_bfs_tree;
use ftbfs_core::verify::enumerate_all_shortest;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Enumerating every minimum-hop route and ranking by perturbation must give
/// a single strict minimum, equal to the engine's output. Runs over random
/// (graph, deletion set) instances.
#[test]
fn uniqueness_oracle() {
    for seed in 0..200u64 {
        let (g, s) = small_oracle_graph(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let mut view = View::new(&g);
        // Random deletion set, skewed small.
        for _ in 0..rng.random_range(0..4) {
            view.delete_edge(rng.random_range(0..g.m()));
        }
        if rng.random_bool(0.3) {
            let victim = rng.random_range(0..g.n());
            if victim != s {
                view.delete_vertex(victim);
            }
        }
        let t = rng.random_range(0..g.n());
        let routes = enumerate_all_shortest(&view, s, t).expect("oracle instances stay small");
        let engine = shortest_path(&view, s, t);
        if routes.is_empty() {
            assert!(engine.is_none(), "seed {seed}: engine found a phantom path");
            continue;
        }
        let engine = engine.expect("engine must find a path when one exists");
        let weights: Vec<TieBreakWeight> = routes
            .iter()
            .map(|p| TieBreakWeight::of_path(g.m(), p))
            .collect();
        let min = weights.iter().min().unwrap();
        assert_eq!(
            weights.iter().filter(|w| *w == min).count(),
            1,
            "seed {seed}: tie-break weights must have a strict minimum"
        );
        let best = &routes[weights.iter().position(|w| w == min).unwrap()];
        assert_eq!(best, &engine, "seed {seed}: engine path is not the minimum");
    }
}

/// Subpaths of the selected path are themselves the selected paths between
/// their endpoints.
#[test]
fn subpath_optimality() {
    for seed in 200..260u64 {
        let (g, s) = small_oracle_graph(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7777);
        let view = View::new(&g);
        let t = rng.random_range(0..g.n());
        let Some(path) = shortest_path(&view, s, t) else {
            continue;
        };
        if path.len() < 2 {
            continue;
        }
        for _ in 0..4 {
            let i = rng.random_range(0..path.vertices().len());
            let j = rng.random_range(0..path.vertices().len());
            let (i, j) = (i.min(j), i.max(j));
            let x = path.vertices()[i];
            let y = path.vertices()[j];
            let sub = path.subpath(x, y).unwrap();
            let direct = shortest_path(&view, x, y).unwrap();
            assert_eq!(sub, direct, "seed {seed}: subpath differs from direct query");
        }
    }
}

/// Rebuilding from the same input yields identical trees and paths.
#[test]
fn determinism_within_process() {
    for seed in 300..330u64 {
        let (g, s) = small_oracle_graph(seed);
        let t1 = build_bfs_tree(&g, s);
        let t2 = build_bfs_tree(&g, s);
        assert_eq!(t1.tree_edges(), t2.tree_edges());
        for v in 0..g.n() {
            assert_eq!(t1.path_from_root(v), t2.path_from_root(v));
            assert_eq!(t1.depth(v), t2.depth(v));
        }
    }
}

/// Tree depths agree with a plain hop BFS.
#[test]
fn depth_matches_plain_bfs() {
    for seed in 400..440u64 {
        let (g, s) = small_oracle_graph(seed);
        let tree = build_bfs_tree(&g, s);
        let dist = hop_distances(&View::new(&g), s);
        for (v, &d) in dist.iter().enumerate() {
            assert_eq!(tree.depth(v), d, "seed {seed} vertex {v}");
        }
    }
}

/// The engine stays oracle-exact on wider graphs whose edge count spans
/// several perturbation words (sparse instances keep enumeration small).
#[test]
fn uniqueness_on_multi_word_instances() {
    use ftbfs_core::corpus::corpus_graph;
    let mut exercised = 0;
    for seed in 0..400u64 {
        let (g, s) = corpus_graph(9_000_000 + seed);
        if g.n() < 100 || g.m() > g.n() + 12 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let view = View::new(&g);
        for _ in 0..3 {
            let t = rng.random_range(0..g.n());
            let Ok(routes) = enumerate_all_shortest(&view, s, t) else {
                continue;
            };
            if routes.is_empty() {
                continue;
            }
            let engine = shortest_path(&view, s, t).unwrap();
            let weights: Vec<TieBreakWeight> = routes
                .iter()
                .map(|p| TieBreakWeight::of_path(g.m(), p))
                .collect();
            let min = weights.iter().min().unwrap();
            let best = &routes[weights.iter().position(|w| w == min).unwrap()];
            assert_eq!(best, &engine, "seed {seed}");
            exercised += 1;
        }
        if exercised > 60 {
            break;
        }
    }
    assert!(exercised >= 30, "only {exercised} wide instances found");
}

/// The perturbation of a path is the exact edge-set fingerprint: weights of
/// distinct routes never collide.
#[test]
fn perturbation_distinguishes_routes() {
    for seed in 500..540u64 {
        let (g, s) = small_oracle_graph(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = rng.random_range(0..g.n());
        let view = View::new(&g);
        let Ok(routes) = enumerate_all_shortest(&view, s, t) else {
            continue;
        };
        let mut seen = std::collections::BTreeSet::new();
        for p in &routes {
            let pert = Perturbation::of_edges(g.m(), p.edges().iter().copied());
            assert!(seen.insert(pert), "two routes produced one fingerprint");
        }
    }
}
