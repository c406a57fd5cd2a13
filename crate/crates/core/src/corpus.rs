//! Seeded random graph corpora for stress tests and calibration.
//!
//! Everything is a pure function of the seed. Connected instances come from
//! a random spanning tree plus extra chords; density classes rotate so a
//! corpus sweeps from barely-augmented trees to dense blocks (dense classes
//! keep n small so brute-force verification stays fast).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::graph::Graph;

/// A connected graph plus a source, determined by the seed.
pub fn corpus_graph(seed: u64) -> (Graph, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let class = rng.random_range(0..6u32);
    let (n, extra) = match class {
        // Trees plus a few chords: long paths, mostly bridges.
        0 => {
            let n = rng.random_range(16..=200);
            (n, rng.random_range(1..=6))
        }
        // Sparse.
        1 => {
            let n = rng.random_range(16..=200);
            (n, n)
        }
        // Mid density.
        2 | 3 => {
            let n = rng.random_range(16..=140);
            (n, 3 * n)
        }
        // Dense, kept small.
        4 => {
            let n = rng.random_range(16..=72);
            (n, (n * n) / 6)
        }
        // Very dense, smaller still.
        _ => {
            let n = rng.random_range(12..=40);
            (n, (n * n) / 3)
        }
    };
    let g = random_connected(n, extra, &mut rng);
    let source = rng.random_range(0..n);
    (g, source)
}

/// Small sparse connected instances where exhaustive shortest-path
/// enumeration stays far below the oracle guard.
pub fn small_oracle_graph(seed: u64) -> (Graph, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1234_5678_9abc_def0);
    let n = rng.random_range(8..=60);
    let extra = rng.random_range(2..=(n / 2).max(3));
    let g = random_connected(n, extra, &mut rng);
    let source = rng.random_range(0..n);
    (g, source)
}

/// Random tree on up to `max_n` vertices (at least 2).
pub fn corpus_tree(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5555_aaaa_3333_cccc);
    let n = rng.random_range(2..=max_n.max(2));
    random_connected(n, 0, &mut rng)
}

fn random_connected(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    // Random attachment tree over a relabeling, then chords.
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1 + extra);
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for i in 1..n {
        // Bias toward recent vertices so trees grow deep as well as wide.
        let span = if rng.random_bool(0.5) {
            i
        } else {
            (i / 4).max(1)
        };
        let j = i - rng.random_range(0..span.min(i)) - 1;
        let (u, v) = (labels[j], labels[i]);
        edges.push((u, v));
        used.insert((u.min(v), u.max(v)));
    }
    let mut attempts = 0;
    let mut added = 0;
    let cap = n * (n - 1) / 2 - (n - 1);
    while added < extra.min(cap) && attempts < 20 * extra + 100 {
        attempts += 1;
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && used.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
            added += 1;
        }
    }
    // Edge ids carry the tie-break weights; shuffle so they are unrelated to
    // construction order.
    edges.shuffle(rng);
    Graph::new(n, edges).expect("generator never emits loops or duplicates")
}
