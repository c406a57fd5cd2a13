//! Ground-truth verification by exhaustive double-BFS, plus small-instance
//! enumeration oracles for the property suites.
//!
//! Distances here are plain hop counts: the tie-break weights only pick
//! canonical paths, they never change any distance.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, View};
use crate::path::Path;
use crate::search::hop_distances;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("structure edge {0} is not a graph edge")]
    ForeignEdge(usize),
    #[error("reinforced edge {0} is not in the structure")]
    ReinforcedOutsideStructure(usize),
    #[error("source {0} out of range")]
    BadSource(usize),
    #[error("sampling fraction {0} outside (0, 1]")]
    BadSample(f64),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("shortest-path enumeration exceeded {0} paths")]
pub struct EnumerationOverflow(pub usize);

/// One broken invariant: after deleting `failed_edge`, the distance from
/// `source` to `vertex` inside the structure differs from the graph truth.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub dist_g: Option<u32>,
    pub dist_h: Option<u32>,
    pub failed_edge: (usize, usize),
    pub source: usize,
    pub vertex: usize,
}

#[derive(Debug, PartialEq)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub edges_checked: usize,
    pub elapsed_ms: u128,
    pub partial: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Verify only this fraction of candidate failures, seeded below.
    pub sample: Option<f64>,
    pub seed: u64,
}

/// Check that `(H, E')` preserves every post-failure distance: for each
/// source, each failure of an edge outside `E'` (whether the edge is in `H`
/// or was discarded), and each vertex, the hop distance in the surviving
/// structure must equal the hop distance in the surviving graph, with
/// unreachable-on-both-sides counting as preserved. All violations are
/// reported, ordered by (source, failed edge, vertex).
pub fn verify_structure(
    g: &Graph,
    sources: &[usize],
    h: &BTreeSet<usize>,
    reinforced: &BTreeSet<usize>,
) -> Result<VerificationReport, VerifyError> {
    verify_structure_with(g, sources, h, reinforced, &VerifyOptions::default())
}

pub fn verify_structure_with(
    g: &Graph,
    sources: &[usize],
    h: &BTreeSet<usize>,
    reinforced: &BTreeSet<usize>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    for &e in h {
        if e >= g.m() {
            return Err(VerifyError::ForeignEdge(e));
        }
    }
    for &e in reinforced {
        if !h.contains(&e) {
            return Err(VerifyError::ReinforcedOutsideStructure(e));
        }
    }
    for &s in sources {
        if s >= g.n() {
            return Err(VerifyError::BadSource(s));
        }
    }

    let mut failures: Vec<usize> = (0..g.m()).filter(|e| !reinforced.contains(e)).collect();
    let mut partial = false;
    if let Some(frac) = opts.sample {
        if !(frac > 0.0 && frac <= 1.0) {
            return Err(VerifyError::BadSample(frac));
        }
        if frac < 1.0 {
            let keep = ((failures.len() as f64 * frac).ceil() as usize).max(1);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
            failures.shuffle(&mut rng);
            failures.truncate(keep);
            failures.sort_unstable();
            partial = true;
        }
    }

    let non_h: Vec<usize> = (0..g.m()).filter(|e| !h.contains(e)).collect();
    let edges_checked = failures.len();
    let mut cases: Vec<(usize, usize)> = Vec::with_capacity(sources.len() * failures.len());
    for &s in sources {
        for &e in &failures {
            cases.push((s, e));
        }
    }

    let violations: Vec<Violation> = cases
        .par_iter()
        .map_init(
            || {
                let mut hv = View::new(g);
                for &e in &non_h {
                    hv.delete_edge(e);
                }
                (View::new(g), hv)
            },
            |(gv, hv), &(s, e)| {
                gv.delete_edge(e);
                let in_h = h.contains(&e);
                if in_h {
                    hv.delete_edge(e);
                }
                let dg = hop_distances(gv, s);
                let dh = hop_distances(hv, s);
                gv.undelete_edge(e);
                if in_h {
                    hv.undelete_edge(e);
                }
                let mut out = Vec::new();
                if dg != dh {
                    let ep = g.endpoints(e);
                    let key = (ep.0.min(ep.1), ep.0.max(ep.1));
                    for v in 0..g.n() {
                        if dg[v] != dh[v] {
                            out.push(Violation {
                                dist_g: dg[v],
                                dist_h: dh[v],
                                failed_edge: key,
                                source: s,
                                vertex: v,
                            });
                        }
                    }
                }
                out
            },
        )
        .flatten()
        .collect();

    Ok(VerificationReport {
        ok: violations.is_empty(),
        violations,
        edges_checked,
        elapsed_ms: start.elapsed().as_millis(),
        partial,
    })
}

pub const ENUMERATION_CAP: usize = 10_000;

/// Every minimum-hop path from `s` to `t` in the masked graph, via the BFS
/// DAG. Errors out past `cap` paths so it stays a small-instance oracle.
pub fn enumerate_all_shortest_capped(
    view: &View,
    s: usize,
    t: usize,
    cap: usize,
) -> Result<Vec<Path>, EnumerationOverflow> {
    let dist = hop_distances(view, s);
    if dist[t].is_none() {
        return Ok(Vec::new());
    }
    // Count paths into each vertex first so the guard trips before any
    // exponential walk.
    let g = view.graph();
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| dist[v].is_some()).collect();
    order.sort_unstable_by_key(|&v| dist[v].unwrap());
    let mut count = vec![0u64; g.n()];
    count[s] = 1;
    for &v in &order {
        if v == s {
            continue;
        }
        let d = dist[v].unwrap();
        let mut c: u64 = 0;
        for (u, _) in view.live_neighbors(v) {
            if dist[u] == Some(d - 1) {
                c = c.saturating_add(count[u]);
            }
        }
        count[v] = c;
    }
    if count[t] as usize > cap {
        return Err(EnumerationOverflow(cap));
    }

    let mut paths = Vec::with_capacity(count[t] as usize);
    let mut stack_v = vec![t];
    let mut stack_e: Vec<usize> = Vec::new();
    fn walk(
        view: &View,
        dist: &[Option<u32>],
        s: usize,
        stack_v: &mut Vec<usize>,
        stack_e: &mut Vec<usize>,
        paths: &mut Vec<Path>,
    ) {
        let v = *stack_v.last().unwrap();
        if v == s {
            let vertices: Vec<usize> = stack_v.iter().rev().copied().collect();
            let edges: Vec<usize> = stack_e.iter().rev().copied().collect();
            paths.push(Path::from_parts(vertices, edges));
            return;
        }
        let d = dist[v].unwrap();
        for (u, e) in view.live_neighbors(v) {
            if dist[u] == Some(d - 1) {
                stack_v.push(u);
                stack_e.push(e);
                walk(view, dist, s, stack_v, stack_e, paths);
                stack_v.pop();
                stack_e.pop();
            }
        }
    }
    walk(view, &dist, s, &mut stack_v, &mut stack_e, &mut paths);
    debug_assert_eq!(paths.len() as u64, count[t]);
    Ok(paths)
}

/// `enumerate_all_shortest_capped` with the default guard.
pub fn enumerate_all_shortest(
    view: &View,
    s: usize,
    t: usize,
) -> Result<Vec<Path>, EnumerationOverflow> {
    enumerate_all_shortest_capped(view, s, t, ENUMERATION_CAP)
}

/// Exact set of tree edges whose failure the structure fails to cover:
/// a double BFS per tree edge compares post-failure distances in `H` and in
/// `G`. Test oracle for the cheaper last-protection scan.
pub fn unprotected_by_distance(g: &Graph, s: usize, h: &BTreeSet<usize>) -> BTreeSet<usize> {
    let tree = crate::tree::build_bfs_tree(g, s);
    let mut gv = View::new(g);
    let mut hv = View::new(g);
    for e in 0..g.m() {
        if !h.contains(&e) {
            hv.delete_edge(e);
        }
    }
    let mut out = BTreeSet::new();
    for &e in tree.tree_edges() {
        gv.delete_edge(e);
        let in_h = h.contains(&e);
        if in_h {
            hv.delete_edge(e);
        }
        if hop_distances(&gv, s) != hop_distances(&hv, s) {
            out.insert(e);
        }
        gv.undelete_edge(e);
        if in_h {
            hv.undelete_edge(e);
        }
    }
    out
}

/// Structural audit of every replacement path produced for one instance,
/// with exhaustive enumeration as the ground truth. Returns the number of
/// pairs checked, or a description of the first broken invariant. Intended
/// for small instances (the enumeration guard applies).
pub fn check_replacement_invariants(g: &Graph, s: usize) -> Result<usize, String> {
    use crate::replacement::all_replacement_paths;
    use crate::tree::build_bfs_tree;

    let tree = build_bfs_tree(g, s);
    let (all, _) = all_replacement_paths(g, &tree);
    let mut view = View::new(g);
    let mut checked = 0;

    for (&(v, e), rp) in &all {
        checked += 1;
        view.reset();
        view.delete_edge(e);
        let truth = hop_distances(&view, s)[v];
        let pi = tree.path_from_root(v).unwrap();

        let Some(rp) = rp else {
            if truth.is_some() {
                return Err(format!("pair ({v}, {e}): marked bridge but reachable"));
            }
            continue;
        };
        // Optimality.
        if truth != Some(rp.path.len() as u32) {
            return Err(format!(
                "pair ({v}, {e}): length {} against true distance {truth:?}",
                rp.path.len()
            ));
        }
        let last = rp.last_edge();
        if rp.new_ending {
            if tree.is_tree_edge(last) {
                return Err(format!("pair ({v}, {e}): new-ending with a tree last edge"));
            }
            let d = rp.divergence.unwrap();
            let detour = rp.detour.as_ref().unwrap();
            // Tree prefix plus detour, detour meeting the tree path only at
            // its two ends.
            let dpos = pi.position(d).ok_or("divergence off the tree path")?;
            if rp.path.vertices()[..=dpos] != pi.vertices()[..=dpos] {
                return Err(format!("pair ({v}, {e}): prefix deviates before divergence"));
            }
            let on_pi = detour
                .vertices()
                .iter()
                .filter(|x| pi.contains_vertex(**x))
                .count();
            if on_pi != 2 {
                return Err(format!(
                    "pair ({v}, {e}): detour touches the tree path {on_pi} times"
                ));
            }
            // Detour no shorter than the failing edge's distance from the
            // target along the tree path.
            let fail_depth = tree.depth(tree.deep_of(e)).unwrap();
            let slack = tree.depth(v).unwrap() - fail_depth;
            if (detour.len() as u32) < slack {
                return Err(format!("pair ({v}, {e}): detour shorter than its span"));
            }
            // Leftmost divergence: no optimal replacement with a unique
            // divergence point diverges strictly above.
            let routes = enumerate_all_shortest(&view, s, v)
                .map_err(|err| format!("pair ({v}, {e}): {err}"))?;
            for route in &routes {
                let mut i = 0;
                while i + 1 < route.vertices().len()
                    && i + 1 < pi.vertices().len()
                    && route.vertices()[i + 1] == pi.vertices()[i + 1]
                {
                    i += 1;
                }
                let tail_on_pi = route.vertices()[i..]
                    .iter()
                    .filter(|x| pi.contains_vertex(**x))
                    .count();
                if tail_on_pi == 2 && i < dpos {
                    return Err(format!(
                        "pair ({v}, {e}): an optimal route diverges at depth {i} above {dpos}"
                    ));
                }
            }
        } else if !tree.is_tree_edge(last) {
            return Err(format!("pair ({v}, {e}): covered with a non-tree last edge"));
        }
    }

    // Same-target pairwise claims: divergence interleaving and detour
    // disjointness for distinct last edges.
    let new_ending: Vec<&crate::replacement::ReplacementPath> = all
        .values()
        .flatten()
        .filter(|rp| rp.new_ending)
        .collect();
    for a in &new_ending {
        for b in &new_ending {
            if a.target != b.target || a.last_edge() == b.last_edge() {
                continue;
            }
            let da = tree.depth(tree.deep_of(a.failing_edge)).unwrap();
            let db = tree.depth(tree.deep_of(b.failing_edge)).unwrap();
            if da >= db {
                continue; // orient: a strictly above b
            }
            let v = a.target;
            let d2 = tree.depth(b.divergence.unwrap()).unwrap();
            // Divergence of the deeper failure sits between the shallow
            // failing edge's deep end and the deeper failing edge's shallow
            // end, inclusive.
            if d2 < da || d2 > db - 1 {
                return Err(format!(
                    "target {v}: divergence depth {d2} outside [{da}, {}]",
                    db - 1
                ));
            }
            let ia: BTreeSet<usize> = a
                .detour
                .as_ref()
                .unwrap()
                .vertices()
                .iter()
                .copied()
                .collect();
            let shared: Vec<usize> = b
                .detour
                .as_ref()
                .unwrap()
                .vertices()
                .iter()
                .copied()
                .filter(|x| ia.contains(x))
                .collect();
            if shared != vec![v] {
                return Err(format!(
                    "target {v}: same-target detours share {shared:?}, expected only the target"
                ));
            }
        }
    }
    Ok(checked)
}
