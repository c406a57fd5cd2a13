//! Canonical replacement paths for single tree-edge failures.
//!
//! For a target `v` and a failing edge `e` on the root-to-`v` tree path, the
//! selected replacement path is optimal in `G - e` and canonical in two
//! steps: prefer a path whose last edge already lies in the tree (the pair
//! is then *covered*); otherwise pick, among optimal paths, the one whose
//! divergence from the tree path sits as close to the source as possible.
//! New-ending paths split as tree-prefix plus a detour that touches the tree
//! path only at its two ends.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, View};
use crate::path::Path;
use crate::search::{hop_distance_capped, hop_distances, shortest_path};
use crate::tree::BfsTree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplacementError {
    #[error("edge {edge} is not on the tree path of vertex {target}")]
    EdgeNotOnPath { target: usize, edge: usize },
    #[error("vertex {0} is unreachable from the source")]
    Unreachable(usize),
    #[error("pairs with mixed targets: {0} and {1}")]
    MixedTargets(usize, usize),
}

/// `(target vertex, failing edge id)`.
pub type PairKey = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct ReplacementPath {
    pub target: usize,
    pub failing_edge: usize,
    pub path: Path,
    /// True iff the last edge is not a tree edge.
    pub new_ending: bool,
    /// Divergence point from the tree path; present iff new-ending.
    pub divergence: Option<usize>,
    /// Suffix from the divergence point to the target; present iff new-ending.
    pub detour: Option<Path>,
}

impl ReplacementPath {
    pub fn key(&self) -> PairKey {
        (self.target, self.failing_edge)
    }

    pub fn last_edge(&self) -> usize {
        self.path.last_edge().expect("replacement paths are nonempty")
    }

    /// Detour vertices without the divergence point and the target.
    pub fn detour_interior(&self) -> &[usize] {
        match &self.detour {
            Some(d) if d.vertices().len() > 2 => {
                let v = d.vertices();
                &v[1..v.len() - 1]
            }
            _ => &[],
        }
    }
}

/// The uncovered pairs: exactly those whose replacement path is new-ending,
/// keyed by `(target, failing edge)`.
#[derive(Debug, Default)]
pub struct UncoveredPairs {
    pairs: BTreeMap<PairKey, ReplacementPath>,
}

impl UncoveredPairs {
    pub fn get(&self, key: &PairKey) -> Option<&ReplacementPath> {
        self.pairs.get(key)
    }

    pub fn contains(&self, key: &PairKey) -> bool {
        self.pairs.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &PairKey> {
        self.pairs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PairKey, &ReplacementPath)> {
        self.pairs.iter()
    }

    /// Pairs of one target.
    pub fn of_target(&self, v: usize) -> impl Iterator<Item = (&PairKey, &ReplacementPath)> {
        self.pairs.range((v, 0)..=(v, usize::MAX))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Debug dump, one JSON object per pair.
    pub fn dump_jsonl(&self, g: &Graph) -> String {
        let mut out = String::new();
        for rp in self.pairs.values() {
            let (a, b) = g.endpoints(rp.failing_edge);
            let _ = writeln!(
                out,
                "{{\"v\": {}, \"e\": [{}, {}], \"path\": {:?}, \"new_ending\": {}}}",
                rp.target,
                a.min(b),
                a.max(b),
                rp.path.vertices(),
                rp.new_ending
            );
        }
        out
    }
}

/// Replacement path for one pair. `None` when the failing edge is a bridge
/// separating the target. Errors when `e` is not on the target's tree path.
pub fn replacement_path(
    g: &Graph,
    tree: &BfsTree,
    v: usize,
    e: usize,
) -> Result<Option<ReplacementPath>, ReplacementError> {
    if !tree.is_reachable(v) {
        return Err(ReplacementError::Unreachable(v));
    }
    if !tree.is_tree_edge(e) || !tree.on_root_path(v, e) {
        return Err(ReplacementError::EdgeNotOnPath { target: v, edge: e });
    }
    let mut without_e = View::new(g);
    without_e.delete_edge(e);
    let dist = hop_distances(&without_e, tree.source());
    let mut work = View::new(g);
    Ok(pair_inner(g, tree, v, e, &dist, &mut work))
}

/// Convenience form: when `e` is not on the target's tree path the tree path
/// itself already avoids `e` and is returned unchanged.
pub fn replacement_or_tree_path(
    g: &Graph,
    tree: &BfsTree,
    v: usize,
    e: usize,
) -> Result<Option<ReplacementPath>, ReplacementError> {
    if !tree.is_reachable(v) {
        return Err(ReplacementError::Unreachable(v));
    }
    if tree.is_tree_edge(e) && tree.on_root_path(v, e) {
        return replacement_path(g, tree, v, e);
    }
    let path = tree.path_from_root(v).unwrap();
    Ok(Some(ReplacementPath {
        target: v,
        failing_edge: e,
        path,
        new_ending: false,
        divergence: None,
        detour: None,
    }))
}

/// Core of the per-pair selection; `dist_no_e` are hop distances from the
/// source in `G - e`, shared across all targets below `e`.
fn pair_inner(
    g: &Graph,
    tree: &BfsTree,
    v: usize,
    e: usize,
    dist_no_e: &[Option<u32>],
    work: &mut View,
) -> Option<ReplacementPath> {
    let s = tree.source();
    let target_dist = dist_no_e[v]?;

    // Step 1: keep only tree edges at v; if the optimum survives, the
    // replacement can reuse a tree edge as its last hop.
    work.reset();
    for &(_, edge) in g.neighbors(v) {
        if !tree.is_tree_edge(edge) {
            work.delete_edge(edge);
        }
    }
    work.delete_edge(e);
    if hop_distance_capped(work, s, v, Some(target_dist)) == Some(target_dist) {
        let path = shortest_path(work, s, v).expect("distance was just verified");
        debug_assert!(tree.is_tree_edge(path.last_edge().unwrap()));
        return Some(ReplacementPath {
            target: v,
            failing_edge: e,
            path,
            new_ending: false,
            divergence: None,
            detour: None,
        });
    }

    // Step 2: the last edge must be new. Pick the optimal path diverging as
    // close to the source as possible: deleting the interior of the tree path
    // below candidate divergence points, scan for the shallowest feasible one.
    let pi = tree.path_from_root(v).unwrap();
    let verts = pi.vertices();
    let fail_pos = tree.edge_position(e); // e = (verts[fail_pos], verts[fail_pos+1])
    let k = pi.len();

    work.reset();
    work.delete_edge(e);
    for &u in &verts[1..k] {
        work.delete_vertex(u);
    }
    let mut jstar = None;
    for (j, &vj) in verts.iter().enumerate().take(fail_pos + 1) {
        if j > 0 {
            work.undelete_vertex(vj);
        }
        if hop_distance_capped(work, s, v, Some(target_dist)) == Some(target_dist) {
            jstar = Some(j);
            break;
        }
    }
    let jstar = jstar.expect("an optimal replacement with a unique divergence always exists");
    let path = shortest_path(work, s, v).expect("feasible at the selected divergence");
    debug_assert_eq!(path.len() as u32, target_dist);
    debug_assert!(!tree.is_tree_edge(path.last_edge().unwrap()));

    // Divergence = end of the longest common prefix with the tree path.
    let mut d_pos = 0;
    while d_pos + 1 < path.vertices().len()
        && d_pos + 1 < verts.len()
        && path.vertices()[d_pos + 1] == verts[d_pos + 1]
    {
        d_pos += 1;
    }
    debug_assert_eq!(d_pos, jstar, "path diverges exactly at the scanned vertex");
    let divergence = path.vertices()[d_pos];
    let detour = Path::from_parts(
        path.vertices()[d_pos..].to_vec(),
        path.edges()[d_pos..].to_vec(),
    );
    debug_assert!(
        detour
            .vertices()
            .iter()
            .filter(|x| pi.contains_vertex(**x))
            .count()
            == 2,
        "detour meets the tree path only at its endpoints"
    );

    Some(ReplacementPath {
        target: v,
        failing_edge: e,
        path,
        new_ending: true,
        divergence: Some(divergence),
        detour: Some(detour),
    })
}

/// All replacement paths: one per (reachable target, tree edge on its tree
/// path). Bridge pairs map to `None`. The second component filters the
/// new-ending pairs.
pub fn all_replacement_paths(
    g: &Graph,
    tree: &BfsTree,
) -> (BTreeMap<PairKey, Option<ReplacementPath>>, UncoveredPairs) {
    // Group pairs by failing edge: all targets below it share one BFS of G - e.
    let results: Vec<Vec<(PairKey, Option<ReplacementPath>)>> = tree
        .tree_edges()
        .par_iter()
        .map(|&e| {
            let mut below = Vec::new();
            let mut stack = vec![tree.deep_of(e)];
            while let Some(u) = stack.pop() {
                below.push(u);
                for &(c, _) in tree.children(u) {
                    stack.push(c);
                }
            }
            below.sort_unstable();
            let mut without_e = View::new(g);
            without_e.delete_edge(e);
            let dist = hop_distances(&without_e, tree.source());
            let mut work = View::new(g);
            below
                .into_iter()
                .map(|v| ((v, e), pair_inner(g, tree, v, e, &dist, &mut work)))
                .collect()
        })
        .collect();

    let mut all = BTreeMap::new();
    let mut uncovered = BTreeMap::new();
    for chunk in results {
        for (key, rp) in chunk {
            if let Some(rp) = &rp {
                if rp.new_ending {
                    uncovered.insert(key, rp.clone());
                }
            }
            all.insert(key, rp);
        }
    }
    (all, UncoveredPairs { pairs: uncovered })
}

/// Order same-target pairs by the distance of the failing edge from the
/// target along the tree path, nearest first (deepest failing edge first).
pub fn order_deepest_first(
    tree: &BfsTree,
    pairs: impl IntoIterator<Item = PairKey>,
) -> Result<Vec<PairKey>, ReplacementError> {
    let mut items: Vec<PairKey> = pairs.into_iter().collect();
    if let Some(&(v0, _)) = items.first() {
        if let Some(&(v1, _)) = items.iter().find(|(v, _)| *v != v0) {
            return Err(ReplacementError::MixedTargets(v0, v1));
        }
        let target_depth = tree.depth(v0).unwrap() as usize;
        items.sort_unstable_by_key(|&(_, e)| target_depth - 1 - tree.edge_position(e));
    }
    Ok(items)
}
