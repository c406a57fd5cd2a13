//! The structure builder: split the uncovered pairs by interference kind,
//! sweep the contested ones over a bounded number of iterations, cover the
//! interference-free sets through the tree and path decompositions, then
//! reinforce exactly the tree edges that remain last-unprotected.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{
    heavy_path_decompose, partial_overlap_segments, root_path_profile, segment_decompose_len,
    TreeDecomposition,
};
use crate::graph::{Graph, View};
use crate::interference::{
    census_jsonl, classify, no_unrelated_interference, InterferenceGraph, PairSet,
};
use crate::numeric::{ceil_log2, pow_ceil};
use crate::replacement::{all_replacement_paths, order_deepest_first, PairKey, UncoveredPairs};
use crate::search::hop_distances;
use crate::tree::{build_bfs_tree, BfsTree};

#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("epsilon must lie in (0,1]")]
    InvalidEpsilon(f64),
    #[error("source {0} out of range (n = {1})")]
    InvalidSource(usize, usize),
}

/// Iteration budget for the contested sweep: `ceil(1/epsilon) + 2`.
pub fn k_eps(epsilon: f64) -> Result<u32, BuildError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(BuildError::InvalidEpsilon(epsilon));
    }
    // Snap near-integer reciprocals so 1/0.1 does not ceil to 11.
    let inv = 1.0 / epsilon;
    let r = inv.round();
    let snapped = if (inv - r).abs() < 1e-9 { r } else { inv };
    Ok(snapped.ceil() as u32 + 2)
}

/// Split the uncovered pairs into those with at least one unrelated
/// interferer (contested) and the rest (uncontested, an interference-free
/// set by construction).
pub fn split_uncovered(ig: &InterferenceGraph, up: &UncoveredPairs) -> (PairSet, PairSet) {
    let mut contested = PairSet::new("contested");
    let mut uncontested = PairSet::new("passive[0]");
    for key in up.keys() {
        if ig.unrelated_partners(key).is_empty() {
            uncontested.keys.insert(*key);
        } else {
            contested.keys.insert(*key);
        }
    }
    debug_assert!(no_unrelated_interference(ig, &uncontested));
    (contested, uncontested)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct S1Options {
    /// Count pass-distinctness against the accumulated structure instead of
    /// within the pass (experimental variant; default off).
    pub distinct_against_h: bool,
}

#[derive(Debug)]
pub struct S1Output {
    /// Backup edges added (last edges of handled pairs).
    pub added: BTreeSet<usize>,
    /// Interference-free sets banked for the covering phase, one per
    /// iteration.
    pub sim_sets: Vec<PairSet>,
    /// Contested pairs still unhandled after the final iteration; sound
    /// either way (reinforcement catches anything left), surfaced for
    /// diagnostics.
    pub leftover: PairSet,
    /// Per-iteration classification census as JSON lines.
    pub census: Vec<String>,
    /// Iteration budget the sweep ran with.
    pub iterations: u32,
    /// Last iteration that still had contested pairs to look at.
    pub iterations_used: u32,
}

/// Iterative sweep over the contested pairs. Each iteration classifies the
/// working set, banks the passive part, and per target and class walks the
/// deepest-failing-edge-first ordering collecting up to `ceil(n^eps)`
/// distinct last edges into the structure. Pairs whose last edge made it in
/// drop out of the next working set.
pub fn phase_s1(
    g: &Graph,
    tree: &BfsTree,
    up: &UncoveredPairs,
    ig: &InterferenceGraph,
    contested: &PairSet,
    epsilon: f64,
    opts: &S1Options,
) -> Result<S1Output, BuildError> {
    let budget = k_eps(epsilon)?;
    let quota = pow_ceil(g.n() as f64, epsilon);
    let mut added: BTreeSet<usize> = BTreeSet::new();
    let mut sim_sets = Vec::with_capacity(budget as usize);
    let mut census = Vec::with_capacity(budget as usize);
    let mut working = PairSet::from_keys("working[1]", contested.keys.iter().copied());
    let mut iterations_used = 0;

    for i in 1..=budget {
        if !working.is_empty() {
            iterations_used = i;
        }
        let parts = classify(ig, &working, i);
        assert!(
            no_unrelated_interference(ig, &parts.passive),
            "banked passive sets must be free of unrelated interference"
        );
        census.push(census_jsonl(i, &parts));

        let mut targets: Vec<usize> = parts.crossing.targets();
        targets.extend(parts.mutual.targets());
        targets.sort_unstable();
        targets.dedup();
        for v in targets {
            for class in [&parts.crossing, &parts.mutual] {
                let ordered = order_deepest_first(tree, class.of_target(v))
                    .expect("per-target slices share their target");
                let mut seen: BTreeSet<usize> = BTreeSet::new();
                for key in ordered {
                    let le = up.get(&key).unwrap().last_edge();
                    debug_assert!(!tree.is_tree_edge(le));
                    if opts.distinct_against_h {
                        if added.contains(&le) {
                            continue;
                        }
                        if seen.len() >= quota {
                            break;
                        }
                        seen.insert(le);
                        added.insert(le);
                    } else {
                        let is_new = !seen.contains(&le);
                        if is_new && seen.len() >= quota {
                            break;
                        }
                        seen.insert(le);
                        added.insert(le);
                    }
                }
            }
        }

        let mut next = PairSet::new(format!("working[{}]", i + 1));
        for key in parts.crossing.keys.iter().chain(parts.mutual.keys.iter()) {
            if !added.contains(&up.get(key).unwrap().last_edge()) {
                next.keys.insert(*key);
            }
        }
        sim_sets.push(parts.passive);
        working = next;
    }

    Ok(S1Output {
        added,
        sim_sets,
        leftover: working,
        census,
        iterations: budget,
        iterations_used,
    })
}

#[derive(Debug)]
pub struct S2Output {
    pub added: BTreeSet<usize>,
    /// Edges added for glue-edge protection alone.
    pub glue_added: usize,
}

/// Covering phase for the interference-free sets. First protects every
/// glue-edge failure outright; then, per set and target, selects pairs
/// through the halving segmentation (whole light segments plus each
/// segment's upmost pair) and through each decomposition path meeting the
/// root path (its upmost pair, and the straddling end segments whenever
/// their distinct-last-edge count is small).
pub fn phase_s2(
    g: &Graph,
    tree: &BfsTree,
    td: &TreeDecomposition,
    up: &UncoveredPairs,
    sets: &[PairSet],
    epsilon: f64,
) -> Result<S2Output, BuildError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(BuildError::InvalidEpsilon(epsilon));
    }
    let quota = pow_ceil(g.n() as f64, epsilon);
    let per_target_cap = 8 * quota * (ceil_log2(g.n().max(1)) as usize + 1);
    let mut added: BTreeSet<usize> = BTreeSet::new();

    // Glue-edge coverage over every uncovered pair.
    for (_, rp) in up.iter() {
        if td.is_glue(rp.failing_edge) {
            added.insert(rp.last_edge());
        }
    }
    let glue_added = added.len();

    for set in sets {
        for v in set.targets() {
            // (position on the root path, key, last edge), position-sorted.
            let mut pairs: Vec<(usize, PairKey, usize)> = set
                .of_target(v)
                .map(|key| {
                    let rp = up.get(&key).unwrap();
                    (tree.edge_position(key.1), key, rp.last_edge())
                })
                .collect();
            pairs.sort_unstable();
            let depth = tree.depth(v).unwrap() as usize;
            let sd = segment_decompose_len(depth).expect("targets sit below the source");
            let mut selected: BTreeSet<PairKey> = BTreeSet::new();

            // Segment pass: light segments in full (strictly fewer than the
            // quota of distinct last edges), each segment's upmost pair
            // always.
            for &(a, b) in &sd.segments {
                let distinct = distinct_last_edges(&pairs, a, b - 1);
                if distinct == 0 {
                    continue;
                }
                if distinct < quota {
                    select_all(&pairs, a, b - 1, &mut selected);
                }
                select_upmost(&pairs, a, b - 1, &mut selected);
            }

            // Decomposition-path pass: per path meeting the root path, the
            // upmost pair on the shared run, then the straddling end
            // segments, in full when their census stays at or under quota.
            let profile = root_path_profile(td, tree, v);
            for &(_, lo, hi) in &profile.paths {
                select_upmost(&pairs, lo, hi, &mut selected);
                let (upper, lower) = partial_overlap_segments(&sd, (lo, hi));
                let mut ends: Vec<usize> = [upper, lower].into_iter().flatten().collect();
                ends.dedup();
                for seg_idx in ends {
                    let (a, b) = sd.segments[seg_idx];
                    let lo2 = a.max(lo);
                    let hi2 = (b - 1).min(hi);
                    if lo2 <= hi2 {
                        if distinct_last_edges(&pairs, lo2, hi2) <= quota {
                            select_all(&pairs, lo2, hi2, &mut selected);
                        }
                        select_upmost(&pairs, lo2, hi2, &mut selected);
                    }
                }
            }

            let new_edges: BTreeSet<usize> =
                selected.iter().map(|k| up.get(k).unwrap().last_edge()).collect();
            assert!(
                new_edges.len() <= per_target_cap,
                "per-target selection census exceeded its logarithmic cap"
            );
            added.extend(new_edges);
        }
    }

    Ok(S2Output { added, glue_added })
}

fn distinct_last_edges(pairs: &[(usize, PairKey, usize)], lo: usize, hi: usize) -> usize {
    let set: BTreeSet<usize> = pairs
        .iter()
        .filter(|&&(pos, _, _)| lo <= pos && pos <= hi)
        .map(|&(_, _, le)| le)
        .collect();
    set.len()
}

fn select_all(
    pairs: &[(usize, PairKey, usize)],
    lo: usize,
    hi: usize,
    selected: &mut BTreeSet<PairKey>,
) {
    for &(pos, key, _) in pairs {
        if lo <= pos && pos <= hi {
            selected.insert(key);
        }
    }
}

fn select_upmost(
    pairs: &[(usize, PairKey, usize)],
    lo: usize,
    hi: usize,
    selected: &mut BTreeSet<PairKey>,
) {
    if let Some(&(_, key, _)) = pairs.iter().find(|&&(pos, _, _)| lo <= pos && pos <= hi) {
        selected.insert(key);
    }
}

/// Tree edges left last-unprotected by `h`: some affected target has no
/// structure edge that ends an optimal replacement path for the failure.
/// These are exactly the edges to reinforce; last-protection of everything
/// else implies full protection.
pub fn last_unprotected_edges(g: &Graph, tree: &BfsTree, h: &BTreeSet<usize>) -> BTreeSet<usize> {
    debug_assert!(tree.tree_edges().iter().all(|e| h.contains(e)));
    let flagged: Vec<usize> = tree
        .tree_edges()
        .par_iter()
        .filter_map(|&e| {
            let mut view = View::new(g);
            view.delete_edge(e);
            let dist = hop_distances(&view, tree.source());
            let mut stack = vec![tree.deep_of(e)];
            while let Some(v) = stack.pop() {
                for &(c, _) in tree.children(v) {
                    stack.push(c);
                }
                let Some(dv) = dist[v] else {
                    continue; // severed by a bridge: unreachable on both sides
                };
                let covered = g.neighbors(v).iter().any(|&(u, edge)| {
                    edge != e && h.contains(&edge) && dist[u] == Some(dv - 1)
                });
                if !covered {
                    return Some(e);
                }
            }
            None
        })
        .collect();
    flagged.into_iter().collect()
}

/// The quadratic-budget structure: the tree plus the last edge of every
/// uncovered pair. Every failure is last-protected outright, so no edge
/// needs reinforcement.
pub fn baseline_ftbfs(g: &Graph, s: usize) -> Result<BTreeSet<usize>, BuildError> {
    if s >= g.n() {
        return Err(BuildError::InvalidSource(s, g.n()));
    }
    let tree = build_bfs_tree(g, s);
    let (_, up) = all_replacement_paths(g, &tree);
    let mut h: BTreeSet<usize> = tree.tree_edges().iter().copied().collect();
    for (_, rp) in up.iter() {
        h.insert(rp.last_edge());
    }
    Ok(h)
}

/// Baseline construction packaged as a full structure. `epsilon` is only
/// recorded; it does not steer the baseline.
pub fn baseline_structure(g: &Graph, s: usize, epsilon: f64) -> Result<FtBfsStructure, BuildError> {
    let started = Instant::now();
    let budget = k_eps(epsilon)?;
    let h = baseline_ftbfs(g, s)?;
    let tree = build_bfs_tree(g, s);
    let reinforced = last_unprotected_edges(g, &tree, &h);
    let backup: BTreeSet<usize> = h.difference(&reinforced).copied().collect();
    Ok(FtBfsStructure {
        source: s,
        epsilon,
        stats: BuildStats {
            b: backup.len(),
            r: reinforced.len(),
            k_eps: budget,
            iterations_used: 0,
            phase_s1_added: 0,
            phase_s2_added: 0,
            s1_leftover_pairs: 0,
            wall_ms: started.elapsed().as_millis() as u64,
        },
        backup_edges: backup,
        reinforced_edges: reinforced,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Run the epsilon machinery even where the baseline would do.
    pub force_eps_machinery: bool,
    pub s1: S1Options,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildStats {
    pub b: usize,
    pub r: usize,
    pub k_eps: u32,
    pub iterations_used: u32,
    pub phase_s1_added: usize,
    pub phase_s2_added: usize,
    pub s1_leftover_pairs: usize,
    pub wall_ms: u64,
}

/// A built structure: disjoint backup and reinforced edge sets whose union
/// contains the BFS tree.
#[derive(Debug, Clone, PartialEq)]
pub struct FtBfsStructure {
    pub source: usize,
    pub epsilon: f64,
    pub backup_edges: BTreeSet<usize>,
    pub reinforced_edges: BTreeSet<usize>,
    pub stats: BuildStats,
}

impl FtBfsStructure {
    /// All structure edges (backup plus reinforced).
    pub fn structure_edges(&self) -> BTreeSet<usize> {
        self.backup_edges
            .union(&self.reinforced_edges)
            .copied()
            .collect()
    }

    /// Canonical file form: sorted keys, endpoint pairs as `[min, max]`
    /// sorted lexicographically. `wall_ms` is pinned to zero in files so
    /// reruns stay byte-identical; the live value sits in `stats`.
    pub fn to_file(&self, g: &Graph) -> StructureFile {
        StructureFile {
            backup_edges: sorted_pairs(g, &self.backup_edges),
            epsilon: self.epsilon,
            m: g.m(),
            n: g.n(),
            reinforced_edges: sorted_pairs(g, &self.reinforced_edges),
            source: self.source,
            stats: FileStats {
                b: self.stats.b,
                k_eps: self.stats.k_eps,
                phase_s1_added: self.stats.phase_s1_added,
                phase_s2_added: self.stats.phase_s2_added,
                r: self.stats.r,
                wall_ms: 0,
            },
        }
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let mut s = serde_json::to_string(&self.to_file(g)).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn sorted_pairs(g: &Graph, edges: &BTreeSet<usize>) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (u.min(v), u.max(v))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Serialized structure; field order is the sorted-key order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureFile {
    pub backup_edges: Vec<(usize, usize)>,
    pub epsilon: f64,
    pub m: usize,
    pub n: usize,
    pub reinforced_edges: Vec<(usize, usize)>,
    pub source: usize,
    pub stats: FileStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileStats {
    pub b: usize,
    pub k_eps: u32,
    pub phase_s1_added: usize,
    pub phase_s2_added: usize,
    pub r: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("structure file is for n={file_n}, m={file_m}, graph has n={graph_n}, m={graph_m}")]
    Mismatch {
        file_n: usize,
        file_m: usize,
        graph_n: usize,
        graph_m: usize,
    },
    #[error("structure edge ({0}, {1}) is not a graph edge")]
    UnknownEdge(usize, usize),
}

impl StructureFile {
    /// Map endpoint pairs back to edge ids against the host graph.
    pub fn resolve(&self, g: &Graph) -> Result<(BTreeSet<usize>, BTreeSet<usize>), ResolveError> {
        if self.n != g.n() || self.m != g.m() {
            return Err(ResolveError::Mismatch {
                file_n: self.n,
                file_m: self.m,
                graph_n: g.n(),
                graph_m: g.m(),
            });
        }
        let lookup = |pairs: &[(usize, usize)]| -> Result<BTreeSet<usize>, ResolveError> {
            pairs
                .iter()
                .map(|&(u, v)| g.edge_id(u, v).ok_or(ResolveError::UnknownEdge(u, v)))
                .collect()
        };
        Ok((
            lookup(&self.backup_edges)?,
            lookup(&self.reinforced_edges)?,
        ))
    }
}

/// Build with default options.
pub fn build_structure(g: &Graph, s: usize, epsilon: f64) -> Result<FtBfsStructure, BuildError> {
    build_structure_with(g, s, epsilon, &BuildOptions::default())
}

/// Full builder. Forests and the trivial regime short-circuit; `epsilon >=
/// 1/2` routes to the baseline unless forced; otherwise the two phases run
/// and reinforcement is the exact set of edges left last-unprotected.
pub fn build_structure_with(
    g: &Graph,
    s: usize,
    epsilon: f64,
    opts: &BuildOptions,
) -> Result<FtBfsStructure, BuildError> {
    let started = Instant::now();
    let budget = k_eps(epsilon)?;
    if s >= g.n() {
        return Err(BuildError::InvalidSource(s, g.n()));
    }

    let tree = build_bfs_tree(g, s);
    let tree_set: BTreeSet<usize> = tree.tree_edges().iter().copied().collect();
    let mut stats = BuildStats {
        b: 0,
        r: 0,
        k_eps: budget,
        iterations_used: 0,
        phase_s1_added: 0,
        phase_s2_added: 0,
        s1_leftover_pairs: 0,
        wall_ms: 0,
    };

    let (h, reinforced) = if g.is_forest() {
        (tree_set, BTreeSet::new())
    } else if epsilon >= 0.5 && !opts.force_eps_machinery {
        let mut h = tree_set;
        let (_, up) = all_replacement_paths(g, &tree);
        for (_, rp) in up.iter() {
            h.insert(rp.last_edge());
        }
        let reinforced = last_unprotected_edges(g, &tree, &h);
        debug_assert!(reinforced.is_empty(), "the baseline last-protects everything");
        (h, reinforced)
    } else {
        let (_, up) = all_replacement_paths(g, &tree);
        let ig = InterferenceGraph::build(&tree, &up);
        let (contested, uncontested) = split_uncovered(&ig, &up);
        let s1 = phase_s1(g, &tree, &up, &ig, &contested, epsilon, &opts.s1)?;
        let td = heavy_path_decompose(&tree);
        let mut sets = vec![uncontested];
        sets.extend(s1.sim_sets.iter().cloned());
        let s2 = phase_s2(g, &tree, &td, &up, &sets, epsilon)?;

        let mut h = tree_set;
        stats.iterations_used = s1.iterations_used;
        stats.s1_leftover_pairs = s1.leftover.len();
        for &e in &s1.added {
            h.insert(e);
        }
        stats.phase_s1_added = s1.added.len();
        let before = h.len();
        for &e in &s2.added {
            h.insert(e);
        }
        stats.phase_s2_added = h.len() - before;
        let reinforced = last_unprotected_edges(g, &tree, &h);
        (h, reinforced)
    };

    let backup: BTreeSet<usize> = h.difference(&reinforced).copied().collect();
    stats.b = backup.len();
    stats.r = reinforced.len();
    stats.wall_ms = started.elapsed().as_millis() as u64;

    Ok(FtBfsStructure {
        source: s,
        epsilon,
        backup_edges: backup,
        reinforced_edges: reinforced,
        stats,
    })
}
