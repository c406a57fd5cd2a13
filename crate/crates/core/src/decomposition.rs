//! Heavy-path decomposition of the BFS tree and halving segmentation of
//! root paths.
//!
//! The decomposition peels a heavy path off the (sub)tree root and recurses
//! into the hanging subtrees, each at most half the size of its recursion
//! input. Edges not on any peeled path are glue edges. Root paths decompose
//! separately into segments of roughly halving length; both shapes cap the
//! per-vertex bookkeeping of the construction at a logarithmic factor.

use std::fmt::Write as _;

use thiserror::Error;

use crate::path::Path;
use crate::tree::BfsTree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("cannot segment an empty path")]
    EmptyPath,
}

/// One vertex-disjoint tree path, shallow end first.
#[derive(Debug, Clone)]
pub struct HeavyPath {
    pub level: u32,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Heavy-path decomposition of the reachable part of a BFS tree.
#[derive(Debug)]
pub struct TreeDecomposition {
    pub paths: Vec<HeavyPath>,
    /// Glue edges: tree edges not covered by any path, ascending.
    pub glue_edges: Vec<usize>,
    glue_flag: Vec<bool>,
    path_of_vertex: Vec<Option<u32>>,
    path_of_edge: Vec<Option<u32>>,
}

impl TreeDecomposition {
    pub fn is_glue(&self, e: usize) -> bool {
        self.glue_flag[e]
    }

    /// Index of the path covering a tree edge; `None` for glue edges.
    pub fn path_of_edge(&self, e: usize) -> Option<usize> {
        self.path_of_edge[e].map(|i| i as usize)
    }

    pub fn path_of_vertex(&self, v: usize) -> Option<usize> {
        self.path_of_vertex[v].map(|i| i as usize)
    }

    /// Covered tree edges, ascending.
    pub fn covered_edges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.path_of_edge.len())
            .filter(|&e| self.path_of_edge[e].is_some())
            .collect();
        out.sort_unstable();
        out
    }

    /// Inspection dump: one line per path, then one per glue edge.
    pub fn dump(&self, tree: &BfsTree) -> String {
        let mut out = String::new();
        for p in &self.paths {
            let verts: Vec<String> = p.vertices.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "psi {} {}", p.level, verts.join(" "));
        }
        for &e in &self.glue_edges {
            let deep = tree.deep_of(e);
            let shallow = tree
                .parent(deep)
                .map(|(p, _)| p)
                .expect("glue edges have a parent side");
            let _ = writeln!(out, "glue {shallow} {deep}");
        }
        out
    }
}

/// Decompose the reachable part of `tree`. Deterministic: heavy-child ties
/// break toward the smaller vertex id.
pub fn heavy_path_decompose(tree: &BfsTree) -> TreeDecomposition {
    let num_vertices = tree.vertex_count();
    let num_edges = tree.edge_count();
    let mut size = vec![0u32; num_vertices];
    subtree_sizes(tree, tree.source(), &mut size);
    debug_assert_eq!(size[tree.source()] as usize, tree.reachable_count());

    let mut paths = Vec::new();
    let mut glue_edges = Vec::new();
    let mut glue_flag = vec![false; num_edges];
    let mut path_of_vertex = vec![None; num_vertices];
    let mut path_of_edge = vec![None; num_edges];

    let mut worklist: Vec<(usize, u32)> = vec![(tree.source(), 0)];
    while let Some((root, level)) = worklist.pop() {
        let input_size = size[root];
        let mut vertices = vec![root];
        let mut edges = Vec::new();
        let mut cur = root;
        loop {
            let heavy = tree
                .children(cur)
                .iter()
                .copied()
                .min_by_key(|&(c, _)| (std::cmp::Reverse(size[c]), c));
            match heavy {
                None => break,
                Some((c, e)) => {
                    vertices.push(c);
                    edges.push(e);
                    cur = c;
                }
            }
        }
        let idx = paths.len() as u32;
        for &v in &vertices {
            path_of_vertex[v] = Some(idx);
        }
        for &e in &edges {
            path_of_edge[e] = Some(idx);
        }
        let on_path: std::collections::HashSet<usize> = vertices.iter().copied().collect();
        for &v in &vertices {
            for &(c, e) in tree.children(v) {
                if on_path.contains(&c) {
                    continue;
                }
                assert!(
                    2 * size[c] <= input_size,
                    "hanging subtree exceeds half of its recursion input"
                );
                glue_flag[e] = true;
                glue_edges.push(e);
                worklist.push((c, level + 1));
            }
        }
        paths.push(HeavyPath {
            level,
            vertices,
            edges,
        });
    }
    glue_edges.sort_unstable();

    // Paths are discovered in stack order; normalize to a stable order by
    // (level, first vertex) so output indексes are reproducible.
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by_key(|&i| (paths[i].level, paths[i].vertices[0]));
    let mut renumber = vec![0u32; paths.len()];
    for (new_idx, &old_idx) in order.iter().enumerate() {
        renumber[old_idx] = new_idx as u32;
    }
    let mut sorted_paths: Vec<HeavyPath> = order.iter().map(|&i| paths[i].clone()).collect();
    for slot in path_of_vertex.iter_mut().flatten() {
        *slot = renumber[*slot as usize];
    }
    for slot in path_of_edge.iter_mut().flatten() {
        *slot = renumber[*slot as usize];
    }
    sorted_paths.shrink_to_fit();

    TreeDecomposition {
        paths: sorted_paths,
        glue_edges,
        glue_flag,
        path_of_vertex,
        path_of_edge,
    }
}

fn subtree_sizes(tree: &BfsTree, root: usize, size: &mut [u32]) {
    // Iterative post-order.
    let mut stack = vec![(root, false)];
    while let Some((v, processed)) = stack.pop() {
        if processed {
            let mut s = 1;
            for &(c, _) in tree.children(v) {
                s += size[c];
            }
            size[v] = s;
        } else {
            stack.push((v, true));
            for &(c, _) in tree.children(v) {
                stack.push((c, false));
            }
        }
    }
}

/// Halving segmentation of a root path of `len >= 1` edges: boundary `j`
/// sits at prefix length `ceil(sum_{l=1..j} len/2^l)`; the at-most-two
/// trailing edges left over merge into the last segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDecomposition {
    pub path_len: usize,
    /// Edge-position ranges `[start, end)`, consecutive, covering `0..path_len`.
    pub segments: Vec<(usize, usize)>,
}

impl SegmentDecomposition {
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Which segment an edge position falls into.
    pub fn segment_of(&self, pos: usize) -> usize {
        debug_assert!(pos < self.path_len);
        self.segments
            .iter()
            .position(|&(a, b)| a <= pos && pos < b)
            .unwrap()
    }
}

pub fn segment_decompose_len(path_len: usize) -> Result<SegmentDecomposition, DecompositionError> {
    if path_len == 0 {
        return Err(DecompositionError::EmptyPath);
    }
    let k = (path_len as f64).log2().floor() as usize;
    // Exact cumulative boundaries: ceil(len * (2^j - 1) / 2^j).
    let mut segments = Vec::with_capacity(k.max(1));
    let mut start = 0usize;
    for j in 1..=k {
        let num = path_len * ((1 << j) - 1);
        let boundary = num.div_ceil(1 << j);
        if boundary > start {
            segments.push((start, boundary));
            start = boundary;
        }
    }
    if segments.is_empty() {
        segments.push((0, path_len));
    } else {
        // Merge the residual (at most two edges) into the last segment.
        debug_assert!(path_len - start <= 2);
        let last = segments.last_mut().unwrap();
        last.1 = path_len;
    }
    Ok(SegmentDecomposition {
        path_len,
        segments,
    })
}

/// Segmentation of a concrete path.
pub fn segment_decompose(pi: &Path) -> Result<SegmentDecomposition, DecompositionError> {
    segment_decompose_len(pi.len())
}

/// Per-vertex view of how the root path meets the decomposition: its glue
/// edges and the paths sharing at least one edge with it, in root-to-vertex
/// order.
#[derive(Debug, Clone)]
pub struct RootPathProfile {
    /// Glue edges on the root path, as (edge id, position).
    pub glue: Vec<(usize, usize)>,
    /// `(path index, first position, last position)` of each decomposition
    /// path sharing an edge with the root path; the shared run is contiguous.
    pub paths: Vec<(usize, usize, usize)>,
}

/// Profile of the root path of `v` against the decomposition.
pub fn root_path_profile(td: &TreeDecomposition, tree: &BfsTree, v: usize) -> RootPathProfile {
    let pi = tree
        .path_from_root(v)
        .expect("profile is defined for reachable vertices");
    let mut glue = Vec::new();
    let mut paths: Vec<(usize, usize, usize)> = Vec::new();
    for (pos, &e) in pi.edges().iter().enumerate() {
        match td.path_of_edge(e) {
            None => glue.push((e, pos)),
            Some(idx) => match paths.last_mut() {
                Some((cur, _, last)) if *cur == idx => *last = pos,
                _ => paths.push((idx, pos, pos)),
            },
        }
    }
    debug_assert!(
        {
            let mut seen: Vec<usize> = paths.iter().map(|&(i, _, _)| i).collect();
            seen.dedup();
            seen.len() == paths.len()
        },
        "a decomposition path meets a root path in one contiguous run"
    );
    RootPathProfile { glue, paths }
}

/// First and last segments that meet the given run of on-path positions
/// without being fully inside it. `run` is the contiguous `[lo, hi]` edge
/// positions shared with one decomposition path.
pub fn partial_overlap_segments(
    sd: &SegmentDecomposition,
    run: (usize, usize),
) -> (Option<usize>, Option<usize>) {
    let (lo, hi) = run;
    debug_assert!(lo <= hi && hi < sd.path_len);
    let mut upper = None;
    let mut lower = None;
    for (idx, &(a, b)) in sd.segments.iter().enumerate() {
        let meets = a <= hi && lo < b;
        if !meets {
            continue;
        }
        let inside = lo <= a && b <= hi + 1;
        if !inside {
            if upper.is_none() {
                upper = Some(idx);
            }
            lower = Some(idx);
        }
    }
    (upper, lower)
}
