//! Hop-distance BFS and the deterministic unique-shortest-path engine.
//!
//! Edge `i` carries the symbolic weight "1 hop plus a perturbation of
//! `2^i`". Path weights compare by hop count first, then by the exact
//! perturbation sum. Sums of distinct powers of two identify the edge set,
//! so every pair of distinct candidate paths compares strictly: shortest
//! paths are unique in every subgraph, and any subpath of a unique shortest
//! path is itself the unique shortest path between its endpoints. Both facts
//! are load-bearing for replacement-path selection and are covered by the
//! oracle suites.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::graph::View;
use crate::path::Path;

/// Exact perturbation sum: a fixed-width bitset over edge ids, compared as a
/// big-endian integer. Width is `ceil(m / 64)` words for the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    words: Box<[u64]>,
}

impl Perturbation {
    pub fn zero(num_edges: usize) -> Self {
        Perturbation {
            words: vec![0u64; num_edges.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn of_edges(num_edges: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zero(num_edges);
        for e in edges {
            p.set_bit(e);
        }
        p
    }

    pub fn set_bit(&mut self, edge: usize) {
        debug_assert!(
            self.words[edge / 64] & (1 << (edge % 64)) == 0,
            "edge {edge} already present: paths never repeat an edge"
        );
        self.words[edge / 64] |= 1 << (edge % 64);
    }

    fn word_with(&self, idx: usize, bit_edge: usize) -> u64 {
        let mut w = self.words[idx];
        if bit_edge / 64 == idx {
            w |= 1 << (bit_edge % 64);
        }
        w
    }

    /// Compare `self + 2^a_bit` against `other + 2^b_bit` without
    /// materializing either sum.
    pub fn cmp_with_bits(&self, a_bit: usize, other: &Self, b_bit: usize) -> Ordering {
        debug_assert_eq!(self.words.len(), other.words.len());
        for idx in (0..self.words.len()).rev() {
            let wa = self.word_with(idx, a_bit);
            let wb = other.word_with(idx, b_bit);
            match wa.cmp(&wb) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn with_bit(&self, edge: usize) -> Self {
        let mut p = self.clone();
        p.set_bit(edge);
        p
    }
}

impl Ord for Perturbation {
    fn cmp(&self, other: &Self) -> Ordering {
        for idx in (0..self.words.len()).rev() {
            match self.words[idx].cmp(&other.words[idx]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Perturbation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total path weight: hop count, ties broken by perturbation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TieBreakWeight {
    pub hops: u32,
    pub perturbation: Perturbation,
}

impl TieBreakWeight {
    pub fn of_path(num_edges: usize, path: &Path) -> Self {
        TieBreakWeight {
            hops: path.len() as u32,
            perturbation: Perturbation::of_edges(num_edges, path.edges().iter().copied()),
        }
    }
}

/// Hop distances from `s` in the masked graph; `None` marks unreachable.
pub fn hop_distances(view: &View, s: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; view.graph().n()];
    if !view.vertex_live(s) {
        return dist;
    }
    dist[s] = Some(0);
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for (w, _) in view.live_neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Hop distance from `s` to `t`, giving up once the frontier passes `cap`.
pub fn hop_distance_capped(view: &View, s: usize, t: usize, cap: Option<u32>) -> Option<u32> {
    if !view.vertex_live(s) || !view.vertex_live(t) {
        return None;
    }
    if s == t {
        return Some(0);
    }
    let mut dist = vec![u32::MAX; view.graph().n()];
    dist[s] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if let Some(cap) = cap {
            if d >= cap {
                return None;
            }
        }
        for (w, _) in view.live_neighbors(v) {
            if dist[w] == u32::MAX {
                if w == t {
                    return Some(d + 1);
                }
                dist[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Per-vertex parent assignments of the unique weighted shortest paths from
/// a source, over the whole masked graph.
#[derive(Debug)]
pub struct SpForest {
    pub source: usize,
    pub dist: Vec<Option<u32>>,
    /// `(parent vertex, edge id)`; `None` for the source and unreachables.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl SpForest {
    pub fn path_to(&self, v: usize) -> Option<Path> {
        self.dist[v]?;
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = self.parent[cur] {
            vertices.push(p);
            edges.push(e);
            cur = p;
        }
        debug_assert_eq!(cur, self.source);
        vertices.reverse();
        edges.reverse();
        Some(Path::from_parts(vertices, edges))
    }
}

/// Run the layered minimum-perturbation sweep. `restrict` masks the DP to a
/// vertex subset (used to prune single-target queries).
fn min_perturbation_sweep(
    view: &View,
    s: usize,
    dist: &[Option<u32>],
    restrict: Option<&[bool]>,
    max_depth: u32,
) -> Vec<Option<(usize, usize)>> {
    let g = view.graph();
    let n = g.n();
    let m = g.m();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut pert: Vec<Option<Perturbation>> = vec![None; n];
    pert[s] = Some(Perturbation::zero(m));

    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); max_depth as usize + 1];
    for v in 0..n {
        if let Some(d) = dist[v] {
            if d <= max_depth && restrict.is_none_or(|r| r[v]) {
                layers[d as usize].push(v);
            }
        }
    }

    for d in 1..=max_depth {
        for &v in &layers[d as usize] {
            let mut best: Option<(usize, usize)> = None;
            for (u, e) in view.live_neighbors(v) {
                if dist[u] != Some(d - 1) {
                    continue;
                }
                let Some(pu) = pert[u].as_ref() else { continue };
                match best {
                    None => best = Some((u, e)),
                    Some((bu, be)) => {
                        let cur = pert[bu].as_ref().unwrap();
                        let ord = pu.cmp_with_bits(e, cur, be);
                        debug_assert!(
                            ord != Ordering::Equal || (u, e) == (bu, be),
                            "distinct edge sets cannot tie"
                        );
                        if ord == Ordering::Less {
                            best = Some((u, e));
                        }
                    }
                }
            }
            if let Some((u, e)) = best {
                pert[v] = Some(pert[u].as_ref().unwrap().with_bit(e));
                parent[v] = Some((u, e));
            }
        }
    }
    parent
}

/// The unique weighted shortest path from `s` to `t` in the masked graph, or
/// `None` when `t` is unreachable. Deterministic: output depends only on the
/// edge list and the mask.
pub fn shortest_path(view: &View, s: usize, t: usize) -> Option<Path> {
    let g = view.graph();
    let dist = hop_distances(view, s);
    let dt = dist[t]?;
    if s == t {
        return Some(Path::from_parts(vec![s], vec![]));
    }

    // Keep only vertices on some minimum-hop s-t route: backward reachability
    // from t across BFS-DAG edges.
    let mut keep = vec![false; g.n()];
    keep[t] = true;
    let mut queue = VecDeque::new();
    queue.push_back(t);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        if d == 0 {
            continue;
        }
        for (u, _) in view.live_neighbors(v) {
            if !keep[u] && dist[u] == Some(d - 1) {
                keep[u] = true;
                queue.push_back(u);
            }
        }
    }

    let parent = min_perturbation_sweep(view, s, &dist, Some(&keep), dt);
    let forest = SpForest {
        source: s,
        dist,
        parent,
    };
    forest.path_to(t)
}

/// Unique weighted shortest paths from `s` to every reachable vertex.
pub fn shortest_path_forest(view: &View, s: usize) -> SpForest {
    let dist = hop_distances(view, s);
    let max_depth = dist.iter().flatten().copied().max().unwrap_or(0);
    let parent = min_perturbation_sweep(view, s, &dist, None, max_depth);
    SpForest {
        source: s,
        dist,
        parent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn perturbation_order_matches_integer_order() {
        let a = Perturbation::of_edges(130, [0, 1]); // 3
        let b = Perturbation::of_edges(130, [2, 3]); // 12
        assert!(a < b);
        let hi = Perturbation::of_edges(130, [129]);
        let lo = Perturbation::of_edges(130, (0..129).collect::<Vec<_>>());
        assert!(lo < hi);
        assert_eq!(a.cmp_with_bits(5, &a, 5), Ordering::Equal);
        assert_eq!(a.cmp_with_bits(2, &a, 3), Ordering::Less);
    }

    #[test]
    fn path_graph_unique_route() {
        // s - a - b
        let g = Graph::parse("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        let view = View::new(&g);
        let p = shortest_path(&view, 0, 2).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2]);
    }

    #[test]
    fn four_cycle_prefers_low_edge_ids() {
        // e0=(s,a), e1=(a,b), e2=(b,c), e3=(c,s); s=0, a=1, b=2, c=3.
        // Candidates s-a-b (perturbation 3) and s-c-b (perturbation 12).
        let g = Graph::parse("p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap();
        let view = View::new(&g);
        let p = shortest_path(&view, 0, 2).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2]);
        assert_eq!(p.edges(), &[0, 1]);
    }

    #[test]
    fn source_query_is_trivial() {
        let g = Graph::parse("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        let view = View::new(&g);
        let p = shortest_path(&view, 0, 0).unwrap();
        assert_eq!(p.len(), 0);
        assert_eq!(p.vertices(), &[0]);
    }

    #[test]
    fn unreachable_is_none() {
        let g = Graph::parse("p 4 2\ne 0 1\ne 2 3\n").unwrap();
        let view = View::new(&g);
        assert!(shortest_path(&view, 0, 3).is_none());
        assert_eq!(hop_distances(&view, 0)[3], None);
    }

    #[test]
    fn masked_edges_change_routes() {
        let g = Graph::parse("p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap();
        let mut view = View::new(&g);
        view.delete_edge(0);
        let p = shortest_path(&view, 0, 2).unwrap();
        assert_eq!(p.vertices(), &[0, 3, 2]);
        view.reset();
        view.delete_vertex(1);
        let p = shortest_path(&view, 0, 2).unwrap();
        assert_eq!(p.vertices(), &[0, 3, 2]);
    }

    #[test]
    fn capped_distance_early_exit() {
        let g = Graph::parse("p 5 4\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
        let view = View::new(&g);
        assert_eq!(hop_distance_capped(&view, 0, 4, Some(4)), Some(4));
        assert_eq!(hop_distance_capped(&view, 0, 4, Some(3)), None);
        assert_eq!(hop_distance_capped(&view, 0, 0, Some(0)), Some(0));
    }
}
