//! The BFS tree of unique weighted shortest paths, with ancestor machinery.

use thiserror::Error;

use crate::graph::{Graph, View};
use crate::path::Path;
use crate::search::{shortest_path_forest, SpForest};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {0} is unreachable from the source")]
    Unreachable(usize),
    #[error("edge {0} is not a tree edge")]
    NotTreeEdge(usize),
}

/// Shortest-path tree rooted at the source: the union of the unique weighted
/// shortest paths to every reachable vertex. Tree edges are oriented away
/// from the source (shallow endpoint, deep endpoint).
#[derive(Debug)]
pub struct BfsTree {
    source: usize,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<Option<u32>>,
    children: Vec<Vec<(usize, usize)>>,
    tree_edge: Vec<bool>,
    tree_edge_ids: Vec<usize>,
    deep_by_edge: Vec<usize>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    // Binary lifting table: up[k][v] = 2^k-th ancestor of v (v itself past the root).
    up: Vec<Vec<u32>>,
}

/// Build the BFS tree of `g` rooted at `s` from the weighted engine, so the
/// root-to-v path in the tree equals `shortest_path(g, s, v)` for every
/// reachable `v`.
pub fn build_bfs_tree(g: &Graph, s: usize) -> BfsTree {
    let view = View::new(g);
    let forest = shortest_path_forest(&view, s);
    BfsTree::from_forest(g, forest)
}

impl BfsTree {
    fn from_forest(g: &Graph, forest: SpForest) -> Self {
        let n = g.n();
        let s = forest.source;
        let mut children = vec![Vec::new(); n];
        let mut tree_edge = vec![false; g.m()];
        let mut tree_edge_ids = Vec::new();
        let mut deep_by_edge = vec![usize::MAX; g.m()];
        for v in 0..n {
            if let Some((p, e)) = forest.parent[v] {
                children[p].push((v, e));
                tree_edge[e] = true;
                tree_edge_ids.push(e);
                deep_by_edge[e] = v;
            }
        }
        tree_edge_ids.sort_unstable();

        // Euler intervals for O(1) ancestor tests.
        let mut tin = vec![0u32; n];
        let mut tout = vec![0u32; n];
        let mut clock = 0u32;
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        tin[s] = clock;
        clock += 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < children[v].len() {
                let (c, _) = children[v][*next];
                *next += 1;
                tin[c] = clock;
                clock += 1;
                stack.push((c, 0));
            } else {
                tout[v] = clock;
                stack.pop();
            }
        }

        // Binary lifting over reachable vertices.
        let max_depth = forest.dist.iter().flatten().copied().max().unwrap_or(0);
        let levels = (max_depth.max(1) as u64).ilog2() as usize + 1;
        let mut up = vec![vec![0u32; n]; levels];
        for (v, slot) in up[0].iter_mut().enumerate() {
            *slot = forest.parent[v].map_or(v as u32, |(p, _)| p as u32);
        }
        for k in 1..levels {
            for v in 0..n {
                up[k][v] = up[k - 1][up[k - 1][v] as usize];
            }
        }

        BfsTree {
            source: s,
            parent: forest.parent,
            depth: forest.dist,
            children,
            tree_edge,
            tree_edge_ids,
            deep_by_edge,
            tin,
            tout,
            up,
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// Host graph vertex count.
    pub fn vertex_count(&self) -> usize {
        self.depth.len()
    }

    /// Host graph edge count.
    pub fn edge_count(&self) -> usize {
        self.tree_edge.len()
    }

    pub fn depth(&self, v: usize) -> Option<u32> {
        self.depth[v]
    }

    pub fn is_reachable(&self, v: usize) -> bool {
        self.depth[v].is_some()
    }

    pub fn reachable_count(&self) -> usize {
        self.depth.iter().flatten().count()
    }

    /// `(parent, edge id)` of `v`, `None` for the source and unreachables.
    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[(usize, usize)] {
        &self.children[v]
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree_edge[e]
    }

    /// Tree edge ids in ascending order.
    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edge_ids
    }

    /// Endpoints of a tree edge as (shallow, deep).
    pub fn oriented(&self, g: &Graph, e: usize) -> Result<(usize, usize), TreeError> {
        if !self.tree_edge[e] {
            return Err(TreeError::NotTreeEdge(e));
        }
        let (a, b) = g.endpoints(e);
        let deep = self.deep_by_edge[e];
        Ok((a + b - deep, deep))
    }

    /// Root-to-`v` tree path; `None` when unreachable.
    pub fn path_from_root(&self, v: usize) -> Option<Path> {
        self.depth[v]?;
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = self.parent[cur] {
            vertices.push(p);
            edges.push(e);
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Some(Path::from_parts(vertices, edges))
    }

    /// True iff `a` is an ancestor of `d` (or equal), both reachable.
    pub fn is_ancestor(&self, a: usize, d: usize) -> bool {
        debug_assert!(self.is_reachable(a) && self.is_reachable(d));
        self.tin[a] <= self.tin[d] && self.tin[d] < self.tout[a]
    }

    /// Deepest common ancestor of `u` and `v`.
    pub fn lca(&self, u: usize, v: usize) -> Result<usize, TreeError> {
        for w in [u, v] {
            if !self.is_reachable(w) {
                return Err(TreeError::Unreachable(w));
            }
        }
        if self.is_ancestor(u, v) {
            return Ok(u);
        }
        if self.is_ancestor(v, u) {
            return Ok(v);
        }
        let mut x = u;
        for k in (0..self.up.len()).rev() {
            let cand = self.up[k][x] as usize;
            if !self.is_ancestor(cand, v) {
                x = cand;
            }
        }
        let l = self.up[0][x] as usize;
        debug_assert!(self.is_ancestor(l, u) && self.is_ancestor(l, v));
        Ok(l)
    }

    /// The tree-edge relation: two tree edges are related when both lie on a
    /// single root-to-vertex tree path, i.e. the deep endpoint of one is an
    /// ancestor (or equal) of the deep endpoint of the other.
    pub fn related(&self, e: usize, f: usize) -> Result<bool, TreeError> {
        for edge in [e, f] {
            if !self.tree_edge[edge] {
                return Err(TreeError::NotTreeEdge(edge));
            }
        }
        let b = self.deep_of(e);
        let d = self.deep_of(f);
        Ok(self.is_ancestor(b, d) || self.is_ancestor(d, b))
    }

    /// Deep endpoint of a tree edge (the child side).
    pub fn deep_of(&self, e: usize) -> usize {
        debug_assert!(self.tree_edge[e]);
        self.deep_by_edge[e]
    }

    /// True iff tree edge `e` lies on the root-to-`v` tree path.
    pub fn on_root_path(&self, v: usize, e: usize) -> bool {
        debug_assert!(self.tree_edge[e]);
        self.is_reachable(v) && self.is_ancestor(self.deep_of(e), v)
    }

    /// Index of tree edge `e` along the root-to-`v` path (0-based).
    pub fn edge_position(&self, e: usize) -> usize {
        self.depth[self.deep_of(e)].unwrap() as usize - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> (Graph, BfsTree) {
        // e0=(s,a), e1=(a,b), e2=(s,b)
        let g = Graph::parse("p 3 3\ne 0 1\ne 1 2\ne 0 2\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        (g, t)
    }

    #[test]
    fn triangle_tree_edges_and_depths() {
        let (_, t) = triangle();
        assert_eq!(t.tree_edges(), &[0, 2]);
        assert_eq!(t.depth(0), Some(0));
        assert_eq!(t.depth(1), Some(1));
        assert_eq!(t.depth(2), Some(1));
    }

    #[test]
    fn path_graph_tree_is_the_path() {
        let g = Graph::parse("p 4 3\ne 0 1\ne 1 2\ne 2 3\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        let p = t.path_from_root(3).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(t.tree_edges(), &[0, 1, 2]);
    }

    #[test]
    fn isolated_vertex_flagged_unreachable() {
        let g = Graph::parse("p 4 2\ne 0 1\ne 1 2\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        assert!(!t.is_reachable(3));
        assert!(t.path_from_root(3).is_none());
        assert_eq!(t.reachable_count(), 3);
    }

    #[test]
    fn lca_cases() {
        let g = Graph::parse("p 3 2\ne 0 1\ne 1 2\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        assert_eq!(t.lca(0, 2), Ok(0));
        assert_eq!(t.lca(2, 2), Ok(2));
        assert_eq!(t.lca(1, 2), Ok(1));
        let g2 = Graph::parse("p 4 2\ne 0 1\ne 1 2\n").unwrap();
        let t2 = build_bfs_tree(&g2, 0);
        assert_eq!(t2.lca(1, 3), Err(TreeError::Unreachable(3)));
    }

    #[test]
    fn lca_branching() {
        //      0
        //     / \
        //    1   2
        //   / \    \
        //  3   4    5
        let g = Graph::parse("p 6 5\ne 0 1\ne 0 2\ne 1 3\ne 1 4\ne 2 5\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        assert_eq!(t.lca(3, 4), Ok(1));
        assert_eq!(t.lca(3, 5), Ok(0));
        assert_eq!(t.lca(4, 2), Ok(0));
        assert_eq!(t.lca(1, 3), Ok(1));
    }

    #[test]
    fn related_relation() {
        let g = Graph::parse("p 6 5\ne 0 1\ne 0 2\ne 1 3\ne 1 4\ne 2 5\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        // Consecutive edges on one root-to-leaf path.
        assert_eq!(t.related(0, 2), Ok(true)); // (0,1) and (1,3)
        // Two different subtrees off the root.
        assert_eq!(t.related(0, 1), Ok(false)); // (0,1) and (0,2)
        assert_eq!(t.related(2, 3), Ok(false)); // (1,3) and (1,4)
        // Triangle case: both tree edges hang off the source.
        let (_, tri) = triangle();
        assert_eq!(tri.related(0, 2), Ok(false));
        assert_eq!(tri.related(0, 1), Err(TreeError::NotTreeEdge(1)));
    }

    #[test]
    fn orientation_is_shallow_deep() {
        let (g, t) = triangle();
        assert_eq!(t.oriented(&g, 0), Ok((0, 1)));
        assert_eq!(t.oriented(&g, 2), Ok((0, 2)));
        assert!(t.oriented(&g, 1).is_err());
    }

    #[test]
    fn root_path_membership_and_positions() {
        let g = Graph::parse("p 4 3\ne 0 1\ne 1 2\ne 2 3\n").unwrap();
        let t = build_bfs_tree(&g, 0);
        assert!(t.on_root_path(3, 1));
        assert!(t.on_root_path(1, 0));
        assert!(!t.on_root_path(1, 1));
        assert_eq!(t.edge_position(0), 0);
        assert_eq!(t.edge_position(2), 2);
    }
}
