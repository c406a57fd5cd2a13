//! Immutable undirected graph with stable edge identifiers.
//!
//! Edge ids equal input order and are normative: they seed the tie-break
//! weights, so the same edge list always yields the same trees, replacement
//! paths and output structures.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Undirected simple graph. Vertices are `0..n`, edges are indexed by their
/// 0-based position in the input edge list.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            let key = (u.min(v), u.max(v));
            if index.insert(key, id).is_some() {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        Ok(Graph {
            n,
            edges,
            adj,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` as `(neighbor, edge id)`, in input order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        debug_assert!(v == a || v == b);
        a + b - v
    }

    /// True iff the graph has no cycle (every edge is a bridge).
    pub fn is_forest(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push((root, usize::MAX));
            while let Some((v, via)) = stack.pop() {
                for &(w, e) in &self.adj[v] {
                    if e == via {
                        continue;
                    }
                    if seen[w] {
                        return false;
                    }
                    seen[w] = true;
                    stack.push((w, e));
                }
            }
        }
        true
    }

    /// Parse the text format: comment lines start with `#`, the first
    /// payload line is `p <n> <m>`, followed by exactly `m` lines
    /// `e <u> <v>`. Edge ids follow the order of appearance.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let fail = |line: usize, message: String| Err(ParseError { line, message });
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut edge_lines: Vec<usize> = Vec::new();

        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap();
            match (tag, header) {
                ("p", None) => {
                    let n = parse_field(parts.next(), line_no, "vertex count")?;
                    let m = parse_field(parts.next(), line_no, "edge count")?;
                    if parts.next().is_some() {
                        return fail(line_no, "trailing tokens after header".into());
                    }
                    header = Some((n, m));
                    edges.reserve(m);
                }
                ("p", Some(_)) => return fail(line_no, "duplicate header".into()),
                ("e", Some((_, m))) => {
                    if edges.len() == m {
                        return fail(line_no, format!("more than {m} edge lines"));
                    }
                    let u = parse_field(parts.next(), line_no, "edge endpoint")?;
                    let v = parse_field(parts.next(), line_no, "edge endpoint")?;
                    if parts.next().is_some() {
                        return fail(line_no, "trailing tokens after edge".into());
                    }
                    edges.push((u, v));
                    edge_lines.push(line_no);
                }
                ("e", None) => return fail(line_no, "edge line before header".into()),
                _ => return fail(line_no, format!("unrecognized line tag '{tag}'")),
            }
        }

        let Some((n, m)) = header else {
            return fail(0, "missing 'p <n> <m>' header".into());
        };
        if edges.len() != m {
            return fail(0, format!("expected {m} edges, found {}", edges.len()));
        }
        Graph::new(n, edges.clone()).map_err(|err| {
            // Point at the offending edge line where possible.
            let line = match &err {
                GraphError::SelfLoop(u) => edge_lines
                    .iter()
                    .zip(&edges)
                    .find(|(_, &(a, b))| a == b && a == *u)
                    .map(|(l, _)| *l),
                GraphError::DuplicateEdge(a, b) => edge_lines
                    .iter()
                    .zip(&edges)
                    .filter(|(_, &(x, y))| (x.min(y), x.max(y)) == (*a, *b))
                    .map(|(l, _)| *l)
                    .nth(1),
                GraphError::VertexOutOfRange { vertex, .. } => edge_lines
                    .iter()
                    .zip(&edges)
                    .find(|(_, &(a, b))| a == *vertex || b == *vertex)
                    .map(|(l, _)| *l),
            };
            ParseError {
                line: line.unwrap_or(0),
                message: err.to_string(),
            }
        })
    }

    /// Emit the text format this graph would parse back from.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.ok_or_else(|| ParseError {
        line,
        message: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| ParseError {
        line,
        message: format!("invalid {what}"),
    })
}

/// Deletion mask over a base graph. Queries treat flagged vertices and edges
/// (and edges with a deleted endpoint) as absent. Masks mutate in place so a
/// scan over many subgraphs never copies the graph.
#[derive(Debug, Clone)]
pub struct View<'g> {
    g: &'g Graph,
    vdel: Vec<bool>,
    edel: Vec<bool>,
    dirty_v: Vec<usize>,
    dirty_e: Vec<usize>,
}

impl<'g> View<'g> {
    pub fn new(g: &'g Graph) -> Self {
        View {
            g,
            vdel: vec![false; g.n()],
            edel: vec![false; g.m()],
            dirty_v: Vec::new(),
            dirty_e: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn delete_vertex(&mut self, v: usize) {
        if !self.vdel[v] {
            self.vdel[v] = true;
            self.dirty_v.push(v);
        }
    }

    pub fn undelete_vertex(&mut self, v: usize) {
        if self.vdel[v] {
            self.vdel[v] = false;
            self.dirty_v.retain(|&x| x != v);
        }
    }

    pub fn delete_edge(&mut self, e: usize) {
        if !self.edel[e] {
            self.edel[e] = true;
            self.dirty_e.push(e);
        }
    }

    pub fn undelete_edge(&mut self, e: usize) {
        if self.edel[e] {
            self.edel[e] = false;
            self.dirty_e.retain(|&x| x != e);
        }
    }

    /// Clear all deletions.
    pub fn reset(&mut self) {
        for v in self.dirty_v.drain(..) {
            self.vdel[v] = false;
        }
        for e in self.dirty_e.drain(..) {
            self.edel[e] = false;
        }
    }

    pub fn vertex_live(&self, v: usize) -> bool {
        !self.vdel[v]
    }

    pub fn edge_live(&self, e: usize) -> bool {
        let (a, b) = self.g.endpoints(e);
        !self.edel[e] && !self.vdel[a] && !self.vdel[b]
    }

    /// Live incident edges of `v` as `(neighbor, edge id)`.
    pub fn live_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.g
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&(w, e)| !self.edel[e] && !self.vdel[w])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_basic() {
        let g = Graph::parse("p 3 3\ne 0 1\ne 1 2\ne 0 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(g.edge_id(2, 0), Some(2));
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = Graph::parse("# header comment\n\np 2 1\n# inner\ne 0 1\n").unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn parse_rejects_self_loop_with_line() {
        let err = Graph::parse("p 2 1\ne 0 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("self-loop"));
    }

    #[test]
    fn parse_rejects_duplicate_edge() {
        let err = Graph::parse("p 2 2\ne 0 1\ne 0 1\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
        assert_eq!(err.line, 3);
    }

    #[test]
    fn parse_rejects_out_of_range_and_bad_header() {
        let err = Graph::parse("p 2 1\ne 0 5\n").unwrap_err();
        assert!(err.message.contains("out of range"));
        assert!(Graph::parse("p x 1\ne 0 1\n").is_err());
        assert!(Graph::parse("e 0 1\n").is_err());
        assert!(Graph::parse("p 3 2\ne 0 1\n").is_err());
    }

    #[test]
    fn view_masks_edges_and_vertices() {
        let g = Graph::parse("p 3 3\ne 0 1\ne 1 2\ne 0 2\n").unwrap();
        let mut view = View::new(&g);
        assert_eq!(view.live_neighbors(0).count(), 2);
        view.delete_edge(0);
        assert_eq!(view.live_neighbors(0).count(), 1);
        view.delete_vertex(2);
        assert_eq!(view.live_neighbors(0).count(), 0);
        assert!(!view.edge_live(1));
        view.reset();
        assert!(view.edge_live(0) && view.edge_live(1) && view.edge_live(2));
    }

    #[test]
    fn forest_detection() {
        let tree = Graph::parse("p 4 3\ne 0 1\ne 1 2\ne 1 3\n").unwrap();
        assert!(tree.is_forest());
        let cyc = Graph::parse("p 3 3\ne 0 1\ne 1 2\ne 0 2\n").unwrap();
        assert!(!cyc.is_forest());
    }

    proptest! {
        #[test]
        fn file_round_trip(n in 2usize..40, seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            let mut used = std::collections::HashSet::new();
            for _ in 0..(2 * n) {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v && used.insert((u.min(v), u.max(v))) {
                    edges.push((u, v));
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let reparsed = Graph::parse(&g.to_file_string()).unwrap();
            prop_assert_eq!(g.n(), reparsed.n());
            prop_assert_eq!(g.edges(), reparsed.edges());
        }
    }
}
