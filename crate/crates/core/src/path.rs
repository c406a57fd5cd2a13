//! Simple paths with both vertex and edge-id views.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("repeated vertex {0}")]
    RepeatedVertex(usize),
    #[error("empty vertex sequence")]
    Empty,
    #[error("paths do not share an endpoint")]
    Disconnected,
}

/// A simple path: consecutive vertices adjacent in the host graph, no vertex
/// repeated. A single vertex is a zero-length path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = std::collections::HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::RepeatedVertex(v));
            }
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let e = g
                .edge_id(w[0], w[1])
                .ok_or(PathError::NotAdjacent(w[0], w[1]))?;
            edges.push(e);
        }
        Ok(Path { vertices, edges })
    }

    /// Caller guarantees consistency; checked in debug builds only.
    pub(crate) fn from_parts(vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        debug_assert!(!vertices.is_empty());
        Path { vertices, edges }
    }

    /// Length in edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn last_edge(&self) -> Option<usize> {
        self.edges.last().copied()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Subpath from `x` to `y`; `x` must occur before `y`.
    pub fn subpath(&self, x: usize, y: usize) -> Option<Path> {
        let i = self.position(x)?;
        let j = self.position(y)?;
        if i > j {
            return None;
        }
        Some(Path {
            vertices: self.vertices[i..=j].to_vec(),
            edges: self.edges[i..j].to_vec(),
        })
    }

    /// Concatenate `other` after `self`; `other` must start at our last
    /// vertex and the result must still be simple.
    pub fn concat(&self, other: &Path) -> Result<Path, PathError> {
        if self.last() != other.first() {
            return Err(PathError::Disconnected);
        }
        let mut vertices = self.vertices.clone();
        for &v in &other.vertices[1..] {
            if vertices.contains(&v) {
                return Err(PathError::RepeatedVertex(v));
            }
            vertices.push(v);
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path { vertices, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Graph {
        Graph::parse("p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n").unwrap()
    }

    #[test]
    fn construction_and_accessors() {
        let g = square();
        let p = Path::new(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.edges(), &[0, 1]);
        assert_eq!(p.last_edge(), Some(1));
        let single = Path::new(&g, vec![3]).unwrap();
        assert_eq!(single.len(), 0);
        assert_eq!(single.last_edge(), None);
    }

    #[test]
    fn rejects_bad_sequences() {
        let g = square();
        assert_eq!(
            Path::new(&g, vec![0, 2]).unwrap_err(),
            PathError::NotAdjacent(0, 2)
        );
        assert_eq!(
            Path::new(&g, vec![0, 1, 0]).unwrap_err(),
            PathError::RepeatedVertex(0)
        );
        assert_eq!(Path::new(&g, vec![]).unwrap_err(), PathError::Empty);
    }

    #[test]
    fn subpath_and_concat() {
        let g = square();
        let p = Path::new(&g, vec![0, 1, 2]).unwrap();
        let q = p.subpath(1, 2).unwrap();
        assert_eq!(q.vertices(), &[1, 2]);
        assert!(p.subpath(2, 1).is_none());
        let r = Path::new(&g, vec![2, 3]).unwrap();
        let joined = p.concat(&r).unwrap();
        assert_eq!(joined.vertices(), &[0, 1, 2, 3]);
        assert_eq!(joined.edges(), &[0, 1, 2]);
        let bad = Path::new(&g, vec![3, 0]).unwrap();
        assert!(joined.concat(&bad).is_err());
    }
}
