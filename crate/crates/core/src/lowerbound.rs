//! Generators for hard instance families and the forced-fan audit.
//!
//! Each instance packs blocks where one designated path edge, once failed,
//! forces an entire bipartite fan of edges into any distance-preserving
//! structure: the unique post-failure shortest path to each fan vertex ends
//! with its own fan edge. Whatever is not reinforced on those path edges
//! therefore pins a quadratic-in-the-fan amount of backup. The audit checks
//! that containment concretely against a verified structure.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::numeric::{pow_floor, snap};
use crate::verify::verify_structure;

#[derive(Debug, Error, PartialEq)]
pub enum LbError {
    #[error("epsilon {0} outside {1}")]
    BadEpsilon(f64, &'static str),
    #[error("source count {0} outside [1, {1}]")]
    BadSourceCount(usize, usize),
    #[error("infeasible parameters ({reason}); minimum feasible n: {min_n:?}")]
    Infeasible {
        reason: String,
        min_n: Option<usize>,
    },
    #[error("input structure failed verification with {0} violations")]
    Unverified(usize),
    #[error("sidecar mismatch: {0}")]
    SidecarMismatch(String),
}

/// Vertex roles, aligned with vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Source,
    CopyStart,
    PathInner,
    PathEnd,
    LadderInner,
    LadderEnd,
    Fan,
    Relay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbParams {
    /// Designated path length per copy (rungs).
    pub d: usize,
    /// Blocks per source.
    pub k: usize,
    /// Values the closed-form sizing asked for before any shrink-to-fit.
    pub formula_d: usize,
    pub formula_k: usize,
    pub num_sources: usize,
    /// Fan block sizes, one per block (single-source: one per copy).
    pub x_sizes: Vec<usize>,
}

/// One costly path edge with its forced fan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiEdge {
    /// Block index (single-source: copy index).
    pub block: usize,
    /// Edge id of the path edge.
    pub edge: usize,
    /// Edge ids of the forced fan (one per fan vertex).
    pub fan: Vec<usize>,
    /// The unique replacement route from the source to the ladder end; the
    /// full witness path for fan vertex `x` is this route plus `x`.
    pub route: Vec<usize>,
    /// 1-based rung of the path edge within its copy.
    pub rung: usize,
    /// Source vertex this edge's witnesses are measured from.
    pub source: usize,
}

#[derive(Debug)]
pub struct LowerBoundInstance {
    pub graph: Graph,
    pub sources: Vec<usize>,
    pub epsilon: f64,
    pub params: LbParams,
    pub pi_edges: Vec<PiEdge>,
    pub roles: Vec<Role>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbAudit {
    pub ok: bool,
    pub pi_total: usize,
    pub pi_unreinforced: usize,
    /// Lower bound on backup implied by the unreinforced fans.
    pub backup_floor: usize,
    pub structure_backup: usize,
    /// Fan edges missing from the structure, as (path edge, fan edge).
    pub missing: Vec<(usize, usize)>,
}

const MAX_FEASIBILITY_SCAN: usize = 1 << 22;

fn ladder_len(d: usize, rung: usize) -> usize {
    6 + 2 * (d - rung)
}

/// Fixed vertices of one copy: the path (d+1) plus all ladder vertices.
fn copy_size(d: usize) -> usize {
    d * d + 6 * d + 1
}

fn single_source_params(n: usize, epsilon: f64) -> Option<(usize, usize)> {
    let d = snap(snap((n as f64).powf(epsilon)) / 4.0).floor() as usize;
    let k = pow_floor(n as f64, 1.0 - 2.0 * epsilon);
    if d < 1 || k < 1 {
        return None;
    }
    let fixed = 1 + k * copy_size(d);
    // Every copy needs at least one fan vertex.
    (n > fixed && n - fixed >= k).then_some((d, k))
}

/// Smallest n for which the single-source family is generable at this
/// epsilon, if any within the scan bound.
pub fn min_feasible_n_single(epsilon: f64) -> Option<usize> {
    (4..=MAX_FEASIBILITY_SCAN).find(|&n| single_source_params(n, epsilon).is_some())
}

/// Single-source hard instance on exactly `n` vertices.
pub fn gen_single_source(n: usize, epsilon: f64) -> Result<LowerBoundInstance, LbError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(LbError::BadEpsilon(epsilon, "(0, 1/2)"));
    }
    let Some((d, k)) = single_source_params(n, epsilon) else {
        return Err(LbError::Infeasible {
            reason: format!("n = {n} cannot host every fan at epsilon = {epsilon}"),
            min_n: min_feasible_n_single(epsilon),
        });
    };

    let x_total = n - (1 + k * copy_size(d));
    let x_base = x_total / k;
    let x_rem = x_total % k;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut roles: Vec<Role> = Vec::with_capacity(n);
    let mut pi_edges: Vec<PiEdge> = Vec::new();
    let mut x_sizes = Vec::with_capacity(k);
    roles.push(Role::Source);
    let alloc = |role: Role, roles: &mut Vec<Role>| {
        let id = roles.len();
        roles.push(role);
        id
    };

    for copy in 0..k {
        let x_count = x_base + usize::from(copy < x_rem);
        x_sizes.push(x_count);

        let mut pi: Vec<usize> = Vec::with_capacity(d + 1);
        for idx in 0..=d {
            let role = if idx == 0 {
                Role::CopyStart
            } else if idx == d {
                Role::PathEnd
            } else {
                Role::PathInner
            };
            pi.push(alloc(role, &mut roles));
        }
        edges.push((0, pi[0]));
        let mut rung_edge = Vec::with_capacity(d);
        for rung in 1..=d {
            rung_edge.push(edges.len());
            edges.push((pi[rung - 1], pi[rung]));
        }

        let mut ladder_of: Vec<Vec<usize>> = Vec::with_capacity(d);
        let mut z_of: Vec<usize> = Vec::with_capacity(d);
        for rung in 1..=d {
            let t = ladder_len(d, rung);
            let mut prev = pi[rung - 1];
            let mut verts = Vec::with_capacity(t);
            for step in 0..t {
                let role = if step + 1 == t {
                    Role::LadderEnd
                } else {
                    Role::LadderInner
                };
                let w = alloc(role, &mut roles);
                edges.push((prev, w));
                verts.push(w);
                prev = w;
            }
            z_of.push(prev);
            ladder_of.push(verts);
        }

        let xs: Vec<usize> = (0..x_count).map(|_| alloc(Role::Fan, &mut roles)).collect();
        for &x in &xs {
            edges.push((pi[d], x));
        }
        let mut fan_of: Vec<Vec<usize>> = vec![Vec::with_capacity(x_count); d];
        for &x in &xs {
            for rung in 1..=d {
                fan_of[rung - 1].push(edges.len());
                edges.push((x, z_of[rung - 1]));
            }
        }

        for rung in 1..=d {
            let mut route = vec![0];
            route.extend_from_slice(&pi[0..rung]);
            route.extend_from_slice(&ladder_of[rung - 1]);
            pi_edges.push(PiEdge {
                block: copy,
                edge: rung_edge[rung - 1],
                fan: std::mem::take(&mut fan_of[rung - 1]),
                route,
                rung,
                source: 0,
            });
        }
    }
    assert_eq!(roles.len(), n, "vertex budget must close exactly");

    let graph = Graph::new(n, edges).expect("generator emits a simple graph");
    assert_eq!(pi_edges.len(), k * d);
    Ok(LowerBoundInstance {
        graph,
        sources: vec![0],
        epsilon,
        params: LbParams {
            d,
            k,
            formula_d: d,
            formula_k: k,
            num_sources: 1,
            x_sizes,
        },
        pi_edges,
        roles,
    })
}

fn multi_fixed(n_sources: usize, k: usize, d: usize) -> usize {
    n_sources + n_sources * k * copy_size(d) + k
}

fn multi_source_params(n: usize, sources: usize, epsilon: f64) -> Option<(usize, usize, usize, usize)> {
    let base = n as f64 / (4.0 * sources as f64);
    if base <= 0.0 {
        return None;
    }
    let formula_d = snap(base.powf(epsilon)).floor() as usize;
    let formula_k = pow_floor(n as f64 / sources as f64, 1.0 - 2.0 * epsilon);
    if formula_d < 1 || formula_k < 1 {
        return None;
    }
    let fits = |d: usize, k: usize| {
        let fixed = multi_fixed(sources, k, d);
        n > fixed && n - fixed >= k
    };
    // The closed-form sizes overflow small n (the ladder constant dominates);
    // shrink d first, then k, keeping |V| = n exact.
    for d in (1..=formula_d).rev() {
        if fits(d, formula_k) {
            return Some((d, formula_k, formula_d, formula_k));
        }
    }
    for k in (1..formula_k).rev() {
        if fits(1, k) {
            return Some((1, k, formula_d, formula_k));
        }
    }
    None
}

pub fn min_feasible_n_multi(sources: usize, epsilon: f64) -> Option<usize> {
    (4..=MAX_FEASIBILITY_SCAN).find(|&n| multi_source_params(n, sources, epsilon).is_some())
}

/// Multi-source hard instance on exactly `n` vertices with `sources` source
/// vertices. Fan blocks are shared across sources through per-block relays.
pub fn gen_multi_source(
    n: usize,
    sources: usize,
    epsilon: f64,
) -> Result<LowerBoundInstance, LbError> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(LbError::BadEpsilon(epsilon, "(0, 1/2]"));
    }
    if sources < 1 || sources > n {
        return Err(LbError::BadSourceCount(sources, n));
    }
    let Some((d, k, formula_d, formula_k)) = multi_source_params(n, sources, epsilon) else {
        return Err(LbError::Infeasible {
            reason: format!(
                "n = {n} cannot host {sources} sources at epsilon = {epsilon}"
            ),
            min_n: min_feasible_n_multi(sources, epsilon),
        });
    };

    let x_total = n - multi_fixed(sources, k, d);
    let x_base = x_total / k;
    let x_rem = x_total % k;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut roles: Vec<Role> = Vec::with_capacity(n);
    let mut pi_edges: Vec<PiEdge> = Vec::new();

    for _ in 0..sources {
        roles.push(Role::Source);
    }
    let alloc = |role: Role, roles: &mut Vec<Role>| {
        let id = roles.len();
        roles.push(role);
        id
    };

    // Copies, grouped by (source, block).
    struct Copy {
        pi: Vec<usize>,
        rung_edge: Vec<usize>,
        ladders: Vec<Vec<usize>>,
        z: Vec<usize>,
    }
    let mut copies: Vec<Vec<Copy>> = Vec::with_capacity(sources);
    for src in 0..sources {
        let mut row = Vec::with_capacity(k);
        for _block in 0..k {
            let mut pi = Vec::with_capacity(d + 1);
            for idx in 0..=d {
                let role = if idx == 0 {
                    Role::CopyStart
                } else if idx == d {
                    Role::PathEnd
                } else {
                    Role::PathInner
                };
                pi.push(alloc(role, &mut roles));
            }
            edges.push((src, pi[0]));
            let mut rung_edge = Vec::with_capacity(d);
            for rung in 1..=d {
                rung_edge.push(edges.len());
                edges.push((pi[rung - 1], pi[rung]));
            }
            let mut ladders = Vec::with_capacity(d);
            let mut z = Vec::with_capacity(d);
            for rung in 1..=d {
                let t = ladder_len(d, rung);
                let mut prev = pi[rung - 1];
                let mut verts = Vec::with_capacity(t);
                for step in 0..t {
                    let role = if step + 1 == t {
                        Role::LadderEnd
                    } else {
                        Role::LadderInner
                    };
                    let w = alloc(role, &mut roles);
                    edges.push((prev, w));
                    verts.push(w);
                    prev = w;
                }
                z.push(prev);
                ladders.push(verts);
            }
            row.push(Copy {
                pi,
                rung_edge,
                ladders,
                z,
            });
        }
        copies.push(row);
    }

    // Relays and shared fan blocks.
    let mut x_sizes = Vec::with_capacity(k);
    for block in 0..k {
        let relay = alloc(Role::Relay, &mut roles);
        for src_row in copies.iter() {
            edges.push((relay, *src_row[block].pi.last().unwrap()));
        }
        let x_count = x_base + usize::from(block < x_rem);
        x_sizes.push(x_count);
        let xs: Vec<usize> = (0..x_count).map(|_| alloc(Role::Fan, &mut roles)).collect();
        for &x in &xs {
            edges.push((relay, x));
        }
        // Bipartite fans, recorded per (source, rung).
        let mut fans: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); d]; sources];
        for &x in &xs {
            for (src, src_row) in copies.iter().enumerate() {
                for rung in 1..=d {
                    fans[src][rung - 1].push(edges.len());
                    edges.push((x, src_row[block].z[rung - 1]));
                }
            }
        }
        for (src, src_row) in copies.iter().enumerate() {
            let copy = &src_row[block];
            for rung in 1..=d {
                let mut route = vec![src];
                route.extend_from_slice(&copy.pi[0..rung]);
                route.extend_from_slice(&copy.ladders[rung - 1]);
                pi_edges.push(PiEdge {
                    block,
                    edge: copy.rung_edge[rung - 1],
                    fan: std::mem::take(&mut fans[src][rung - 1]),
                    route,
                    rung,
                    source: src,
                });
            }
        }
    }
    assert_eq!(roles.len(), n, "vertex budget must close exactly");

    let graph = Graph::new(n, edges).expect("generator emits a simple graph");
    assert_eq!(pi_edges.len(), sources * k * d);
    pi_edges.sort_by_key(|p| p.edge);
    Ok(LowerBoundInstance {
        graph,
        sources: (0..sources).collect(),
        epsilon,
        params: LbParams {
            d,
            k,
            formula_d,
            formula_k,
            num_sources: sources,
            x_sizes,
        },
        pi_edges,
        roles,
    })
}

/// Sidecar file contents; edges are endpoint pairs so the file stands alone.
#[derive(Debug, Serialize, Deserialize)]
pub struct SidecarFile {
    pub epsilon: f64,
    pub n: usize,
    pub params: LbParams,
    pub pi_edges: Vec<SidecarPiEdge>,
    pub roles: Vec<Role>,
    pub sources: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SidecarPiEdge {
    pub block: usize,
    pub edge: (usize, usize),
    pub fan: Vec<(usize, usize)>,
    pub route: Vec<usize>,
    pub rung: usize,
    pub source: usize,
}

impl LowerBoundInstance {
    pub fn graph_file(&self) -> String {
        self.graph.to_file_string()
    }

    pub fn sidecar_json(&self) -> String {
        let pair = |e: usize| {
            let (u, v) = self.graph.endpoints(e);
            (u.min(v), u.max(v))
        };
        let file = SidecarFile {
            epsilon: self.epsilon,
            n: self.graph.n(),
            params: self.params.clone(),
            pi_edges: self
                .pi_edges
                .iter()
                .map(|p| SidecarPiEdge {
                    block: p.block,
                    edge: pair(p.edge),
                    fan: p.fan.iter().map(|&e| pair(e)).collect(),
                    route: p.route.clone(),
                    rung: p.rung,
                    source: p.source,
                })
                .collect(),
            roles: self.roles.clone(),
            sources: self.sources.clone(),
        };
        let mut s = serde_json::to_string(&file).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_files(graph_text: &str, sidecar_json: &str) -> Result<Self, LbError> {
        let graph =
            Graph::parse(graph_text).map_err(|e| LbError::SidecarMismatch(e.to_string()))?;
        let file: SidecarFile = serde_json::from_str(sidecar_json)
            .map_err(|e| LbError::SidecarMismatch(e.to_string()))?;
        if file.n != graph.n() || file.roles.len() != graph.n() {
            return Err(LbError::SidecarMismatch(format!(
                "sidecar n = {} against graph n = {}",
                file.n,
                graph.n()
            )));
        }
        let resolve = |(u, v): (usize, usize)| {
            graph
                .edge_id(u, v)
                .ok_or_else(|| LbError::SidecarMismatch(format!("edge ({u}, {v}) not in graph")))
        };
        let mut pi_edges = Vec::with_capacity(file.pi_edges.len());
        for p in file.pi_edges {
            pi_edges.push(PiEdge {
                block: p.block,
                edge: resolve(p.edge)?,
                fan: p.fan.into_iter().map(resolve).collect::<Result<_, _>>()?,
                route: p.route,
                rung: p.rung,
                source: p.source,
            });
        }
        Ok(LowerBoundInstance {
            graph,
            sources: file.sources,
            epsilon: file.epsilon,
            params: file.params,
            pi_edges,
            roles: file.roles,
        })
    }

    /// Printable parameter summary.
    pub fn summary(&self) -> String {
        let fan_min = self.params.x_sizes.iter().min().copied().unwrap_or(0);
        let fan_max = self.params.x_sizes.iter().max().copied().unwrap_or(0);
        let mut s = String::new();
        let _ = write!(
            s,
            "d={} k={} |Pi|={} fan_min={} fan_max={}",
            self.params.d,
            self.params.k,
            self.pi_edges.len(),
            fan_min,
            fan_max
        );
        if self.params.num_sources > 1 {
            let _ = write!(s, " K={}", self.params.num_sources);
        }
        s
    }

    /// Audit a verified structure: every unreinforced designated path edge
    /// must carry its whole fan inside `h`, and the implied backup floor
    /// must be met. Errors when `(h, reinforced)` does not verify.
    pub fn audit(
        &self,
        h: &BTreeSet<usize>,
        reinforced: &BTreeSet<usize>,
    ) -> Result<LbAudit, LbError> {
        let report = verify_structure(&self.graph, &self.sources, h, reinforced)
            .map_err(|e| LbError::SidecarMismatch(e.to_string()))?;
        if !report.ok {
            return Err(LbError::Unverified(report.violations.len()));
        }
        let mut missing = Vec::new();
        let mut backup_floor = 0usize;
        let mut pi_unreinforced = 0usize;
        for p in &self.pi_edges {
            if reinforced.contains(&p.edge) {
                continue;
            }
            pi_unreinforced += 1;
            for &f in &p.fan {
                if reinforced.contains(&f) {
                    continue;
                }
                backup_floor += 1;
                if !h.contains(&f) {
                    missing.push((p.edge, f));
                }
            }
        }
        let structure_backup = h.difference(reinforced).count();
        let ok = missing.is_empty() && structure_backup >= backup_floor;
        Ok(LbAudit {
            ok,
            pi_total: self.pi_edges.len(),
            pi_unreinforced,
            backup_floor,
            structure_backup,
            missing,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::View;
    use crate::search::hop_distances;

    #[test]
    fn single_source_256_quarter() {
        let inst = gen_single_source(256, 0.25).unwrap();
        assert_eq!(inst.params.d, 1);
        assert_eq!(inst.params.k, 16);
        assert_eq!(inst.graph.n(), 256);
        assert_eq!(inst.pi_edges.len(), 16);
        // Ladder length for the single rung.
        assert_eq!(ladder_len(1, 1), 6);
        // Per-copy share close to n/k - 1.
        let share = 256 / 16 - 1;
        for (i, &x) in inst.params.x_sizes.iter().enumerate() {
            let size = copy_size(1) + x;
            assert!(
                (size as isize - share as isize).abs() <= 1,
                "copy {i} holds {size}, expected about {share}"
            );
        }
        // Designated edges at least the closed-form floor when it holds.
        let floor = pow_floor(256.0, 0.75) / 5;
        assert!(inst.pi_edges.len() >= floor);
    }

    #[test]
    fn single_source_infeasible_reports_minimum() {
        let err = gen_single_source(256, 0.2).unwrap_err();
        match err {
            LbError::Infeasible { min_n, .. } => {
                assert_eq!(min_n, Some(1024), "first n with a nonzero path length");
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
        assert!(gen_single_source(256, 0.6).is_err());
        assert!(gen_single_source(1024, 0.2).is_ok());
    }

    #[test]
    fn connectivity_and_fan_disjointness() {
        let inst = gen_single_source(256, 0.25).unwrap();
        let view = View::new(&inst.graph);
        let dist = hop_distances(&view, 0);
        assert!(dist.iter().all(Option::is_some));
        let mut seen = BTreeSet::new();
        for p in &inst.pi_edges {
            for &f in &p.fan {
                assert!(seen.insert(f), "fans must be pairwise disjoint");
            }
        }
    }

    #[test]
    fn multi_source_512() {
        let inst = gen_multi_source(512, 4, 0.25).unwrap();
        assert_eq!(inst.graph.n(), 512);
        assert_eq!(inst.sources.len(), 4);
        assert_eq!(inst.params.formula_d, 2);
        assert_eq!(inst.params.formula_k, 11);
        assert_eq!(inst.params.k, 11);
        assert!(inst.params.d >= 1);
        assert_eq!(
            inst.pi_edges.len(),
            4 * inst.params.k * inst.params.d
        );
        let view = View::new(&inst.graph);
        for &s in &inst.sources {
            let dist = hop_distances(&view, s);
            assert!(dist.iter().all(Option::is_some));
        }
    }

    #[test]
    fn multi_source_shrinks_blocks_when_rungs_are_not_enough() {
        // At n = 256 with four sources even single-rung copies overflow the
        // vertex budget at the closed-form block count; the generator trims
        // blocks and still lands on n exactly.
        let inst = gen_multi_source(256, 4, 0.25).unwrap();
        assert_eq!(inst.graph.n(), 256);
        assert_eq!(inst.params.formula_d, 2);
        assert_eq!(inst.params.formula_k, 8);
        assert_eq!(inst.params.d, 1);
        assert!(inst.params.k < inst.params.formula_k);
        assert!(inst.params.x_sizes.iter().all(|&x| x >= 1));
        let view = crate::graph::View::new(&inst.graph);
        for &s in &inst.sources {
            assert!(hop_distances(&view, s).iter().all(Option::is_some));
        }
    }

    #[test]
    fn multi_source_collapses_to_single_shape() {
        // One source: same designated-edge budget discipline as the
        // single-source family, up to the relay indirection.
        let inst = gen_multi_source(1024, 1, 0.25).unwrap();
        assert_eq!(inst.sources, vec![0]);
        assert_eq!(inst.pi_edges.len(), inst.params.k * inst.params.d);
    }

    #[test]
    fn audit_accepts_full_graph_and_catches_deleted_fan() {
        let inst = gen_single_source(256, 0.25).unwrap();
        let all: BTreeSet<usize> = (0..inst.graph.m()).collect();
        let audit = inst.audit(&all, &BTreeSet::new()).unwrap();
        assert!(audit.ok);
        assert_eq!(audit.pi_unreinforced, audit.pi_total);
        assert!(audit.structure_backup >= audit.backup_floor);

        // Reinforce the whole designated set: floor collapses to zero.
        let pi: BTreeSet<usize> = inst.pi_edges.iter().map(|p| p.edge).collect();
        let audit = inst.audit(&all, &pi).unwrap();
        assert!(audit.ok);
        assert_eq!(audit.backup_floor, 0);

        // Delete one fan edge with its path edge unreinforced: verification
        // itself must now fail, which the audit surfaces as an error.
        let victim = inst.pi_edges[0].fan[0];
        let mut broken = all.clone();
        broken.remove(&victim);
        assert!(matches!(
            inst.audit(&broken, &BTreeSet::new()),
            Err(LbError::Unverified(_))
        ));
    }

    #[test]
    fn sidecar_round_trip() {
        let inst = gen_single_source(256, 0.25).unwrap();
        let back =
            LowerBoundInstance::from_files(&inst.graph_file(), &inst.sidecar_json()).unwrap();
        assert_eq!(back.graph.edges(), inst.graph.edges());
        assert_eq!(back.pi_edges, inst.pi_edges);
        assert_eq!(back.params, inst.params);
        assert_eq!(back.roles, inst.roles);
    }

    #[test]
    fn summary_shape() {
        let inst = gen_single_source(256, 0.25).unwrap();
        assert!(inst.summary().starts_with("d=1 k=16 |Pi|=16"));
        let multi = gen_multi_source(512, 4, 0.25).unwrap();
        assert!(multi.summary().contains("K=4"));
    }
}
