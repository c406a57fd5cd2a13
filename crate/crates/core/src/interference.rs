//! Interactions between replacement-path detours of different targets.
//!
//! Two detours interfere when they share a vertex outside both divergence
//! points and both targets. Interference splits by whether the two protected
//! tree edges are related (lie on one root path) or not; the unrelated kind
//! is what the iterative phase has to clear, and the classification below
//! (crossing / mutual / passive) drives its per-iteration handling.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::replacement::{PairKey, ReplacementPath, UncoveredPairs};
use crate::tree::BfsTree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterferenceError {
    #[error("interference is undefined for two pairs with the same target {0}")]
    SameTarget(usize),
}

/// A labeled set of uncovered pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    pub label: String,
    pub keys: BTreeSet<PairKey>,
}

impl PairSet {
    pub fn new(label: impl Into<String>) -> Self {
        PairSet {
            label: label.into(),
            keys: BTreeSet::new(),
        }
    }

    pub fn from_keys(label: impl Into<String>, keys: impl IntoIterator<Item = PairKey>) -> Self {
        PairSet {
            label: label.into(),
            keys: keys.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: &PairKey) -> bool {
        self.keys.contains(key)
    }

    /// Keys of one target, in edge order.
    pub fn of_target(&self, v: usize) -> impl Iterator<Item = PairKey> + '_ {
        self.keys.range((v, 0)..=(v, usize::MAX)).copied()
    }

    /// Distinct targets, ascending.
    pub fn targets(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.keys.iter().map(|&(v, _)| v).collect();
        out.dedup();
        out
    }
}

/// Detours of distinct targets interfere when they share a vertex outside
/// `{divergence(p), divergence(q), target(p), target(q)}`. Symmetric.
pub fn interferes(p: &ReplacementPath, q: &ReplacementPath) -> Result<bool, InterferenceError> {
    if p.target == q.target {
        return Err(InterferenceError::SameTarget(p.target));
    }
    debug_assert!(p.new_ending && q.new_ending);
    let excluded = [
        p.divergence.unwrap(),
        q.divergence.unwrap(),
        p.target,
        q.target,
    ];
    let dq: BTreeSet<usize> = q.detour.as_ref().unwrap().vertices().iter().copied().collect();
    Ok(p.detour
        .as_ref()
        .unwrap()
        .vertices()
        .iter()
        .any(|z| dq.contains(z) && !excluded.contains(z)))
}

/// Whether the detour of `p` meets the tree path from `lca(p.target,
/// q.target)` down to `q.target`, the endpoint included, the lca excluded.
/// Not symmetric.
pub fn branch_intersects(tree: &BfsTree, p: &ReplacementPath, q: &ReplacementPath) -> bool {
    debug_assert!(p.new_ending);
    let w = tree.lca(p.target, q.target).expect("targets are reachable");
    let wd = tree.depth(w).unwrap();
    p.detour
        .as_ref()
        .unwrap()
        .vertices()
        .iter()
        .any(|&z| tree.is_ancestor(z, q.target) && tree.depth(z).unwrap() > wd)
}

/// Precomputed interference structure over the uncovered pairs: for every
/// pair, its unrelated interferers, and for every such ordered pair whether
/// the first detour crosses the second target's branch.
#[derive(Debug, Default)]
pub struct InterferenceGraph {
    unrelated: BTreeMap<PairKey, Vec<PairKey>>,
    crossings: BTreeSet<(PairKey, PairKey)>,
}

impl InterferenceGraph {
    pub fn build(tree: &BfsTree, up: &UncoveredPairs) -> Self {
        // Bucket pairs by detour-interior vertex: two pairs of distinct
        // targets interfere iff some vertex is interior to both detours.
        let mut buckets: HashMap<usize, Vec<PairKey>> = HashMap::new();
        for (key, rp) in up.iter() {
            for &z in rp.detour_interior() {
                buckets.entry(z).or_default().push(*key);
            }
        }
        let mut interfering: BTreeSet<(PairKey, PairKey)> = BTreeSet::new();
        for bucket in buckets.values() {
            for (i, &a) in bucket.iter().enumerate() {
                for &b in &bucket[i + 1..] {
                    if a.0 != b.0 {
                        interfering.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }

        let mut unrelated: BTreeMap<PairKey, Vec<PairKey>> = BTreeMap::new();
        let mut crossings = BTreeSet::new();
        for &(a, b) in &interfering {
            if tree.related(a.1, b.1).expect("pair edges are tree edges") {
                continue;
            }
            unrelated.entry(a).or_default().push(b);
            unrelated.entry(b).or_default().push(a);
            let pa = up.get(&a).unwrap();
            let pb = up.get(&b).unwrap();
            if branch_intersects(tree, pa, pb) {
                crossings.insert((a, b));
            }
            if branch_intersects(tree, pb, pa) {
                crossings.insert((b, a));
            }
        }
        for partners in unrelated.values_mut() {
            partners.sort_unstable();
        }
        InterferenceGraph {
            unrelated,
            crossings,
        }
    }

    /// Unrelated interferers of `key`, over the whole uncovered universe.
    pub fn unrelated_partners(&self, key: &PairKey) -> &[PairKey] {
        self.unrelated.get(key).map_or(&[], Vec::as_slice)
    }

    /// Whether the detour of `a` crosses the branch of `b`'s target
    /// (meaningful for unrelated interferers).
    pub fn crosses(&self, a: &PairKey, b: &PairKey) -> bool {
        self.crossings.contains(&(*a, *b))
    }
}

/// Unrelated interferers of `pair` inside `universe` (the pair itself and
/// same-target pairs never qualify).
pub fn unrelated_interferers(
    ig: &InterferenceGraph,
    pair: &PairKey,
    universe: &PairSet,
) -> PairSet {
    PairSet::from_keys(
        format!("unrelated({}, {})", pair.0, pair.1),
        ig.unrelated_partners(pair)
            .iter()
            .filter(|k| universe.contains(k))
            .copied(),
    )
}

/// True iff no unrelated interference exists inside the set.
pub fn no_unrelated_interference(ig: &InterferenceGraph, set: &PairSet) -> bool {
    set.keys.iter().all(|key| {
        ig.unrelated_partners(key)
            .iter()
            .all(|partner| !set.contains(partner))
    })
}

/// Partition of a working set by interference shape.
#[derive(Debug)]
pub struct Classification {
    /// Pairs whose detour crosses the target branch of some unrelated
    /// interferer inside the set.
    pub crossing: PairSet,
    /// Non-crossing pairs with a non-crossing unrelated interferer inside
    /// the set; such partnerships are mutual.
    pub mutual: PairSet,
    /// Everything else: no unrelated interference left once crossing pairs
    /// are set aside.
    pub passive: PairSet,
}

/// Classify `working` (crossing first, then mutual against the frozen
/// crossing set, then the rest). The three parts partition the input.
pub fn classify(ig: &InterferenceGraph, working: &PairSet, iteration: u32) -> Classification {
    let mut crossing = PairSet::new(format!("crossing[{iteration}]"));
    for &key in &working.keys {
        let hit = ig
            .unrelated_partners(&key)
            .iter()
            .any(|partner| working.contains(partner) && ig.crosses(&key, partner));
        if hit {
            crossing.keys.insert(key);
        }
    }
    let mut mutual = PairSet::new(format!("mutual[{iteration}]"));
    for &key in &working.keys {
        if crossing.contains(&key) {
            continue;
        }
        let hit = ig
            .unrelated_partners(&key)
            .iter()
            .any(|partner| working.contains(partner) && !crossing.contains(partner));
        if hit {
            mutual.keys.insert(key);
        }
    }
    let mut passive = PairSet::new(format!("passive[{iteration}]"));
    for &key in &working.keys {
        if !crossing.contains(&key) && !mutual.contains(&key) {
            passive.keys.insert(key);
        }
    }
    Classification {
        crossing,
        mutual,
        passive,
    }
}

/// Census line for one iteration, JSON shaped `{iter, a, b, c}` for the
/// crossing / mutual / passive counts.
pub fn census_jsonl(iteration: u32, c: &Classification) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"iter\": {}, \"a\": {}, \"b\": {}, \"c\": {}}}",
        iteration,
        c.crossing.len(),
        c.mutual.len(),
        c.passive.len()
    );
    out
}
