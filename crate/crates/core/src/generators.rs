//! Seeded instance generators.
//!
//! All randomness comes from [`SplitMix64`], so a `GenSpec` maps to the same
//! graph on every platform.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("random d-degenerate graph needs n > d (n = {n}, d = {d})")]
    TooFewVertices { n: usize, d: usize },
    #[error("cycle needs at least 3 vertices, got {0}")]
    ShortCycle(usize),
    #[error("treewidth gadget needs d >= 2 and s_count >= 1 (d = {d}, s_count = {s_count})")]
    GadgetParams { d: usize, s_count: usize },
    #[error("no graph with maximum degree >= {min_max_degree} after {attempts} attempts")]
    DegreeTargetMissed { min_max_degree: usize, attempts: u64 },
}

/// SplitMix64 (Steele, Lea and Flood).
///
/// ```text
/// state = state + 0x9E3779B97F4A7C15          (wrapping)
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9     (wrapping)
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB     (wrapping)
/// return z ^ (z >> 31)
/// ```
///
/// Bounded draws use the multiply-shift reduction
/// `below(b) = (next() as u128 * b as u128) >> 64`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Value in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attach {
    /// Earlier vertices chosen uniformly.
    #[default]
    Uniform,
    /// Earlier vertex `j` chosen with weight `degree(j) + 1`.
    Skewed,
}

/// Prefix sums over vertex weights for weighted draws.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick { tree: vec![0; n + 1] }
    }

    fn add(&mut self, i: usize, delta: i64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `x`.
    fn find(&self, mut x: u64) -> usize {
        let mut pos = 0;
        let mut step = self.tree.len().next_power_of_two() >> 1;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= x {
                x -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// Random graph of degeneracy exactly `d`.
///
/// Vertices `0..=d` form `K_{d+1}`; every later vertex `i` joins `d` distinct
/// vertices among `0..i`. Each vertex thus has at most `d` neighbors with a
/// larger id, and the clique forces degeneracy `d`.
pub fn random_d_degenerate(n: usize, d: usize, attach: Attach, seed: u64) -> Result<Graph, GenError> {
    if n <= d {
        return Err(GenError::TooFewVertices { n, d });
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(n * d);
    let mut degree = vec![0usize; n];
    for a in 0..=d {
        for b in a + 1..=d {
            edges.push((a, b));
        }
    }
    degree[..=d].fill(d);
    let mut weights = Fenwick::new(n);
    if attach == Attach::Skewed {
        for (v, &deg) in degree.iter().enumerate().take(d + 1) {
            weights.add(v, deg as i64 + 1);
        }
    }
    let mut chosen: Vec<VertexId> = Vec::with_capacity(d);
    let mut total = ((d + 1) * (d + 1)) as u64;
    for i in d + 1..n {
        chosen.clear();
        match attach {
            Attach::Uniform => {
                while chosen.len() < d {
                    let j = rng.below(i as u64) as usize;
                    if !chosen.contains(&j) {
                        chosen.push(j);
                    }
                }
            }
            Attach::Skewed => {
                let mut remaining = total;
                for _ in 0..d {
                    let j = weights.find(rng.below(remaining));
                    let w = degree[j] as u64 + 1;
                    weights.add(j, -(w as i64));
                    remaining -= w;
                    chosen.push(j);
                }
                for &j in &chosen {
                    // Restore with the incremented degree.
                    weights.add(j, degree[j] as i64 + 2);
                }
                total += 2 * d as u64 + 1;
                weights.add(i, d as i64 + 1);
            }
        }
        for &j in &chosen {
            edges.push((j, i));
            degree[j] += 1;
        }
        degree[i] = d;
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Seed used by attempt `attempt` of a retried generation.
pub fn attempt_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(SplitMix64::GAMMA))
}

/// Like [`random_d_degenerate`], retrying with [`attempt_seed`] until the
/// maximum degree reaches `min_max_degree`.
pub fn random_d_degenerate_with_max_degree(
    n: usize,
    d: usize,
    attach: Attach,
    seed: u64,
    min_max_degree: usize,
    max_attempts: u64,
) -> Result<Graph, GenError> {
    for attempt in 0..max_attempts {
        let g = random_d_degenerate(n, d, attach, attempt_seed(seed, attempt))?;
        if g.max_degree() >= min_max_degree {
            return Ok(g);
        }
    }
    Err(GenError::DegreeTargetMissed {
        min_max_degree,
        attempts: max_attempts,
    })
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    Graph::from_edges(a + b, &edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::ShortCycle(n));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges))
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// `K_d` on `0..d` joined to an independent set on `d..d + s_count`.
///
/// With `s_count >= 2d - 3` it has no equitable tree-(d-1)-coloring.
pub fn treewidth_gadget(d: usize, s_count: usize) -> Result<Graph, GenError> {
    if d < 2 || s_count < 1 {
        return Err(GenError::GadgetParams { d, s_count });
    }
    let mut edges: Vec<_> = (0..d).flat_map(|u| (u + 1..d).map(move |v| (u, v))).collect();
    edges.extend((0..d).flat_map(|h| (d..d + s_count).map(move |s| (h, s))));
    Ok(Graph::from_edges(d + s_count, &edges))
}

/// Serializable description of one generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    RandomDDegenerate {
        n: usize,
        d: usize,
        #[serde(default)]
        attach: Attach,
        /// Regenerate with derived seeds until the maximum degree reaches this.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_max_degree: Option<usize>,
        #[serde(default)]
        seed: u64,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    TreewidthGadget {
        d: usize,
        s_count: usize,
    },
}

pub const MAX_REGENERATION_ATTEMPTS: u64 = 1000;

impl GenSpec {
    pub fn generate(&self) -> Result<Graph, GenError> {
        match *self {
            GenSpec::RandomDDegenerate {
                n,
                d,
                attach,
                min_max_degree: Some(target),
                seed,
            } => random_d_degenerate_with_max_degree(n, d, attach, seed, target, MAX_REGENERATION_ATTEMPTS),
            GenSpec::RandomDDegenerate { n, d, attach, seed, .. } => random_d_degenerate(n, d, attach, seed),
            GenSpec::CompleteBipartite { a, b } => Ok(complete_bipartite(a, b)),
            GenSpec::Complete { n } => Ok(complete(n)),
            GenSpec::Cycle { n } => cycle(n),
            GenSpec::Path { n } => Ok(path(n)),
            GenSpec::TreewidthGadget { d, s_count } => treewidth_gadget(d, s_count),
        }
    }

    /// Copy with the random seed replaced; deterministic kinds are unchanged.
    pub fn with_seed(&self, new_seed: u64) -> GenSpec {
        let mut spec = self.clone();
        if let GenSpec::RandomDDegenerate { seed, .. } = &mut spec {
            *seed = new_seed;
        }
        spec
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            GenSpec::RandomDDegenerate { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GenSpec::RandomDDegenerate { .. } => "random-d-degenerate",
            GenSpec::CompleteBipartite { .. } => "complete-bipartite",
            GenSpec::Complete { .. } => "complete",
            GenSpec::Cycle { .. } => "cycle",
            GenSpec::Path { .. } => "path",
            GenSpec::TreewidthGadget { .. } => "treewidth-gadget",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::degeneracy;

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of the published SplitMix64 for seed 0.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(42);
        assert!((0..1000).all(|_| rng.below(7) < 7));
    }

    #[test]
    fn fenwick_find() {
        let mut f = Fenwick::new(4);
        for (i, w) in [3, 0, 2, 5].into_iter().enumerate() {
            f.add(i, w);
        }
        let picks: Vec<_> = (0..10).map(|x| f.find(x)).collect();
        assert_eq!(picks, vec![0, 0, 0, 2, 2, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn smallest_random_graph_is_a_clique() {
        let g = random_d_degenerate(4, 3, Attach::Uniform, 9).unwrap();
        assert_eq!(g, complete(4));
        assert!(random_d_degenerate(3, 3, Attach::Uniform, 9).is_err());
    }

    #[test]
    fn d1_uniform_is_a_tree() {
        let g = random_d_degenerate(50, 1, Attach::Uniform, 3).unwrap();
        assert_eq!(g.edge_count(), 49);
        assert_eq!(degeneracy(&g), 1);
    }

    #[test]
    fn random_graphs_have_exact_degeneracy() {
        for d in 1..6 {
            for attach in [Attach::Uniform, Attach::Skewed] {
                let g = random_d_degenerate(120, d, attach, d as u64).unwrap();
                assert_eq!(degeneracy(&g), d);
                assert_eq!(g.edge_count(), d * (d + 1) / 2 + (120 - d - 1) * d);
            }
        }
    }

    #[test]
    fn skewed_reaches_high_degree() {
        let hits = (0..100)
            .filter(|&s| random_d_degenerate(500, 2, Attach::Skewed, s).unwrap().max_degree() >= 20)
            .count();
        assert!(hits >= 95, "only {hits} of 100 seeds reached max degree 20");
    }

    #[test]
    fn named_families() {
        let k99 = complete_bipartite(9, 9);
        assert_eq!((k99.vertex_count(), k99.edge_count()), (18, 81));
        assert_eq!(cycle(3).unwrap(), complete(3));
        assert_eq!(path(1).vertex_count(), 1);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn gadget_shapes() {
        let g = treewidth_gadget(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 12));
        assert_eq!(degeneracy(&g), 3);
        assert_eq!(treewidth_gadget(2, 1).unwrap(), complete(3));
        let sharp = treewidth_gadget(5, 7).unwrap();
        assert_eq!(sharp.vertex_count(), 12);
        assert_eq!(degeneracy(&sharp), 5);
        assert!(treewidth_gadget(1, 3).is_err());
        assert!(treewidth_gadget(3, 0).is_err());
    }

    #[test]
    fn genspec_json() {
        let spec: GenSpec =
            serde_json::from_str(r#"{"kind":"random-d-degenerate","n":30,"d":2,"attach":"skewed","seed":5}"#).unwrap();
        assert_eq!(
            spec.generate().unwrap(),
            random_d_degenerate(30, 2, Attach::Skewed, 5).unwrap()
        );
        let gadget: GenSpec = serde_json::from_str(r#"{"kind":"treewidth-gadget","d":4,"s_count":5}"#).unwrap();
        assert_eq!(gadget.generate().unwrap().vertex_count(), 9);
        assert!(serde_json::from_str::<GenSpec>(r#"{"kind":"hypercube","n":3}"#).is_err());
        let back: GenSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn regeneration_is_deterministic() {
        let a = random_d_degenerate_with_max_degree(100, 2, Attach::Skewed, 11, 20, 1000).unwrap();
        let b = random_d_degenerate_with_max_degree(100, 2, Attach::Skewed, 11, 20, 1000).unwrap();
        assert_eq!(a, b);
        assert!(a.max_degree() >= 20);
        assert!(matches!(
            random_d_degenerate_with_max_degree(10, 2, Attach::Skewed, 1, 50, 3),
            Err(GenError::DegreeTargetMissed { .. })
        ));
    }
}
