#![allow(dead_code)]

use std::collections::VecDeque;

use eqtree::constructive::{compute_split_params, SolverState};
use eqtree::generators::{random_d_degenerate, Attach, SplitMix64};
use eqtree::graph::{degeneracy, degree_descending_order, Graph};
use eqtree::{Color, VertexId};

/// Arc `tail -> head` exists when some unprotected vertex of `tail` has at
/// most one neighbor in `head`. Computed straight from the definition.
pub fn arcs_by_definition(graph: &Graph, colors: &[Color], protected: &[bool], k: usize) -> Vec<Vec<bool>> {
    let mut arc = vec![vec![false; k + 1]; k + 1];
    for x in 0..colors.len() {
        if colors[x] == 0 || protected[x] {
            continue;
        }
        for head in 1..=k as Color {
            if head == colors[x] {
                continue;
            }
            let hits = graph.neighbors(x).iter().filter(|&&u| colors[u] == head).count();
            if hits <= 1 {
                arc[colors[x] as usize][head as usize] = true;
            }
        }
    }
    arc
}

/// Distance from each class to the nearest small class along arcs, by
/// plain BFS over the reversed arc relation.
pub fn distances_to_small(arc: &[Vec<bool>], sizes: &[usize], t: usize) -> Vec<Option<usize>> {
    let k = sizes.len();
    let mut dist = vec![None; k + 1];
    let mut queue = VecDeque::new();
    for c in 1..=k {
        if sizes[c - 1] < t {
            dist[c] = Some(0);
            queue.push_back(c);
        }
    }
    while let Some(h) = queue.pop_front() {
        for tail in 1..=k {
            if dist[tail].is_none() && arc[tail][h] {
                dist[tail] = Some(dist[h].unwrap() + 1);
                queue.push_back(tail);
            }
        }
    }
    dist
}

/// A state at the start of extension with nothing protected except the
/// virtual clique, over a random `d`-degenerate graph.
pub fn fresh_state(n: usize, d: usize, k: usize, seed: u64, debug: bool) -> Option<SolverState> {
    let g = random_d_degenerate(n, d, Attach::Skewed, seed).ok()?;
    fresh_state_for(&g, k, debug)
}

pub fn fresh_state_for(g: &Graph, k: usize, debug: bool) -> Option<SolverState> {
    let order = degree_descending_order(g).order;
    let degrees: Vec<usize> = order.iter().map(|&v| g.degree(v)).collect();
    let d = degeneracy(g);
    let mut params = compute_split_params(g.vertex_count(), k, d, &degrees).ok()?;
    params.mu = 0;
    Some(SolverState::new(g, params, d, g.max_degree(), order, &[], debug))
}

/// Uniform random graph `G(n, p)` with `p = num / 16`.
pub fn gnp(n: usize, num: u64, rng: &mut SplitMix64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.below(16) < num {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Every labeled graph on `n` vertices, one per edge subset.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n, &edges)
    })
}
