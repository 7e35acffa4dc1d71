//! Immutable simple undirected graphs, vertex orderings and degeneracy.

use std::collections::BTreeSet;

use thiserror::Error;

/// Dense vertex id in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {id} out of range for graph on {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("degree bound requires d >= 2, got {0}")]
    DegeneracyTooSmall(usize),
}

/// Simple undirected graph in compressed adjacency form.
///
/// Neighbor lists are sorted and free of duplicates; adjacency is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

/// Result of [`Graph::build`]: the canonical graph plus how many input pairs
/// were collapsed as duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltGraph {
    pub graph: Graph,
    pub duplicate_edges: usize,
}

impl Graph {
    /// Builds a graph from an edge list, collapsing duplicate (and reversed)
    /// pairs. Self-loops and out-of-range ids are rejected.
    pub fn build(n: usize, edges: &[(VertexId, VertexId)]) -> Result<BuiltGraph, GraphError> {
        let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { id: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut raw_half_edges = 0;
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for list in &mut adjacency {
            raw_half_edges += list.len();
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        let duplicate_edges = (raw_half_edges - neighbors.len()) / 2;
        Ok(BuiltGraph {
            graph: Graph { offsets, neighbors },
            duplicate_edges,
        })
    }

    /// Convenience constructor for edge lists known to be valid.
    ///
    /// # Panics
    /// Panics on out-of-range ids or self-loops.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Graph {
        Graph::build(n, edges).expect("invalid edge list").graph
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `vertices`. Vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced(&self, vertices: &[VertexId]) -> Graph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in vertices {
            let start = neighbors.len();
            neighbors.extend(self.neighbors(v).iter().map(|&u| local[u]).filter(|&u| u != usize::MAX));
            neighbors[start..].sort_unstable();
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    /// Disjoint union with a complete graph on `r` new vertices, numbered
    /// `n..n + r`.
    pub fn with_clique(&self, r: usize) -> Graph {
        let n = self.vertex_count();
        let mut offsets = self.offsets.clone();
        let mut neighbors = self.neighbors.clone();
        for w in n..n + r {
            neighbors.extend((n..n + r).filter(|&u| u != w));
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    fn check_ids(&self, ids: &[VertexId]) -> Result<(), GraphError> {
        let n = self.vertex_count();
        match ids.iter().find(|&&v| v >= n) {
            Some(&id) => Err(GraphError::VertexOutOfRange { id, n }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingKind {
    DegreeDescending,
    SmallestLast,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    pub order: Vec<VertexId>,
    pub kind: OrderingKind,
}

/// Smallest-last peeling order and the degeneracy of `graph`.
///
/// Each step removes a vertex of minimum remaining degree, smallest id
/// first; `order[i]` has at most `d` neighbors among `order[i + 1..]`.
pub fn degeneracy_ordering(graph: &Graph) -> (VertexOrdering, usize) {
    let n = graph.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut queue: BTreeSet<(usize, VertexId)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some((deg, v)) = queue.pop_first() {
        d = d.max(deg);
        removed[v] = true;
        order.push(v);
        for &u in graph.neighbors(v) {
            if !removed[u] {
                queue.remove(&(degree[u], u));
                degree[u] -= 1;
                queue.insert((degree[u], u));
            }
        }
    }
    (
        VertexOrdering {
            order,
            kind: OrderingKind::SmallestLast,
        },
        d,
    )
}

pub fn degeneracy(graph: &Graph) -> usize {
    degeneracy_ordering(graph).1
}

/// Vertices by non-increasing degree, equal degrees by ascending id.
pub fn degree_descending_order(graph: &Graph) -> VertexOrdering {
    let mut order: Vec<VertexId> = (0..graph.vertex_count()).collect();
    order.sort_by(|&a, &b| graph.degree(b).cmp(&graph.degree(a)).then(a.cmp(&b)));
    VertexOrdering {
        order,
        kind: OrderingKind::DegreeDescending,
    }
}

/// A position where the degree bound `deg(v_i) < d (1 + n/i)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    /// 1-based position in the degree-descending order.
    pub position: usize,
    pub vertex: VertexId,
    pub degree: usize,
    /// The bound `d * (1 + n / position)` as a numerator over `position`.
    pub bound_numerator: usize,
}

/// Checks `degree(v_i) < d * (1 + n / i)` for every `i = 1..=n`, with `v_i`
/// the `i`-th vertex (1-based) of the degree-descending order.
///
/// Holds for every `d`-degenerate graph with `d >= 2`.
pub fn check_kn_bound(graph: &Graph, d: usize) -> Result<Vec<BoundViolation>, GraphError> {
    if d < 2 {
        return Err(GraphError::DegeneracyTooSmall(d));
    }
    let n = graph.vertex_count();
    let ordering = degree_descending_order(graph);
    let violations = ordering
        .order
        .iter()
        .enumerate()
        .filter_map(|(idx, &v)| {
            let i = idx + 1;
            let degree = graph.degree(v);
            // degree < d (i + n) / i  <=>  degree * i < d (i + n)
            let bound_numerator = d * (i + n);
            (degree * i >= bound_numerator).then_some(BoundViolation {
                position: i,
                vertex: v,
                degree,
                bound_numerator,
            })
        })
        .collect();
    Ok(violations)
}

/// Number of edges with one end in `a` and the other in `b`. Every edge is
/// counted at most once, including edges inside `a ∩ b`.
pub fn edges_between(graph: &Graph, a: &[VertexId], b: &[VertexId]) -> Result<usize, GraphError> {
    graph.check_ids(a)?;
    graph.check_ids(b)?;
    let n = graph.vertex_count();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    a.iter().for_each(|&v| in_a[v] = true);
    b.iter().for_each(|&v| in_b[v] = true);
    let mut count = 0;
    for u in (0..n).filter(|&u| in_a[u]) {
        for &v in graph.neighbors(u) {
            if !in_b[v] {
                continue;
            }
            // The edge is seen from both ends when each end is in both sets.
            if in_b[u] && in_a[v] && v < u {
                continue;
            }
            count += 1;
        }
    }
    Ok(count)
}
