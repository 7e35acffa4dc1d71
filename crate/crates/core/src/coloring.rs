//! Colorings and the independent verifier for equitable tree-colorings.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Color in `1..=k`.
pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {0} is uncolored")]
    Partial(VertexId),
    #[error("color {color} outside 1..={k}")]
    ColorOutOfRange { color: Color, k: usize },
    #[error("coloring covers {coloring} vertices but the graph has {graph}")]
    SizeMismatch { coloring: usize, graph: usize },
    #[error("class_sizes {0:?} disagree with the assignment")]
    InconsistentSizes(Vec<usize>),
    #[error("k must be at least 1")]
    NoColors,
}

/// Vertex-to-color assignment with per-class sizes. Color 0 marks an
/// uncolored vertex while solving; a finished coloring uses `1..=k` only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawColoring")]
pub struct Coloring {
    k: usize,
    assignment: Vec<Color>,
    class_sizes: Vec<usize>,
}

#[derive(Deserialize)]
struct RawColoring {
    k: usize,
    assignment: Vec<Color>,
    class_sizes: Vec<usize>,
}

impl TryFrom<RawColoring> for Coloring {
    type Error = ColoringError;

    fn try_from(raw: RawColoring) -> Result<Self, Self::Error> {
        let coloring = Coloring::from_assignment(raw.k, raw.assignment)?;
        if let Some(v) = coloring.first_uncolored() {
            return Err(ColoringError::Partial(v));
        }
        if coloring.class_sizes != raw.class_sizes {
            return Err(ColoringError::InconsistentSizes(raw.class_sizes));
        }
        Ok(coloring)
    }
}

impl Coloring {
    pub fn new(n: usize, k: usize) -> Coloring {
        Coloring {
            k,
            assignment: vec![0; n],
            class_sizes: vec![0; k],
        }
    }

    /// Builds a coloring from raw colors, 0 meaning uncolored.
    pub fn from_assignment(k: usize, assignment: Vec<Color>) -> Result<Coloring, ColoringError> {
        if k == 0 {
            return Err(ColoringError::NoColors);
        }
        let mut class_sizes = vec![0; k];
        for &c in &assignment {
            if c as usize > k {
                return Err(ColoringError::ColorOutOfRange { color: c, k });
            }
            if c > 0 {
                class_sizes[c as usize - 1] += 1;
            }
        }
        Ok(Coloring {
            k,
            assignment,
            class_sizes,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn color(&self, v: VertexId) -> Option<Color> {
        match self.assignment[v] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn assignment(&self) -> &[Color] {
        &self.assignment
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_size(&self, color: Color) -> usize {
        self.class_sizes[color as usize - 1]
    }

    /// Sets the color of `v`, replacing any previous color.
    pub fn assign(&mut self, v: VertexId, color: Color) {
        assert!(color >= 1 && color as usize <= self.k, "color {color} out of range");
        self.unassign(v);
        self.assignment[v] = color;
        self.class_sizes[color as usize - 1] += 1;
    }

    pub fn unassign(&mut self, v: VertexId) -> Option<Color> {
        let old = self.color(v)?;
        self.class_sizes[old as usize - 1] -= 1;
        self.assignment[v] = 0;
        Some(old)
    }

    pub fn first_uncolored(&self) -> Option<VertexId> {
        self.assignment.iter().position(|&c| c == 0)
    }

    pub fn is_total(&self) -> bool {
        self.first_uncolored().is_none()
    }

    /// Vertices of one class in increasing id order.
    pub fn class_members(&self, color: Color) -> Vec<VertexId> {
        (0..self.len()).filter(|&v| self.assignment[v] == color).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }
}

/// Whether the class of `color` induces a forest. On failure the vertices of
/// one cycle are returned, starting at its smallest vertex and continuing
/// towards the smaller of that vertex's two cycle neighbors.
pub fn class_induces_forest(graph: &Graph, coloring: &Coloring, color: Color) -> Result<(), Vec<VertexId>> {
    let n = graph.vertex_count();
    let in_class = |v: VertexId| coloring.assignment[v] == color;
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for root in (0..n).filter(|&v| in_class(v)) {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if !in_class(w) || w == parent[u] {
                    continue;
                }
                if seen[w] {
                    return Err(canonical_cycle(tree_cycle(&parent, &depth, u, w)));
                }
                seen[w] = true;
                parent[w] = u;
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(())
}

/// Cycle formed by the tree paths from `u` and `w` to their common ancestor
/// plus the edge `u w`.
fn tree_cycle(parent: &[usize], depth: &[usize], mut u: usize, mut w: usize) -> Vec<VertexId> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[u] > depth[w] {
        left.push(u);
        u = parent[u];
    }
    while depth[w] > depth[u] {
        right.push(w);
        w = parent[w];
    }
    while u != w {
        left.push(u);
        right.push(w);
        u = parent[u];
        w = parent[w];
    }
    left.push(u);
    left.extend(right.into_iter().rev());
    left
}

fn canonical_cycle(mut cycle: Vec<VertexId>) -> Vec<VertexId> {
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    if len > 2 && cycle[len - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// Whether all class sizes (empty classes included) differ by at most one.
pub fn is_equitable(coloring: &Coloring) -> Result<bool, ColoringError> {
    if let Some(v) = coloring.first_uncolored() {
        return Err(ColoringError::Partial(v));
    }
    Ok(size_spread(coloring).is_none())
}

/// Extreme class pair `(largest, smallest)` when their sizes differ by more
/// than one.
fn size_spread(coloring: &Coloring) -> Option<SizePair> {
    let sizes = coloring.class_sizes();
    let (max_i, &max) = sizes.iter().enumerate().max_by_key(|&(i, s)| (s, usize::MAX - i))?;
    let (min_i, &min) = sizes.iter().enumerate().min_by_key(|&(i, s)| (s, i))?;
    (max - min > 1).then_some(SizePair {
        larger_color: max_i as Color + 1,
        larger_size: max,
        smaller_color: min_i as Color + 1,
        smaller_size: min,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizePair {
    pub larger_color: Color,
    pub larger_size: usize,
    pub smaller_color: Color,
    pub smaller_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassForestStatus {
    pub color: Color,
    pub forest_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub k: usize,
    pub forest: Vec<ClassForestStatus>,
    pub equitable_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_sizes: Option<SizePair>,
}

impl VerificationReport {
    pub fn forest_ok(&self) -> bool {
        self.forest.iter().all(|c| c.forest_ok)
    }

    /// True iff the coloring is an equitable tree-k-coloring.
    pub fn passed(&self) -> bool {
        self.forest_ok() && self.equitable_ok
    }
}

/// Checks both defining properties from scratch.
pub fn verify(graph: &Graph, coloring: &Coloring) -> Result<VerificationReport, ColoringError> {
    if coloring.len() != graph.vertex_count() {
        return Err(ColoringError::SizeMismatch {
            coloring: coloring.len(),
            graph: graph.vertex_count(),
        });
    }
    if let Some(v) = coloring.first_uncolored() {
        return Err(ColoringError::Partial(v));
    }
    let forest = (1..=coloring.k() as Color)
        .map(|color| {
            let cycle = class_induces_forest(graph, coloring, color).err();
            ClassForestStatus {
                color,
                forest_ok: cycle.is_none(),
                cycle,
            }
        })
        .collect();
    let offending_sizes = size_spread(coloring);
    Ok(VerificationReport {
        k: coloring.k(),
        forest,
        equitable_ok: offending_sizes.is_none(),
        offending_sizes,
    })
}
