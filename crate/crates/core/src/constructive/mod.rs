//! Constructive equitable tree-k-coloring of d-degenerate graphs.
//!
//! One level of the solver works on a graph with `n` vertices, block size
//! `t = ceil(n/k)` and deficiency `r = k t - n`:
//!
//! * `t <= 2`, or the graph is a forest: any balanced partition works.
//! * `d < 2 (r + 1)`: peel a minimum-degree vertex, solve the rest, and put
//!   the vertex back into a short class holding at most one of its
//!   neighbors (one exists by counting).
//! * otherwise: color the vertices of degree at least `λ d` recursively, pad
//!   with a virtual `K_r` whose vertices take colors `1..=r`, and extend to
//!   the remaining vertices in degree order. A vertex goes into a short class
//!   with at most one neighbor if possible, else into a class reachable in
//!   the witness digraph, shifting one witness per arc toward a short class.
//!
//! For `Δ >= 10 d` and `k >= (Δ + 1)/2` the extension is expected never to
//! get stuck. Outside that regime a stuck vertex produces a [`StuckReport`].

mod audit;
mod params;
mod state;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{verify, Color, Coloring};
use crate::graph::{degeneracy, degree_descending_order, Graph, VertexId};

pub use audit::{audit_stuck_state, Audit, AuditError, InequalityCheck, Measured, Relation};
pub use params::{
    block_size, compute_split_params, lambda_of, reduce_small_r, reduction_applies, s_of, ParamError, Rational,
    Reduction, SplitParams,
};
pub use state::{Arc, ExtendStats, Hop, SolverState, StepOutcome, WitnessDigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("k must be at least 1")]
    NoColors,
    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Check conditions (a), (b), (c) from scratch after every step.
    pub debug: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolveStats {
    pub levels: usize,
    pub peeled: usize,
    pub greedy: usize,
    pub switches: usize,
    pub verified_switches: usize,
    pub max_switch_depth: usize,
    pub max_layers: usize,
    #[serde(skip)]
    pub ordering_time: Duration,
    #[serde(skip)]
    pub extend_time: Duration,
    #[serde(skip)]
    pub total_time: Duration,
}

impl SolveStats {
    fn absorb(&mut self, ext: &ExtendStats) {
        self.greedy += ext.greedy;
        self.switches += ext.switches;
        self.verified_switches += ext.verified_switches;
        self.max_switch_depth = self.max_switch_depth.max(ext.max_switch_depth);
        self.max_layers = self.max_layers.max(ext.max_layers);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelInfo {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub r: usize,
    pub mu: Option<usize>,
}

/// State of a stuck level, sufficient to recompute every measured value
/// together with the input graph: the level graph is the subgraph induced
/// by `level_vertices` (level id `i` = input id `level_vertices[i]`), padded
/// with `virtual_count` clique vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateSnapshot {
    pub level_vertices: Vec<VertexId>,
    pub virtual_count: usize,
    pub colors: Vec<Color>,
    pub protected: Vec<bool>,
    pub order: Vec<VertexId>,
    pub position: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StuckReport {
    /// Input-graph id of the vertex that could not be placed.
    pub failing_vertex: VertexId,
    pub k: usize,
    pub audit: Audit,
    pub violated_inequalities: Vec<&'static str>,
    /// Levels from the input graph down to the stuck one.
    pub trace: Vec<LevelInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<StateSnapshot>,
}

impl StuckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub coloring: Coloring,
    pub stats: SolveStats,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Colored(Solved),
    Stuck(Box<StuckReport>),
}

impl Outcome {
    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            Outcome::Colored(s) => Some(&s.coloring),
            Outcome::Stuck(_) => None,
        }
    }
}

/// `ceil((Δ + 1) / 2)`, the smallest `k` the degree bound covers (at least 1).
pub fn theorem_min_k(graph: &Graph) -> usize {
    (graph.max_degree() + 2) / 2
}

/// Whether `(graph, k)` satisfies `Δ >= 10 d` and `k >= (Δ + 1)/2` for the
/// degeneracy `d >= 1` of the graph.
pub fn in_theorem_regime(graph: &Graph, k: usize) -> bool {
    let d = degeneracy(graph);
    d >= 1 && graph.max_degree() >= 10 * d && 2 * k > graph.max_degree()
}

pub fn equitable_tree_color(graph: &Graph, k: usize) -> Result<Outcome, SolveError> {
    equitable_tree_color_with(graph, k, SolveOptions::default())
}

pub fn equitable_tree_color_with(graph: &Graph, k: usize, options: SolveOptions) -> Result<Outcome, SolveError> {
    if k == 0 {
        return Err(SolveError::NoColors);
    }
    let start = Instant::now();
    let mut solver = Solver {
        k,
        delta: graph.max_degree(),
        options,
        stats: SolveStats::default(),
        trace: Vec::new(),
    };
    let ids: Vec<VertexId> = (0..graph.vertex_count()).collect();
    let colors = match solver.solve_level(graph, &ids) {
        Ok(colors) => colors,
        Err(Failure::Stuck(report)) => return Ok(Outcome::Stuck(report)),
        Err(Failure::Error(e)) => return Err(e),
    };
    let coloring = Coloring::from_assignment(k, colors).map_err(|e| SolveError::Internal(e.to_string()))?;
    let report = verify(graph, &coloring).map_err(|e| SolveError::Internal(e.to_string()))?;
    if !report.passed() {
        return Err(SolveError::Internal(format!(
            "result failed verification: {}",
            serde_json::to_string(&report).unwrap_or_default()
        )));
    }
    solver.stats.total_time = start.elapsed();
    Ok(Outcome::Colored(Solved {
        coloring,
        stats: solver.stats,
    }))
}

enum Failure {
    Stuck(Box<StuckReport>),
    Error(SolveError),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Error(e)
    }
}

struct Solver {
    k: usize,
    delta: usize,
    options: SolveOptions,
    stats: SolveStats,
    trace: Vec<LevelInfo>,
}

/// Round-robin partition; every class has at most `ceil(n/k)` vertices.
fn balanced_partition(n: usize, k: usize) -> Vec<Color> {
    (0..n).map(|v| (v % k) as Color + 1).collect()
}

impl Solver {
    /// Colors `graph`; `ids` maps its vertices to input-graph ids.
    fn solve_level(&mut self, graph: &Graph, ids: &[VertexId]) -> Result<Vec<Color>, Failure> {
        let n = graph.vertex_count();
        let k = self.k;
        self.stats.levels += 1;
        if block_size(n, k) <= 2 {
            return Ok(balanced_partition(n, k));
        }
        let clock = Instant::now();
        let d = degeneracy(graph);
        self.stats.ordering_time += clock.elapsed();
        if d <= 1 {
            return Ok(balanced_partition(n, k));
        }

        // Peel minimum-degree vertices while the deficiency is too small.
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
        let mut peeled: Vec<VertexId> = Vec::new();
        loop {
            let remaining = n - peeled.len();
            let t = block_size(remaining, k);
            if t <= 2 || !reduction_applies(d, k * t - remaining) {
                break;
            }
            let x = (0..n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (degree[v], v))
                .expect("t >= 3 leaves vertices");
            alive[x] = false;
            for &u in graph.neighbors(x) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
            peeled.push(x);
        }
        self.stats.peeled += peeled.len();

        let core: Vec<VertexId> = (0..n).filter(|&v| alive[v]).collect();
        let core_colors = if peeled.is_empty() {
            self.solve_core(graph, ids, d)?
        } else {
            let core_graph = graph.induced(&core);
            let core_ids: Vec<VertexId> = core.iter().map(|&v| ids[v]).collect();
            if block_size(core.len(), k) <= 2 {
                balanced_partition(core.len(), k)
            } else {
                self.solve_core(&core_graph, &core_ids, d)?
            }
        };

        let mut coloring = Coloring::new(n, k);
        for (&v, &c) in core.iter().zip(&core_colors) {
            coloring.assign(v, c);
        }
        for (colored, &x) in (core.len()..).zip(peeled.iter().rev()) {
            let t = block_size(colored + 1, k);
            let class = (1..=k as Color)
                .find(|&c| {
                    coloring.class_size(c) == t - 1
                        && graph
                            .neighbors(x)
                            .iter()
                            .filter(|&&u| coloring.color(u) == Some(c))
                            .count()
                            <= 1
                })
                .ok_or_else(|| SolveError::Internal(format!("no short class accepts peeled vertex {}", ids[x])))?;
            coloring.assign(x, class);
        }
        Ok(coloring.assignment().to_vec())
    }

    /// Degree split and extension for a level with `t >= 3` and
    /// `2 (r + 1) <= d`.
    fn solve_core(&mut self, graph: &Graph, ids: &[VertexId], d: usize) -> Result<Vec<Color>, Failure> {
        let n = graph.vertex_count();
        let k = self.k;
        let clock = Instant::now();
        let order = degree_descending_order(graph).order;
        self.stats.ordering_time += clock.elapsed();
        let degrees: Vec<usize> = order.iter().map(|&v| graph.degree(v)).collect();
        let params = compute_split_params(n, k, d, &degrees).map_err(|e| SolveError::Internal(e.to_string()))?;
        // mu < n / (λ - 1) = n s / t, a consequence of the degree bound.
        if params.mu * params.t >= n * params.s {
            return Err(SolveError::Internal(format!(
                "high-degree prefix too long: mu = {}, n = {n}, t = {}, s = {}",
                params.mu, params.t, params.s
            ))
            .into());
        }
        self.trace.push(LevelInfo {
            n,
            d,
            t: params.t,
            r: params.r,
            mu: Some(params.mu),
        });

        let prefix = &order[..params.mu];
        let prefix_graph = graph.induced(prefix);
        let prefix_ids: Vec<VertexId> = prefix.iter().map(|&v| ids[v]).collect();
        let prefix_colors = self.solve_level(&prefix_graph, &prefix_ids)?;
        let mut per_class = vec![0usize; k];
        for &c in &prefix_colors {
            per_class[c as usize - 1] += 1;
        }
        if per_class.iter().any(|&c| c > params.s) {
            return Err(
                SolveError::Internal(format!("high-degree class exceeds s = {}: {per_class:?}", params.s)).into(),
            );
        }

        let clock = Instant::now();
        let mut state = SolverState::new(graph, params, d, self.delta, order, &prefix_colors, self.options.debug);
        let stuck = state.extend_all();
        self.stats.extend_time += clock.elapsed();
        self.stats.absorb(&state.stats);
        if let Some(v) = stuck? {
            return Err(Failure::Stuck(Box::new(self.stuck_report(&mut state, v, ids)?)));
        }
        self.trace.pop();
        Ok(state.level_colors())
    }

    fn stuck_report(&self, state: &mut SolverState, v: VertexId, ids: &[VertexId]) -> Result<StuckReport, SolveError> {
        let audit = audit_stuck_state(state, v).map_err(|e| SolveError::Internal(e.to_string()))?;
        Ok(StuckReport {
            failing_vertex: ids[v],
            k: self.k,
            violated_inequalities: audit.violated(),
            audit,
            trace: self.trace.clone(),
            snapshot_path: None,
            snapshot: Some(StateSnapshot {
                level_vertices: ids.to_vec(),
                virtual_count: state.params().r,
                colors: state.colors().to_vec(),
                protected: state.protected().to_vec(),
                order: state.order().to_vec(),
                position: state.position(),
            }),
        })
    }
}
