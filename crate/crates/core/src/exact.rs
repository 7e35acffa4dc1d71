//! Exact decision procedure for small graphs, plus `va_eq` and `va_eq*`.
//!
//! Vertices are placed in degree-descending order. Classes are unlabeled
//! during search: a vertex joins an open class or opens the next one, which
//! removes all color permutations. With `n = q k + rem`, classes are capped
//! at `q + 1` and at most `rem` of them may reach that size; together these
//! force the final profile (`rem` classes of `q + 1`, the rest `q`).

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{verify, Color, Coloring};
use crate::forest::ForestTracker;
use crate::graph::{degree_descending_order, Graph, VertexId};

pub const NAIVE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: 100_000_000,
            time_limit: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Coloring),
    Unsat,
    Indeterminate,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub k: usize,
    pub verdict: Verdict,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct DecisionJson<'a> {
    k: usize,
    verdict: &'static str,
    nodes: u64,
    millis: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a Coloring>,
}

impl Decision {
    /// `{k, verdict, nodes, millis, witness?}`.
    pub fn to_json(&self) -> String {
        let witness = match &self.verdict {
            Verdict::Sat(c) => Some(c),
            _ => None,
        };
        serde_json::to_string(&DecisionJson {
            k: self.k,
            verdict: self.verdict.name(),
            nodes: self.nodes,
            millis: self.elapsed.as_millis(),
            witness,
        })
        .expect("decision serializes")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("decision for k = {k} exhausted the budget after {nodes} nodes")]
    Indeterminate { k: usize, nodes: u64 },
    #[error("naive enumeration supports at most {NAIVE_MAX_VERTICES} vertices, got {0}")]
    TooLarge(usize),
    #[error("k must be at least 1")]
    NoColors,
}

struct Exhausted;

struct Search<'g> {
    graph: &'g Graph,
    order: Vec<VertexId>,
    k: usize,
    q: usize,
    rem: usize,
    tracker: ForestTracker,
    opened: usize,
    full: usize,
    nodes: u64,
    budget: SearchBudget,
    start: Instant,
}

impl Search<'_> {
    fn cap(&self) -> usize {
        if self.rem == 0 {
            self.q
        } else {
            self.q + 1
        }
    }

    fn dfs(&mut self, idx: usize) -> Result<bool, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes & 0x3ff == 0 && self.start.elapsed() > self.budget.time_limit)
        {
            return Err(Exhausted);
        }
        let Some(&v) = self.order.get(idx) else {
            return Ok(true);
        };
        let cap = self.cap();
        let limit = (self.opened + 1).min(self.k) as Color;
        for class in 1..=limit {
            let size = self.tracker.class_len(class);
            if size == cap || (self.rem > 0 && size == self.q && self.full == self.rem) {
                continue;
            }
            if self.tracker.would_close_cycle(self.graph, v, class) {
                continue;
            }
            let checkpoint = self.tracker.checkpoint();
            let (opened, full) = (self.opened, self.full);
            self.tracker.add(self.graph, v, class);
            if class as usize > self.opened {
                self.opened += 1;
            }
            if self.rem > 0 && size + 1 == self.q + 1 {
                self.full += 1;
            }
            if self.dfs(idx + 1)? {
                return Ok(true);
            }
            self.tracker
                .rollback(checkpoint)
                .expect("checkpoint taken in this frame");
            self.opened = opened;
            self.full = full;
        }
        Ok(false)
    }
}

/// Decides whether `graph` has an equitable tree-`k`-coloring.
pub fn exact_equitable_tree_k(graph: &Graph, k: usize, budget: &SearchBudget) -> Result<Decision, ExactError> {
    if k == 0 {
        return Err(ExactError::NoColors);
    }
    let n = graph.vertex_count();
    let start = Instant::now();
    let mut search = Search {
        graph,
        order: degree_descending_order(graph).order,
        k,
        q: n / k,
        rem: n % k,
        tracker: ForestTracker::new(n, k),
        opened: 0,
        full: 0,
        nodes: 0,
        budget: *budget,
        start,
    };
    let verdict = match search.dfs(0) {
        Err(Exhausted) => Verdict::Indeterminate,
        Ok(false) => Verdict::Unsat,
        Ok(true) => {
            let assignment = (0..n)
                .map(|v| search.tracker.class_of(v).expect("search colors every vertex"))
                .collect();
            let coloring = Coloring::from_assignment(k, assignment).expect("colors within 1..=k");
            debug_assert!(verify(graph, &coloring).map(|r| r.passed()).unwrap_or(false));
            Verdict::Sat(coloring)
        }
    };
    Ok(Decision {
        k,
        verdict,
        nodes: search.nodes,
        elapsed: start.elapsed(),
    })
}

fn require_decided(decision: Decision) -> Result<bool, ExactError> {
    match decision.verdict {
        Verdict::Sat(_) => Ok(true),
        Verdict::Unsat => Ok(false),
        Verdict::Indeterminate => Err(ExactError::Indeterminate {
            k: decision.k,
            nodes: decision.nodes,
        }),
    }
}

/// Every `k >= ceil(n/2)` admits classes of size at most two.
fn trivially_sat_from(n: usize) -> usize {
    n.div_ceil(2).max(1)
}

/// Smallest `k` with an equitable tree-`k`-coloring.
pub fn va_eq(graph: &Graph, budget: &SearchBudget) -> Result<usize, ExactError> {
    let top = trivially_sat_from(graph.vertex_count());
    for k in 1..top {
        if require_decided(exact_equitable_tree_k(graph, k, budget)?)? {
            return Ok(k);
        }
    }
    Ok(top)
}

/// Smallest `k` such that every `k' >= k` admits an equitable
/// tree-`k'`-coloring: one more than the largest UNSAT `k`.
pub fn va_eq_star(graph: &Graph, budget: &SearchBudget) -> Result<usize, ExactError> {
    let top = trivially_sat_from(graph.vertex_count());
    for k in (1..top).rev() {
        if !require_decided(exact_equitable_tree_k(graph, k, budget)?)? {
            return Ok(k + 1);
        }
    }
    Ok(1)
}

/// Verdict by enumerating all `k^n` assignments and running [`verify`] on
/// each equitable one.
pub fn cross_check_naive(graph: &Graph, k: usize) -> Result<bool, ExactError> {
    let n = graph.vertex_count();
    if n > NAIVE_MAX_VERTICES {
        return Err(ExactError::TooLarge(n));
    }
    if k == 0 {
        return Err(ExactError::NoColors);
    }
    let mut digits = vec![1 as Color; n];
    let mut sizes = vec![0usize; k];
    loop {
        sizes.iter_mut().for_each(|s| *s = 0);
        digits.iter().for_each(|&c| sizes[c as usize - 1] += 1);
        let spread = sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0);
        if spread <= 1 {
            let coloring = Coloring::from_assignment(k, digits.clone()).expect("digits within range");
            if verify(graph, &coloring).expect("total coloring").passed() {
                return Ok(true);
            }
        }
        // Next assignment in base k.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            if (digits[i] as usize) < k {
                digits[i] += 1;
                break;
            }
            digits[i] = 1;
            i += 1;
        }
    }
}
