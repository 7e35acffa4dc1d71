//! Partial coloring of `G* = G ∪ K_r` extended one vertex at a time.
//!
//! Invariants after every step:
//! (a) every class induces a forest,
//! (b) every class holds at most `t` colored vertices,
//! (c) protected vertices (the high-degree prefix and the virtual clique)
//!     keep their initial colors.

use serde::Serialize;

use crate::coloring::{class_induces_forest, Color, Coloring};
use crate::forest::ForestTracker;
use crate::graph::{Graph, VertexId};

use super::params::SplitParams;
use super::SolveError;

/// Auxiliary digraph on color classes. An arc `X -> Y` exists when some
/// unprotected `x` in `X` has at most one neighbor in `Y`; `x` witnesses it.
///
/// `layers[0]` holds the classes with fewer than `t` vertices and
/// `layers[i]` the classes, not in earlier layers, with an arc into
/// `layers[i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessDigraph {
    pub layers: Vec<Vec<Color>>,
    /// Per class (index `color - 1`): its layer, if reachable.
    pub layer_of: Vec<Option<usize>>,
    /// Per class in a layer `i >= 1`: the chosen head in layer `i - 1` and
    /// the witness moved along that arc.
    pub hop: Vec<Option<Hop>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub head: Color,
    pub witness: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub tail: Color,
    pub head: Color,
    pub witness: VertexId,
}

impl WitnessDigraph {
    /// Number of classes in the union of all layers.
    pub fn reachable_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Reachable classes in layer order, then by index.
    pub fn reachable(&self) -> impl Iterator<Item = Color> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn contains(&self, class: Color) -> bool {
        self.layer_of[class as usize - 1].is_some()
    }

    /// Classes `M_j, M_{j-1}, ..., M_0` from `class` down to layer 0, with
    /// the witness leaving each `M_i` (`i >= 1`).
    pub fn path_from(&self, class: Color) -> Option<Vec<(Color, Option<VertexId>)>> {
        self.layer_of[class as usize - 1]?;
        let mut path = Vec::new();
        let mut cur = class;
        while let Some(hop) = self.hop[cur as usize - 1] {
            path.push((cur, Some(hop.witness)));
            cur = hop.head;
        }
        path.push((cur, None));
        Some(path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Greedy(Color),
    Switched { target: Color, depth: usize },
    Stuck(VertexId),
    Done,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExtendStats {
    pub greedy: usize,
    pub switches: usize,
    pub max_switch_depth: usize,
    pub max_layers: usize,
    /// Switches followed by a from-scratch check of (a) and (b).
    pub verified_switches: usize,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    star: Graph,
    level_n: usize,
    params: SplitParams,
    d: usize,
    delta: usize,
    order: Vec<VertexId>,
    position: usize,
    colors: Vec<Color>,
    class_sizes: Vec<usize>,
    protected: Vec<bool>,
    initial_protected: Vec<Color>,
    tracker: ForestTracker,
    scratch: Vec<u32>,
    debug: bool,
    pub stats: ExtendStats,
}

impl SolverState {
    /// Sets up the state for `level`: its high-degree prefix
    /// `order[..params.mu]` takes `prefix_colors`, each virtual vertex `w_i`
    /// (id `n + i - 1`) takes color `i`, and extension resumes at
    /// `order[mu]`.
    pub fn new(
        level: &Graph,
        params: SplitParams,
        d: usize,
        delta: usize,
        order: Vec<VertexId>,
        prefix_colors: &[Color],
        debug: bool,
    ) -> SolverState {
        let n = level.vertex_count();
        let k = params.k;
        assert_eq!(prefix_colors.len(), params.mu);
        let star = level.with_clique(params.r);
        let total = n + params.r;
        let mut colors = vec![0; total];
        let mut protected = vec![false; total];
        for (&v, &c) in order.iter().zip(prefix_colors) {
            colors[v] = c;
            protected[v] = true;
        }
        for i in 0..params.r {
            colors[n + i] = i as Color + 1;
            protected[n + i] = true;
        }
        let mut class_sizes = vec![0; k];
        let mut tracker = ForestTracker::new(total, k);
        for v in 0..total {
            if colors[v] != 0 {
                class_sizes[colors[v] as usize - 1] += 1;
                tracker.add(&star, v, colors[v]);
            }
        }
        tracker.commit();
        let initial_protected = (0..total).map(|v| if protected[v] { colors[v] } else { 0 }).collect();
        SolverState {
            star,
            level_n: n,
            position: params.mu,
            params,
            d,
            delta,
            order,
            colors,
            class_sizes,
            protected,
            initial_protected,
            tracker,
            scratch: vec![0; k],
            debug,
            stats: ExtendStats::default(),
        }
    }

    pub fn params(&self) -> &SplitParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn star_graph(&self) -> &Graph {
        &self.star
    }

    pub fn level_vertex_count(&self) -> usize {
        self.level_n
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// 0-based index into the degree-descending order of the next vertex.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, v: VertexId) -> Option<Color> {
        match self.colors[v] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn is_protected(&self, v: VertexId) -> bool {
        self.protected[v]
    }

    pub fn protected(&self) -> &[bool] {
        &self.protected
    }

    pub fn is_virtual(&self, v: VertexId) -> bool {
        v >= self.level_n
    }

    pub fn is_small(&self, class: Color) -> bool {
        self.class_sizes[class as usize - 1] < self.params.t
    }

    pub fn next_vertex(&self) -> Option<VertexId> {
        self.order.get(self.position).copied()
    }

    /// Neighbors of `v` in `class`.
    pub fn neighbors_in(&self, v: VertexId, class: Color) -> usize {
        self.star
            .neighbors(v)
            .iter()
            .filter(|&&u| self.colors[u] == class)
            .count()
    }

    fn fill_scratch(&mut self, v: VertexId) {
        for &u in self.star.neighbors(v) {
            if self.colors[u] != 0 {
                self.scratch[self.colors[u] as usize - 1] += 1;
            }
        }
    }

    fn clear_scratch(&mut self, v: VertexId) {
        for &u in self.star.neighbors(v) {
            if self.colors[u] != 0 {
                self.scratch[self.colors[u] as usize - 1] = 0;
            }
        }
    }

    fn set_color(&mut self, v: VertexId, color: Color) {
        if self.colors[v] != 0 {
            self.class_sizes[self.colors[v] as usize - 1] -= 1;
        }
        self.colors[v] = color;
        self.class_sizes[color as usize - 1] += 1;
    }

    /// Colors `v` with the smallest-index class that has fewer than `t`
    /// vertices and at most one neighbor of `v`.
    pub fn greedy_place(&mut self, v: VertexId) -> Option<Color> {
        assert_eq!(self.colors[v], 0, "vertex {v} already colored");
        self.fill_scratch(v);
        let t = self.params.t;
        let choice = (0..self.params.k)
            .find(|&c| self.class_sizes[c] < t && self.scratch[c] <= 1)
            .map(|c| c as Color + 1);
        self.clear_scratch(v);
        let color = choice?;
        self.set_color(v, color);
        let forest = self.tracker.add(&self.star, v, color);
        debug_assert!(forest, "greedy placement closed a cycle");
        self.tracker.commit();
        self.stats.greedy += 1;
        Some(color)
    }

    /// Layered witness digraph of the current coloring.
    ///
    /// A class entering layer `i` records as its hop the smallest-index head
    /// in layer `i - 1` it has an arc to, witnessed by the smallest-id
    /// qualifying vertex.
    pub fn build_witness_digraph(&mut self) -> WitnessDigraph {
        let k = self.params.k;
        let mut layer_of = vec![None; k];
        let mut hop: Vec<Option<Hop>> = vec![None; k];
        let first: Vec<Color> = (1..=k as Color).filter(|&c| self.is_small(c)).collect();
        for &c in &first {
            layer_of[c as usize - 1] = Some(0);
        }
        let mut layers = vec![first];
        loop {
            let depth = layers.len();
            let frontier = layers.last().expect("nonempty");
            if frontier.is_empty() {
                layers.pop();
                break;
            }
            let frontier = frontier.clone();
            let mut best: Vec<Option<Hop>> = vec![None; k];
            for x in 0..self.colors.len() {
                let cx = self.colors[x];
                if cx == 0 || self.protected[x] || layer_of[cx as usize - 1].is_some() {
                    continue;
                }
                let slot = cx as usize - 1;
                self.fill_scratch(x);
                let head = frontier.iter().copied().find(|&y| self.scratch[y as usize - 1] <= 1);
                self.clear_scratch(x);
                if let Some(head) = head {
                    if best[slot].is_none_or(|h| head < h.head) {
                        best[slot] = Some(Hop { head, witness: x });
                    }
                }
            }
            let mut next = Vec::new();
            for (slot, found) in best.into_iter().enumerate() {
                if let Some(h) = found {
                    layer_of[slot] = Some(depth);
                    hop[slot] = Some(h);
                    next.push(slot as Color + 1);
                }
            }
            layers.push(next);
        }
        WitnessDigraph { layers, layer_of, hop }
    }

    /// Every arc of the witness digraph with its smallest-id witness. Used
    /// for auditing; the layered construction does not need it.
    pub fn witness_arcs(&mut self) -> Vec<Arc> {
        let k = self.params.k;
        let mut witness: Vec<Option<VertexId>> = vec![None; k * k];
        for x in 0..self.colors.len() {
            let cx = self.colors[x];
            if cx == 0 || self.protected[x] {
                continue;
            }
            self.fill_scratch(x);
            let tail = cx as usize - 1;
            for head in (0..k).filter(|&h| h != tail && self.scratch[h] <= 1) {
                witness[tail * k + head].get_or_insert(x);
            }
            self.clear_scratch(x);
        }
        witness
            .into_iter()
            .enumerate()
            .filter_map(|(i, w)| {
                w.map(|witness| Arc {
                    tail: (i / k) as Color + 1,
                    head: (i % k) as Color + 1,
                    witness,
                })
            })
            .collect()
    }

    /// First reachable class, in layer order then by index, holding at most
    /// one neighbor of `v`.
    pub fn insertion_target(&self, digraph: &WitnessDigraph, v: VertexId) -> Option<Color> {
        digraph.reachable().find(|&c| self.neighbors_in(v, c) <= 1)
    }

    /// Puts `v` into `target` and moves each witness on the layer path from
    /// `target` one class down, all at once. `target` keeps its size (for a
    /// path of length at least one) and the layer-0 class grows by one.
    pub fn switch_and_insert(
        &mut self,
        digraph: &WitnessDigraph,
        v: VertexId,
        target: Color,
    ) -> Result<usize, SolveError> {
        let path = digraph
            .path_from(target)
            .ok_or_else(|| SolveError::Internal(format!("class {target} is not reachable")))?;
        if self.colors[v] != 0 {
            return Err(SolveError::Internal(format!("vertex {v} is already colored")));
        }
        if self.neighbors_in(v, target) > 1 {
            return Err(SolveError::Internal(format!(
                "vertex {v} has more than one neighbor in class {target}"
            )));
        }
        let mut moves: Vec<(VertexId, Color)> = Vec::with_capacity(path.len());
        for pair in path.windows(2) {
            let (from, witness) = pair[0];
            let (to, _) = pair[1];
            let x = witness.expect("interior path classes carry a witness");
            if self.colors[x] != from || self.protected[x] || self.neighbors_in(x, to) > 1 {
                return Err(SolveError::Internal(format!(
                    "stale witness {x} for arc {from} -> {to}"
                )));
            }
            moves.push((x, to));
        }
        let bottom = path.last().expect("path is nonempty").0;
        if !self.is_small(bottom) {
            return Err(SolveError::Internal(format!("path ends in full class {bottom}")));
        }

        for &(x, _) in &moves {
            self.tracker.remove(&self.star, x);
        }
        for &(x, to) in &moves {
            self.set_color(x, to);
        }
        self.set_color(v, target);
        for &(x, to) in &moves {
            self.tracker.add(&self.star, x, to);
        }
        self.tracker.add(&self.star, v, target);
        self.tracker.commit();
        if let Some((class, _)) = path.iter().find(|&&(c, _)| !self.tracker.is_forest(c)) {
            return Err(SolveError::Internal(format!(
                "switch into class {class} closed a cycle; colors: {:?}",
                self.colors
            )));
        }

        let depth = moves.len();
        self.stats.switches += 1;
        self.stats.max_switch_depth = self.stats.max_switch_depth.max(depth);
        if self.debug || cfg!(debug_assertions) {
            self.check_conditions()?;
            self.stats.verified_switches += 1;
        }
        Ok(depth)
    }

    /// Colors the next vertex of the order.
    pub fn step(&mut self) -> Result<StepOutcome, SolveError> {
        let Some(v) = self.next_vertex() else {
            return Ok(StepOutcome::Done);
        };
        let outcome = if let Some(c) = self.greedy_place(v) {
            StepOutcome::Greedy(c)
        } else {
            let digraph = self.build_witness_digraph();
            self.stats.max_layers = self.stats.max_layers.max(digraph.layers.len());
            match self.insertion_target(&digraph, v) {
                Some(target) => {
                    let depth = self.switch_and_insert(&digraph, v, target)?;
                    StepOutcome::Switched { target, depth }
                }
                None => return Ok(StepOutcome::Stuck(v)),
            }
        };
        self.position += 1;
        if self.debug {
            self.check_conditions()?;
        }
        Ok(outcome)
    }

    /// Runs [`Self::step`] until every vertex is colored or one is stuck.
    pub fn extend_all(&mut self) -> Result<Option<VertexId>, SolveError> {
        loop {
            match self.step()? {
                StepOutcome::Done => return Ok(None),
                StepOutcome::Stuck(v) => return Ok(Some(v)),
                _ => {}
            }
        }
    }

    /// From-scratch check of conditions (a), (b) and (c).
    pub fn check_conditions(&self) -> Result<(), SolveError> {
        let coloring = Coloring::from_assignment(self.params.k, self.colors.clone())
            .map_err(|e| SolveError::Internal(e.to_string()))?;
        for class in 1..=self.params.k as Color {
            if let Err(cycle) = class_induces_forest(&self.star, &coloring, class) {
                return Err(SolveError::Internal(format!("class {class} contains cycle {cycle:?}")));
            }
            let size = coloring.class_size(class);
            if size > self.params.t || size != self.class_sizes[class as usize - 1] {
                return Err(SolveError::Internal(format!(
                    "class {class} has {size} vertices (cap {}, tracked {})",
                    self.params.t,
                    self.class_sizes[class as usize - 1]
                )));
            }
        }
        for (v, &c) in self.initial_protected.iter().enumerate() {
            if c != 0 && self.colors[v] != c {
                return Err(SolveError::Internal(format!(
                    "protected vertex {v} changed color {c} -> {}",
                    self.colors[v]
                )));
            }
        }
        Ok(())
    }

    /// Colors of the level graph's own vertices, virtual clique dropped.
    pub fn level_colors(&self) -> Vec<Color> {
        self.colors[..self.level_n].to_vec()
    }
}
