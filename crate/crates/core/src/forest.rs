//! Incremental per-class acyclicity tracking with LIFO rollback.
//!
//! Every class keeps its vertex, edge and component counts; a class induces a
//! forest iff `edges == vertices - components`. Connectivity comes from a
//! union-find without path compression so that each mutation is a journaled
//! field write that can be undone.

use std::collections::HashSet;

use thiserror::Error;

use crate::coloring::Color;
use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackerError {
    #[error("checkpoint {checkpoint} lies beyond the journal (length {journal})")]
    RollbackPastCheckpoint { checkpoint: usize, journal: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint(usize);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct ClassCounts {
    vertices: usize,
    edges: usize,
    components: usize,
}

#[derive(Debug, Clone)]
enum Undo {
    Parent(VertexId, VertexId),
    Size(VertexId, usize),
    ClassOf(VertexId, Color),
    Counts(usize, ClassCounts),
}

#[derive(Debug, Clone)]
pub struct ForestTracker {
    class_of: Vec<Color>,
    parent: Vec<VertexId>,
    size: Vec<usize>,
    counts: Vec<ClassCounts>,
    journal: Vec<Undo>,
}

impl ForestTracker {
    pub fn new(n: usize, k: usize) -> ForestTracker {
        ForestTracker {
            class_of: vec![0; n],
            parent: (0..n).collect(),
            size: vec![1; n],
            counts: vec![ClassCounts::default(); k],
            journal: Vec::new(),
        }
    }

    pub fn class_of(&self, v: VertexId) -> Option<Color> {
        match self.class_of[v] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn class_len(&self, class: Color) -> usize {
        self.counts[class as usize - 1].vertices
    }

    pub fn is_forest(&self, class: Color) -> bool {
        let c = self.counts[class as usize - 1];
        c.edges + c.components == c.vertices
    }

    pub fn all_forests(&self) -> bool {
        (1..=self.counts.len() as Color).all(|c| self.is_forest(c))
    }

    fn find(&self, mut v: VertexId) -> VertexId {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Whether adding `v` to `class` would create a cycle there, i.e. two of
    /// its neighbors in `class` already share a tree.
    pub fn would_close_cycle(&self, graph: &Graph, v: VertexId, class: Color) -> bool {
        let mut roots: Vec<VertexId> = Vec::new();
        for &u in graph.neighbors(v) {
            if self.class_of[u] == class {
                let root = self.find(u);
                if roots.contains(&root) {
                    return true;
                }
                roots.push(root);
            }
        }
        false
    }

    fn set_parent(&mut self, v: VertexId, p: VertexId) {
        self.journal.push(Undo::Parent(v, self.parent[v]));
        self.parent[v] = p;
    }

    fn set_size(&mut self, v: VertexId, s: usize) {
        self.journal.push(Undo::Size(v, self.size[v]));
        self.size[v] = s;
    }

    fn set_counts(&mut self, class: Color, counts: ClassCounts) {
        let idx = class as usize - 1;
        self.journal.push(Undo::Counts(idx, self.counts[idx]));
        self.counts[idx] = counts;
    }

    fn set_class(&mut self, v: VertexId, class: Color) {
        self.journal.push(Undo::ClassOf(v, self.class_of[v]));
        self.class_of[v] = class;
    }

    /// Returns true when the roots were distinct and got merged.
    fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.set_parent(rb, ra);
        self.set_size(ra, self.size[ra] + self.size[rb]);
        true
    }

    /// Puts the uncolored vertex `v` into `class` together with all its
    /// edges into the class. Returns whether the class is still a forest.
    pub fn add(&mut self, graph: &Graph, v: VertexId, class: Color) -> bool {
        assert_eq!(self.class_of[v], 0, "vertex {v} already in a class");
        let mut counts = self.counts[class as usize - 1];
        counts.vertices += 1;
        counts.components += 1;
        self.set_class(v, class);
        for &u in graph.neighbors(v) {
            if self.class_of[u] == class {
                counts.edges += 1;
                if self.union(u, v) {
                    counts.components -= 1;
                }
            }
        }
        self.set_counts(class, counts);
        self.is_forest(class)
    }

    /// Takes `v` out of its class. The component that contained `v` is
    /// rebuilt from the remaining class vertices.
    pub fn remove(&mut self, graph: &Graph, v: VertexId) -> Option<Color> {
        let class = self.class_of(v)?;
        let component = self.class_component(graph, v, class);
        let mut counts = self.counts[class as usize - 1];
        let inner_degree = graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.class_of[u] == class)
            .count();
        for &u in &component {
            if self.parent[u] != u {
                self.set_parent(u, u);
            }
            if self.size[u] != 1 {
                self.set_size(u, 1);
            }
        }
        self.set_class(v, 0);
        counts.vertices -= 1;
        counts.edges -= inner_degree;
        counts.components -= 1;
        counts.components += component.len() - 1;
        for &u in component.iter().filter(|&&u| u != v) {
            for &w in graph.neighbors(u) {
                if w < u && self.class_of[w] == class && self.union(u, w) {
                    counts.components -= 1;
                }
            }
        }
        self.set_counts(class, counts);
        Some(class)
    }

    fn class_component(&self, graph: &Graph, v: VertexId, class: Color) -> Vec<VertexId> {
        let mut seen = HashSet::from([v]);
        let mut members = vec![v];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in graph.neighbors(u) {
                if self.class_of[w] == class && seen.insert(w) {
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.journal.len())
    }

    /// Undoes every mutation made after `checkpoint`, newest first.
    pub fn rollback(&mut self, checkpoint: Checkpoint) -> Result<(), TrackerError> {
        if checkpoint.0 > self.journal.len() {
            return Err(TrackerError::RollbackPastCheckpoint {
                checkpoint: checkpoint.0,
                journal: self.journal.len(),
            });
        }
        while self.journal.len() > checkpoint.0 {
            match self.journal.pop().expect("length checked") {
                Undo::Parent(v, p) => self.parent[v] = p,
                Undo::Size(v, s) => self.size[v] = s,
                Undo::ClassOf(v, c) => self.class_of[v] = c,
                Undo::Counts(i, c) => self.counts[i] = c,
            }
        }
        Ok(())
    }

    /// Drops the undo history; earlier checkpoints become invalid.
    pub fn commit(&mut self) {
        self.journal.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{class_induces_forest, Coloring};
    use proptest::prelude::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn adding_at_most_one_neighbor_keeps_forest() {
        let g = k4();
        let mut t = ForestTracker::new(4, 2);
        assert!(t.add(&g, 0, 1));
        assert!(t.add(&g, 1, 1));
        assert!(t.would_close_cycle(&g, 2, 1));
        assert!(!t.would_close_cycle(&g, 2, 2));
    }

    #[test]
    fn closing_a_cycle_is_flagged() {
        let g = k4();
        let mut t = ForestTracker::new(4, 1);
        t.add(&g, 0, 1);
        t.add(&g, 1, 1);
        assert!(!t.add(&g, 2, 1));
        assert!(!t.is_forest(1));
        t.remove(&g, 1);
        assert!(t.is_forest(1));
        assert_eq!(t.class_len(1), 2);
    }

    #[test]
    fn rollback_restores_and_rejects_stale_checkpoints() {
        let g = k4();
        let mut t = ForestTracker::new(4, 1);
        t.add(&g, 0, 1);
        let cp = t.checkpoint();
        t.add(&g, 1, 1);
        t.add(&g, 2, 1);
        assert!(!t.is_forest(1));
        t.rollback(cp).unwrap();
        assert!(t.is_forest(1));
        assert_eq!(t.class_of(1), None);
        assert_eq!(t.class_len(1), 1);
        let later = {
            t.add(&g, 3, 1);
            t.checkpoint()
        };
        t.rollback(cp).unwrap();
        assert!(matches!(
            t.rollback(later),
            Err(TrackerError::RollbackPastCheckpoint { .. })
        ));
    }

    #[derive(Debug, Clone)]
    enum Op {
        Move(usize, u32),
        Remove(usize),
        Checkpoint,
        Rollback,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            4 => (0usize..12, 1u32..4).prop_map(|(v, c)| Op::Move(v, c)),
            2 => (0usize..12).prop_map(Op::Remove),
            1 => Just(Op::Checkpoint),
            1 => Just(Op::Rollback),
        ]
    }

    proptest! {
        #[test]
        fn tracker_matches_scratch_recomputation(
            edges in proptest::collection::vec((0usize..12, 0usize..12), 0..40),
            ops in proptest::collection::vec(op(), 200),
        ) {
            let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a != b).collect();
            let g = Graph::from_edges(12, &edges);
            let mut tracker = ForestTracker::new(12, 3);
            let mut shadow = Coloring::new(12, 3);
            let mut saved: Vec<(Checkpoint, Coloring)> = Vec::new();
            for op in ops {
                match op {
                    Op::Move(v, c) => {
                        tracker.remove(&g, v);
                        tracker.add(&g, v, c);
                        shadow.assign(v, c);
                    }
                    Op::Remove(v) => {
                        tracker.remove(&g, v);
                        shadow.unassign(v);
                    }
                    Op::Checkpoint => saved.push((tracker.checkpoint(), shadow.clone())),
                    Op::Rollback => {
                        if let Some((cp, old)) = saved.pop() {
                            tracker.rollback(cp).unwrap();
                            shadow = old;
                        }
                    }
                }
                for c in 1..=3 {
                    prop_assert_eq!(
                        tracker.is_forest(c),
                        class_induces_forest(&g, &shadow, c).is_ok()
                    );
                    prop_assert_eq!(tracker.class_len(c), shadow.class_size(c));
                }
            }
        }
    }
}
