//! Diagnostics for a vertex the constructive solver cannot place.
//!
//! The auditor measures the stuck state (layer count `y`, the split of the
//! remaining colored vertices into protected `A` and unprotected `B`, edge
//! counts) and evaluates the counting inequalities that rule such a state
//! out when `Δ >= 10 d`. It never influences the solver.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::Color;
use crate::graph::VertexId;

use super::params::{serialize_ratio, Rational, SplitParams};
use super::state::SolverState;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("vertex {0} is already colored")]
    AlreadyColored(VertexId),
    #[error("vertex {vertex} can still be placed in class {class}")]
    NotStuck { vertex: VertexId, class: Color },
    #[error("no class is short of t vertices")]
    NoSmallClass,
    #[error("vertex {0} is not in the extension order")]
    NotInOrder(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

/// One inequality evaluated on the stuck state, both sides exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    #[serde(serialize_with = "serialize_ratio")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(serialize_with = "serialize_ratio")]
    pub rhs: Rational,
    /// False when the inequality is vacuous or belongs to the other case.
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measured {
    /// Number of classes reachable in the witness digraph.
    pub y: usize,
    pub a: usize,
    pub b: usize,
    pub a_star: usize,
    /// Largest `e(M*, B)` over small classes `M_0`, and that class.
    pub m_star_edges: usize,
    pub m0_class: Color,
    pub vertex_degree: usize,
    pub class_sizes: Vec<usize>,
    pub layers: Vec<Vec<Color>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Audit {
    /// Level-local id of the stuck vertex.
    pub vertex: VertexId,
    /// 1-based position `i` of the vertex in the level's degree order.
    pub position: usize,
    /// 1 when `i < 3n/5`, else 2.
    pub case: u8,
    pub d: usize,
    pub delta: usize,
    pub params: SplitParams,
    pub measured: Measured,
    pub inequalities: Vec<InequalityCheck>,
}

impl Audit {
    /// Names of applicable inequalities that fail.
    pub fn violated(&self) -> Vec<&'static str> {
        self.inequalities
            .iter()
            .filter(|c| c.applicable && !c.holds)
            .map(|c| c.name)
            .collect()
    }
}

fn z(x: usize) -> Rational {
    Rational::from_integer(x as i128)
}

fn frac(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

struct Checks(Vec<InequalityCheck>);

impl Checks {
    fn push(
        &mut self,
        name: &'static str,
        statement: &'static str,
        lhs: Rational,
        relation: Relation,
        rhs: Rational,
        applicable: bool,
    ) {
        let holds = relation.holds(&lhs, &rhs);
        self.0.push(InequalityCheck {
            name,
            statement,
            lhs,
            relation,
            rhs,
            applicable,
            holds,
        });
    }
}

/// Measures a stuck state and evaluates the counting inequalities.
pub fn audit_stuck_state(state: &mut SolverState, v: VertexId) -> Result<Audit, AuditError> {
    if state.color(v).is_some() {
        return Err(AuditError::AlreadyColored(v));
    }
    let position = state
        .order()
        .iter()
        .position(|&u| u == v)
        .ok_or(AuditError::NotInOrder(v))?
        + 1;
    let params = state.params().clone();
    let (k, t) = (params.k, params.t);
    if let Some(class) = (1..=k as Color).find(|&c| state.is_small(c) && state.neighbors_in(v, c) <= 1) {
        return Err(AuditError::NotStuck { vertex: v, class });
    }
    let digraph = state.build_witness_digraph();
    if let Some(class) = state.insertion_target(&digraph, v) {
        return Err(AuditError::NotStuck { vertex: v, class });
    }
    let y = digraph.reachable_count();
    if y == 0 {
        return Err(AuditError::NoSmallClass);
    }

    let state: &SolverState = state;
    let graph = state.star_graph();
    let colors = state.colors();
    let in_layers = |u: VertexId| colors[u] != 0 && digraph.contains(colors[u]);
    let outside: Vec<VertexId> = (0..colors.len()).filter(|&u| colors[u] != 0 && !in_layers(u)).collect();
    let (a_set, b_set): (Vec<VertexId>, Vec<VertexId>) = outside.iter().partition(|&&u| state.is_protected(u));
    let a_star: Vec<VertexId> = a_set.iter().copied().filter(|&u| !state.is_virtual(u)).collect();

    let mut is_b = vec![false; colors.len()];
    b_set.iter().for_each(|&u| is_b[u] = true);
    let mut is_a_star = vec![false; colors.len()];
    a_star.iter().for_each(|&u| is_a_star[u] = true);

    let b_into_layers: usize = b_set
        .iter()
        .map(|&u| graph.neighbors(u).iter().filter(|&&w| in_layers(w)).count())
        .sum();
    let b_min_neighbors = b_set
        .iter()
        .flat_map(|&u| digraph.reachable().map(move |c| state.neighbors_in(u, c)))
        .min();
    let a_star_degrees: usize = a_star.iter().map(|&u| graph.degree(u)).sum();
    let a_star_inner: usize = a_star
        .iter()
        .map(|&u| graph.neighbors(u).iter().filter(|&&w| w > u && is_a_star[w]).count())
        .sum();
    let (m_star_edges, m0_class) = digraph.layers[0]
        .iter()
        .map(|&c| {
            let edges: usize = (0..colors.len())
                .filter(|&u| colors[u] == c && !state.is_virtual(u))
                .map(|u| graph.neighbors(u).iter().filter(|&&w| is_b[w]).count())
                .sum();
            (edges, c)
        })
        .max_by_key(|&(e, c)| (e, std::cmp::Reverse(c)))
        .expect("layer 0 is nonempty");

    let deg = graph.degree(v);
    let measured = Measured {
        y,
        a: a_set.len(),
        b: b_set.len(),
        a_star: a_star.len(),
        m_star_edges,
        m0_class,
        vertex_degree: deg,
        class_sizes: state.class_sizes().to_vec(),
        layers: digraph.layers.clone(),
    };

    let d = state.d();
    let delta = state.delta();
    let n = params.n;
    let (r, s) = (params.r, params.s);
    let lambda = params.lambda;
    let case = if 5 * position < 3 * n { 1 } else { 2 };
    let (zn, zk, zt, zr, zs, zd, zi, zy) = (z(n), z(k), z(t), z(r), z(s), z(d), z(position), z(y));
    let zdelta = z(delta);
    let one = z(1);
    let half_deg = z(deg / 2);

    use Relation::*;
    let mut c = Checks(Vec::new());
    c.push("regime-max-degree", "Δ >= 10d", zdelta, Ge, z(10) * zd, true);
    c.push("regime-colors", "2k >= Δ + 1", z(2) * zk, Ge, zdelta + one, true);
    c.push("split-deficiency", "2(r+1) <= d", z(2) * (zr + one), Le, zd, true);
    c.push(
        "greedy-failure-count",
        "i > (k - ⌊deg/2⌋) t + 2⌊deg/2⌋ - r",
        zi,
        Gt,
        (zk - half_deg) * zt + z(2) * half_deg - zr,
        true,
    );
    c.push(
        "greedy-failure-position",
        "i > (k - λd/2) t",
        zi,
        Gt,
        (zk - lambda * zd / z(2)) * zt,
        true,
    );
    c.push(
        "case1-degree-product",
        "2(n - i) < d t (1 + n/i)",
        z(2) * (zn - zi),
        Lt,
        zd * zt * (one + zn / zi),
        case == 1,
    );
    c.push(
        "order-slack",
        "n + k < t n / (t - 1)",
        zn + zk,
        Lt,
        zt * zn / (zt - one),
        true,
    );
    let alpha = zi / zn;
    let ratio_rhs = if alpha < one {
        frac(4, 3) * (one + alpha) / (alpha * (one - alpha))
    } else {
        z(0)
    };
    c.push(
        "case1-ratio-bound",
        "Δ/d < (4/3)(1 + α)/(α(1 - α)), α = i/n",
        zdelta / zd,
        Lt,
        ratio_rhs,
        case == 1 && alpha < one,
    );
    c.push("stuck-vertex-degree", "deg(v) >= 2y", z(deg), Ge, z(2) * zy, true);
    c.push(
        "outside-vertex-neighbors",
        "every B vertex has >= 2 neighbors in every reachable class",
        z(b_min_neighbors.unwrap_or(2)),
        Ge,
        z(2),
        !b_set.is_empty(),
    );
    c.push(
        "outside-edges-into-layers",
        "e(B, reachable classes) >= 2y|B|",
        z(b_into_layers),
        Ge,
        z(2) * zy * z(b_set.len()),
        true,
    );
    c.push(
        "high-degree-edge-mass",
        "Σ_{A*} deg - e(A*) > (λ - 1) d |A*|",
        z(a_star_degrees) - z(a_star_inner),
        Gt,
        (lambda - one) * zd * z(a_star.len()),
        !a_star.is_empty(),
    );
    c.push(
        "stuck-degree-position-bound",
        "deg(v) < d (1 + n/i)",
        z(deg),
        Lt,
        zd * (one + zn / zi),
        true,
    );
    c.push(
        "layer-count-vs-lambda",
        "2y < (λ - 1) d",
        z(2) * zy,
        Lt,
        (lambda - one) * zd,
        true,
    );
    c.push(
        "outside-size-identity",
        "|A| + |B| = t (k - y)",
        z(a_set.len() + b_set.len()),
        Eq,
        zt * (zk - zy),
        true,
    );
    c.push(
        "edge-count-lower",
        "e(G*) > 2y (|A| + |B| - r) + r(r-1)/2",
        z(graph.edge_count()),
        Gt,
        z(2) * zy * (z(a_set.len() + b_set.len()) - zr) + zr * (zr - one) / z(2),
        true,
    );
    c.push(
        "layer-quadratic",
        "(2y² - 2ky + kd) t > (d - 2y) r",
        (z(2) * zy * zy - z(2) * zk * zy + zk * zd) * zt,
        Gt,
        (zd - z(2) * zy) * zr,
        true,
    );
    c.push("layer-count-bound", "y < 0.6 d", zy, Lt, frac(3, 5) * zd, true);
    c.push(
        "outside-unprotected-lower",
        "|B| >= (t - s)(k - y) - r",
        z(b_set.len()),
        Ge,
        (zt - zs) * (zk - zy) - zr,
        true,
    );
    c.push(
        "small-class-edge-upper",
        "e(M*, B) <= sΔ + (t - s - 1) λ d",
        z(m_star_edges),
        Le,
        zs * zdelta + (zt - zs - one) * lambda * zd,
        true,
    );
    c.push(
        "final-degree-ratio",
        "(t - 2s) Δ < (1.2 (t - s) + (t - s - 1) λ + 1) d",
        (zt - z(2) * zs) * zdelta,
        Lt,
        (frac(6, 5) * (zt - zs) + (zt - zs - one) * lambda + one) * zd,
        true,
    );

    Ok(Audit {
        vertex: v,
        position,
        case,
        d,
        delta,
        params,
        measured,
        inequalities: c.0,
    })
}
