use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexId};

pub type Rational = Ratio<i128>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("split needs block size t >= 3 (n = {n}, k = {k})")]
    BlockTooSmall { n: usize, k: usize },
    #[error("k must be at least 1")]
    NoColors,
}

/// Parameters of one recursion level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitParams {
    pub n: usize,
    pub k: usize,
    /// Block size `ceil(n / k)`.
    pub t: usize,
    /// Deficiency `k t - n`, the number of virtual clique vertices.
    pub r: usize,
    pub s: usize,
    /// `1 + t / s`, exact.
    #[serde(serialize_with = "serialize_ratio")]
    pub lambda: Rational,
    /// Number of vertices with degree at least `lambda * d`.
    pub mu: usize,
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn block_size(n: usize, k: usize) -> usize {
    n.div_ceil(k)
}

/// `s(t)`: 1 for `t <= 7`, `ceil(t / 5)` from 8 on.
pub fn s_of(t: usize) -> usize {
    if t <= 7 {
        1
    } else {
        t.div_ceil(5)
    }
}

pub fn lambda_of(t: usize) -> Rational {
    let s = s_of(t) as i128;
    Rational::new(s + t as i128, s)
}

impl SplitParams {
    /// Whether `degree >= lambda * d`, i.e. `degree * s >= (s + t) * d`.
    pub fn is_high_degree(&self, degree: usize, d: usize) -> bool {
        degree * self.s >= (self.s + self.t) * d
    }

    /// `lambda * d` as an exact rational.
    pub fn lambda_d(&self, d: usize) -> Rational {
        self.lambda * Rational::from_integer(d as i128)
    }
}

/// Derives `t, r, s, lambda` for `n` vertices and `k` colors and counts the
/// high-degree prefix of `degrees` (non-increasing).
pub fn compute_split_params(n: usize, k: usize, d: usize, degrees: &[usize]) -> Result<SplitParams, ParamError> {
    if k == 0 {
        return Err(ParamError::NoColors);
    }
    let t = block_size(n, k);
    if t < 3 {
        return Err(ParamError::BlockTooSmall { n, k });
    }
    let s = s_of(t);
    let mut params = SplitParams {
        n,
        k,
        t,
        r: k * t - n,
        s,
        lambda: lambda_of(t),
        mu: 0,
    };
    params.mu = degrees.iter().take_while(|&&deg| params.is_high_degree(deg, d)).count();
    debug_assert!(degrees.windows(2).all(|w| w[0] >= w[1]));
    Ok(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Remove this vertex (degree at most `d`), color the rest, then put it
    /// back into one of the `r + 1` short classes.
    Peel(VertexId),
    /// `2 (r + 1) <= d`: the degree split applies.
    NotApplicable,
}

/// Whether a vertex of degree at most `d` is guaranteed a short class with
/// at most one of its neighbors: `d < 2 (r + 1)`.
pub fn reduction_applies(d: usize, r: usize) -> bool {
    d < 2 * (r + 1)
}

/// Chooses the reduction step for a graph with `t >= 3`.
pub fn reduce_small_r(graph: &Graph, k: usize, d: usize) -> Result<Reduction, ParamError> {
    if k == 0 {
        return Err(ParamError::NoColors);
    }
    let n = graph.vertex_count();
    let t = block_size(n, k);
    if t < 3 {
        return Err(ParamError::BlockTooSmall { n, k });
    }
    if !reduction_applies(d, k * t - n) {
        return Ok(Reduction::NotApplicable);
    }
    let x = (0..n)
        .min_by_key(|&v| (graph.degree(v), v))
        .expect("t >= 3 implies n > 0");
    Ok(Reduction::Peel(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frac(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn worked_parameter_examples() {
        let p = compute_split_params(23, 5, 2, &[]).unwrap();
        assert_eq!((p.t, p.r, p.s, p.lambda), (5, 2, 1, frac(6, 1)));
        let p = compute_split_params(80, 8, 2, &[]).unwrap();
        assert_eq!((p.t, p.r, p.s, p.lambda), (10, 0, 2, frac(6, 1)));
        let p = compute_split_params(24, 3, 2, &[]).unwrap();
        assert_eq!((p.t, p.r, p.s, p.lambda), (8, 0, 2, frac(5, 1)));
        assert_eq!(
            compute_split_params(10, 5, 2, &[]),
            Err(ParamError::BlockTooSmall { n: 10, k: 5 })
        );
    }

    #[test]
    fn mu_uses_exact_threshold() {
        // t = 11: s = 3, lambda = 14/3; with d = 3 the threshold is exactly 14.
        let degrees = [15, 14, 14, 13, 2];
        let p = compute_split_params(31, 3, 3, &degrees).unwrap();
        assert_eq!(p.lambda, frac(14, 3));
        assert_eq!(p.mu, 3);
    }

    #[test]
    fn reduction_examples() {
        assert!(reduction_applies(2, 1));
        assert!(!reduction_applies(8, 3));
        assert!(!reduction_applies(2, 0));
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        // n = 5, k = 2: t = 3, r = 1, and d = 2 < 4.
        assert_eq!(reduce_small_r(&c5, 2, 2), Ok(Reduction::Peel(0)));
        assert_eq!(reduce_small_r(&c5, 1, 2), Ok(Reduction::NotApplicable));
    }

    proptest! {
        #[test]
        fn lambda_ranges(t in 3usize..5000) {
            let l = lambda_of(t);
            prop_assert_eq!(l, frac(1, 1) + frac(t as i128, s_of(t) as i128));
            if t <= 7 {
                prop_assert_eq!(s_of(t), 1);
                prop_assert!(l >= frac(4, 1) && l <= frac(8, 1));
            } else {
                prop_assert_eq!(s_of(t), t.div_ceil(5));
                prop_assert!(l > frac(43, 10) && l <= frac(6, 1));
            }
        }

        #[test]
        fn params_invariants(n in 1usize..2000, k in 1usize..200, d in 2usize..10) {
            prop_assume!(n > 2 * k);
            let p = compute_split_params(n, k, d, &[]).unwrap();
            prop_assert!(k * (p.t - 1) < n && n <= k * p.t);
            prop_assert!(p.r < k);
        }

        #[test]
        fn mu_ignores_tie_order(mut degrees in proptest::collection::vec(0usize..60, 1..50), d in 2usize..6) {
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            let n = 3 * degrees.len();
            let p = compute_split_params(n, 1, d, &degrees).unwrap();
            let direct = degrees.iter().filter(|&&x| Rational::from_integer(x as i128) >= p.lambda_d(d)).count();
            prop_assert_eq!(p.mu, direct);
        }
    }
}
