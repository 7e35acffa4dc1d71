//! Equitable tree-colorings of graphs.
//!
//! An equitable tree-`k`-coloring splits the vertices into `k` classes that
//! each induce a forest and whose sizes differ by at most one. This crate
//! provides:
//!
//! - [`constructive`]: a recursive solver for d-degenerate graphs that is
//!   designed to succeed whenever `Δ >= 10 d` and `k >= (Δ + 1)/2`, with an
//!   auditor for the states where it gets stuck,
//! - [`exact`]: a backtracking decision procedure for small graphs, and the
//!   equitable vertex arboricity `va_eq` and threshold `va_eq*`,
//! - [`coloring`]: the independent verifier,
//! - [`generators`]: seeded instance families,
//! - [`graph`] and [`io`]: the graph type, degeneracy and text formats.
//!
//! ```
//! use eqtree::constructive::{equitable_tree_color, theorem_min_k, Outcome};
//! use eqtree::generators::{random_d_degenerate_with_max_degree, Attach};
//!
//! let g = random_d_degenerate_with_max_degree(200, 2, Attach::Skewed, 7, 20, 100).unwrap();
//! let k = theorem_min_k(&g);
//! let Outcome::Colored(solved) = equitable_tree_color(&g, k).unwrap() else {
//!     panic!("stuck");
//! };
//! assert!(eqtree::coloring::verify(&g, &solved.coloring).unwrap().passed());
//! ```

pub mod coloring;
pub mod constructive;
pub mod exact;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod io;

pub use coloring::{verify, Color, Coloring, VerificationReport};
pub use graph::{Graph, VertexId};
