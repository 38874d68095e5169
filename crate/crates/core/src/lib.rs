//! Spectral analysis of the bipartite graph family W(n,k).
//!
//! W(n,k) is `(k+1)`-regular and bipartite on `2nk` vertices: `n` rings,
//! each a complete bipartite join of `k + k` vertices, consecutive rings
//! linked by a perfect matching. Its spectrum is known in closed form and
//! has no eigenvalues in `(-1, 1)` or `+-(1, k-1)`.
//!
//! - [`graph`]: generators (W, P, Heawood, cycles), matrices, JSON files.
//! - [`closed_form`]: the exact spectrum, the `Q` matrix and its Gram
//!   identities, and the limit measure of the infinite graph.
//! - [`spectral`]: dense symmetric eigensolves and spectrum predicates.
//! - [`analysis`]: grid verification, interlacing exceptions, spectral
//!   distributions, and the subcubic bipartite scanner.
//! - [`exec`]: sequential/parallel execution policy.

pub mod analysis;
pub mod closed_form;
pub mod error;
pub mod exec;
pub mod graph;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Exec;
