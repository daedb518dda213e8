//! Exact-arithmetic reconstruction of the singular arrangement and linear
//! automorphism groups of the unsquared measurement variety of four points
//! in the plane.
//!
//! The crate builds, from first principles and without any external computer
//! algebra system:
//!
//! - exact rational linear algebra and canonical subspaces ([`exactq`]),
//! - sparse multivariate polynomials over the rationals ([`mpoly`]),
//! - the squared/unsquared measurement varieties, rigidity matrices and the
//!   desk-scale rank probes ([`varieties`]),
//! - the 60-flat singular arrangement, its 46 intersection lines and the
//!   bipartite incidence graph ([`arrangement`]),
//! - colored-graph automorphism search ([`graphauto`]),
//! - lifting of graph automorphisms to projective linear maps and the matrix
//!   group closures of orders 768 / 11520 / 23040 / 24 ([`autgroup`]),
//! - the rank-6 reflection group, its root system and the Dynkin-type
//!   classification ([`coxeter`]).
//!
//! Everything group-theoretic is exact; only the tangent-space rank probes of
//! [`varieties::projection_rank_probe`] run in floating point, because
//! unsquared edge lengths are generically irrational.

pub mod arrangement;
pub mod autgroup;
pub mod coxeter;
pub mod exactq;
pub mod graphauto;
pub mod mpoly;
pub mod pipeline;
pub mod varieties;

pub use exactq::{QMatrix, Rational, Subspace};
pub use mpoly::MultiPoly;

/// Crate version, surfaced in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
