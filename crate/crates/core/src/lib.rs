//! Discretized fractional Brownian chains and rings as Gaussian harmonic
//! spring networks.
//!
//! The crate converts between increment covariances, energy matrices and
//! pairwise coupling constants, computes ring spectra from circulant
//! structure, classifies admissibility, locates sign changes of couplings
//! in the Hurst index, designs stiff ring models and samples conformations.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod circulant;
pub mod coupling;
pub mod critical;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod ring;
pub mod stochastic;

pub use error::{Error, Result};
pub use linalg::SymMatrix;
