//! Exact Gaussian sampling, the reflected periodic Brownian construction and
//! the Fourier-energy integral of periodic fBm.
//!
//! Random numbers: every path `p` draws from its own ChaCha8 stream,
//! `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(p)`, and standard
//! normals come from `rand_distr::StandardNormal` (ziggurat). Batches are
//! therefore bit-reproducible for a fixed `(seed, model, paths)` regardless
//! of how many threads generate them.

mod brownian;
mod istas;
mod quadrature;
mod sampler;

pub use brownian::{
    brownian_bridge_ring, circulant_deviation, geodesic_half_cov, increments, piecewise_cov, reflected_brownian_ring,
    uniform_ring_grid,
};
pub use istas::{istas_fourier_energy, istas_fourier_energy_with_tol, power_cosine_integral, ISTAS_DEFAULT_TOL};
pub use quadrature::{integrate_adaptive, QuadratureResult};
pub use sampler::{
    covariance_error, path_rng, sample_gaussian, sample_gaussian_with_tol, statistical_bound, CovarianceErrorReport,
    SampleBatch, SpectralFactor,
};
