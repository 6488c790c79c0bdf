use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{default_tol_pd, eigen_sym, SymMatrix};

/// Paths per block when accumulating second moments; fixed so that the
/// floating-point summation order does not depend on the thread count.
const MOMENT_BLOCK: usize = 1024;

/// Independent ChaCha8 stream for one path.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// `paths × dim` samples, row-major, one path per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub paths: usize,
    pub dim: usize,
    pub values: Vec<f64>,
    pub seed: u64,
    pub model_tag: String,
}

impl SampleBatch {
    /// Fills each path in parallel from its own stream.
    pub(crate) fn generate(
        paths: usize,
        dim: usize,
        seed: u64,
        model_tag: String,
        fill: impl Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
    ) -> Self {
        let mut values = vec![0.0; paths * dim];
        if dim > 0 {
            values.par_chunks_mut(dim).enumerate().for_each(|(p, row)| {
                let mut rng = path_rng(seed, p as u64);
                fill(&mut rng, row);
            });
        }
        SampleBatch { paths, dim, values, seed, model_tag }
    }

    pub fn path(&self, p: usize) -> &[f64] {
        &self.values[p * self.dim..(p + 1) * self.dim]
    }

    /// `(1/paths) Σ_p x_p x_pᵀ`, the covariance estimate for a centred process.
    pub fn second_moments(&self) -> SymMatrix {
        let d = self.dim;
        let partials: Vec<Vec<f64>> = self
            .values
            .par_chunks(MOMENT_BLOCK * d)
            .map(|block| {
                let mut acc = vec![0.0; d * d];
                for row in block.chunks(d) {
                    for i in 0..d {
                        let ri = row[i];
                        for k in i..d {
                            acc[i * d + k] += ri * row[k];
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![0.0; d * d];
        for part in &partials {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        let scale = 1.0 / self.paths as f64;
        SymMatrix::from_fn(d, |i, k| total[i * d + k] * scale)
    }
}

/// `cov = F Fᵀ` with `F = V √Λ`, zero modes dropped.
#[derive(Debug, Clone)]
pub struct SpectralFactor {
    dim: usize,
    /// `dim × rank`, row-major.
    factor: Vec<f64>,
    rank: usize,
    /// Eigenvectors whose eigenvalue was clamped to zero.
    pub null_space: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
}

impl SpectralFactor {
    pub fn new(cov: &SymMatrix, tol_pd: f64) -> Result<Self> {
        let eig = eigen_sym(cov)?;
        let dim = cov.dim();
        let min_eigenvalue = eig.values[0];
        if min_eigenvalue < -tol_pd {
            return Err(Error::IndefiniteCovariance { min_eigenvalue });
        }
        let kept: Vec<usize> = (0..dim).filter(|&j| eig.values[j] > tol_pd).collect();
        let null_space = (0..dim).filter(|&j| eig.values[j] <= tol_pd).map(|j| eig.vector(j)).collect();
        let rank = kept.len();
        let mut factor = vec![0.0; dim * rank];
        for (c, &j) in kept.iter().enumerate() {
            let s = eig.values[j].sqrt();
            for i in 0..dim {
                factor[i * rank + c] = eig.vectors[i * dim + j] * s;
            }
        }
        Ok(SpectralFactor { dim, factor, rank, null_space, min_eigenvalue })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn apply(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.factor[i * self.rank..(i + 1) * self.rank].iter().zip(z).map(|(f, z)| f * z).sum();
        }
    }
}

/// Exact samples from `N(0, cov)` with the default tolerance.
pub fn sample_gaussian(cov: &SymMatrix, paths: usize, seed: u64) -> Result<SampleBatch> {
    sample_gaussian_with_tol(cov, paths, seed, default_tol_pd(cov))
}

/// Eigenvalues in `[−tol_pd, tol_pd]` are treated as exact zeros; anything
/// below `−tol_pd` is rejected as [`Error::IndefiniteCovariance`].
pub fn sample_gaussian_with_tol(cov: &SymMatrix, paths: usize, seed: u64, tol_pd: f64) -> Result<SampleBatch> {
    let factor = SpectralFactor::new(cov, tol_pd)?;
    let tag = format!("gaussian(dim={}, rank={})", factor.dim, factor.rank);
    Ok(SampleBatch::generate(paths, cov.dim(), seed, tag, |rng, row| {
        let z: Vec<f64> = (0..factor.rank).map(|_| StandardNormal.sample(rng)).collect();
        factor.apply(&z, row);
    }))
}

/// One standard deviation of the second-moment estimator of `cov(i, k)`.
pub fn statistical_bound(cov: &SymMatrix, i: usize, k: usize, paths: usize) -> f64 {
    ((cov.get(i, i) * cov.get(k, k) + cov.get(i, k).powi(2)) / paths as f64).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceErrorReport {
    pub paths: usize,
    pub sigmas: f64,
    pub max_abs_error: f64,
    /// Largest `|error| / (1σ bound)` over all entries.
    pub max_sigma_ratio: f64,
    pub worst_entry: (usize, usize),
    pub within_bound: bool,
}

/// Compares an empirical covariance with its target entry by entry against
/// `sigmas · √((c_ii c_kk + c_ik²) / paths)`. Entries with a zero bound must
/// match to `1e-12`.
pub fn covariance_error(empirical: &SymMatrix, target: &SymMatrix, paths: usize, sigmas: f64) -> CovarianceErrorReport {
    assert_eq!(empirical.dim(), target.dim());
    let d = target.dim();
    let mut max_abs_error = 0.0_f64;
    let mut max_sigma_ratio = 0.0_f64;
    let mut worst_entry = (0, 0);
    for i in 0..d {
        for k in i..d {
            let err = (empirical.get(i, k) - target.get(i, k)).abs();
            max_abs_error = max_abs_error.max(err);
            let bound = statistical_bound(target, i, k, paths);
            let ratio = if bound > 0.0 {
                err / bound
            } else if err <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            if ratio > max_sigma_ratio {
                max_sigma_ratio = ratio;
                worst_entry = (i, k);
            }
        }
    }
    CovarianceErrorReport { paths, sigmas, max_abs_error, max_sigma_ratio, worst_entry, within_bound: max_sigma_ratio <= sigmas }
}
