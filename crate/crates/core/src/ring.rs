//! Cyclic Gaussian models with distance-dependent couplings.
//!
//! A ring model is admissible when every energy eigenvalue `λ_m`, `m ≠ 0`,
//! is positive; `λ_0 = 0` is the translation mode. Admissibility is always
//! decided by the exact mode sweep. The closed-form conditions here
//! (`k² g_k / g_1 ≥ −1`, the `π² Σ k² |g_k|` bound and its zeta-function
//! version) are reported next to it as sufficient or asymptotic criteria.

use std::f64::consts::PI;

use serde::Serialize;

use crate::circulant::{mirrored_row, ring_spectrum, Circulant};
use crate::coupling::{couplings_from_energy, CouplingProfile};
use crate::error::{Error, Result};
use crate::kernels::{ring_increment_cov, RingGeometry};
use crate::linalg::invert;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingModel {
    sites: usize,
    g_by_distance: Vec<f64>,
}

impl RingModel {
    /// `g_by_distance[d − 1]` is the coupling at geodesic distance `d = 1..=⌊N/2⌋`.
    pub fn new(sites: usize, g_by_distance: Vec<f64>) -> Result<Self> {
        RingGeometry::new(sites)?;
        if g_by_distance.len() != sites / 2 {
            return Err(Error::DimensionMismatch { expected: sites / 2, got: g_by_distance.len() });
        }
        Ok(RingModel { sites, g_by_distance })
    }

    /// Nearest and next-nearest neighbour couplings only.
    pub fn two_coupling(sites: usize, g1: f64, g2: f64) -> Result<Self> {
        let mut g = vec![0.0; sites / 2];
        if g.len() < 2 {
            return Err(Error::InvalidParameter(format!("two-coupling ring needs N >= 4, got {sites}")));
        }
        g[0] = g1;
        g[1] = g2;
        Self::new(sites, g)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn g_by_distance(&self) -> &[f64] {
        &self.g_by_distance
    }

    pub fn g(&self, distance: usize) -> f64 {
        self.g_by_distance[distance - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.g_by_distance.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Energy eigenvalues in natural mode order `m = 0..N−1`.
    pub fn spectrum(&self) -> Vec<f64> {
        ring_spectrum(&self.g_by_distance, self.sites)
    }

    /// Expands to a full pair profile over the `N` sites.
    pub fn to_profile(&self) -> CouplingProfile {
        let geom = RingGeometry::new(self.sites).expect("validated at construction");
        CouplingProfile::from_fn(self.sites, |k, l| self.g(geom.lag_distance(l as i64 - k as i64)))
    }
}

/// Coupling matrix `G = circ(0, g_1, g_2, …, g_2, g_1)`.
pub fn build_g(rm: &RingModel) -> Circulant {
    Circulant::new(mirrored_row(&rm.g_by_distance, rm.sites)).expect("mirrored row is nonempty")
}

/// `𝓗 = g·1 − G` where `g` is the row sum of `G`.
pub fn build_h_ring(rm: &RingModel) -> Circulant {
    let row = mirrored_row(&rm.g_by_distance, rm.sites);
    let total: f64 = row.iter().sum();
    let h = row.iter().enumerate().map(|(k, v)| if k == 0 { total } else { -v }).collect();
    Circulant::new(h).expect("mirrored row is nonempty")
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// `min_{m ≠ 0} λ_m`.
    pub lambda_min_nonzero: f64,
    /// Modes `1..=⌊N/2⌋` with `λ_m ≤ tol` (each `m, N − m` pair listed once).
    pub violating_modes: Vec<usize>,
    /// `g_1 > π² Σ_{k≥2} k² |g_k|`; `None` outside the attractive-nearest,
    /// repulsive-rest regime where that bound applies.
    pub sufficient_bound_satisfied: Option<bool>,
    pub tol: f64,
    pub spectrum: Vec<f64>,
}

pub fn default_admissibility_tol(rm: &RingModel) -> f64 {
    1e-12 * rm.sites as f64 * rm.max_abs()
}

pub fn check_admissible(rm: &RingModel) -> AdmissibilityReport {
    check_admissible_with_tol(rm, default_admissibility_tol(rm))
}

pub fn check_admissible_with_tol(rm: &RingModel, tol: f64) -> AdmissibilityReport {
    let spectrum = rm.spectrum();
    let half = rm.sites / 2;
    let lambda_min_nonzero = spectrum[1..].iter().copied().fold(f64::INFINITY, f64::min);
    let violating_modes: Vec<usize> = (1..=half).filter(|&m| !(spectrum[m] > tol)).collect();
    AdmissibilityReport {
        admissible: violating_modes.is_empty(),
        lambda_min_nonzero,
        violating_modes,
        sufficient_bound_satisfied: stiff_bound(rm).map(|(g1, threshold)| g1 > threshold),
        tol,
        spectrum,
    }
}

/// `(g_1, π² Σ_{k=2}^{⌊N/2⌋} k² |g_k|)` when `g_1 > 0` and `g_k ≤ 0` for `k ≥ 2`.
fn stiff_bound(rm: &RingModel) -> Option<(f64, f64)> {
    let g = &rm.g_by_distance;
    if !(g[0] > 0.0) || g[1..].iter().any(|&v| v > 0.0) {
        return None;
    }
    Some((g[0], repulsion_weight(g)))
}

fn repulsion_weight(g: &[f64]) -> f64 {
    PI * PI * g.iter().enumerate().skip(1).map(|(i, v)| ((i + 1) * (i + 1)) as f64 * v.abs()).sum::<f64>()
}

/// Single extra coupling at distance `k`: asymptotic admissibility needs `k² g_k / g_1 ≥ −1`.
pub fn single_k_bound(k: usize, g1: f64, gk: f64) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("distance k must be at least 2, got {k}")));
    }
    if !(g1 > 0.0) {
        return Err(Error::NonpositiveG1 { g1 });
    }
    Ok((k * k) as f64 * gk / g1 >= -1.0)
}

/// Stiff power-law ring `g_1 > 0`, `g_k = −c k^{−γ}` for `k ≥ 2`, with its sufficient bounds.
#[derive(Debug, Clone, Serialize)]
pub struct PowerLawDesign {
    pub model: RingModel,
    pub gamma: f64,
    pub c: f64,
    /// `π² Σ_{k=2}^{⌊N/2⌋} k² |g_k|`.
    pub finite_threshold: f64,
    pub finite_bound: bool,
    /// `c π² (ζ(γ − 2) − 1)`; present when `γ > 3`.
    pub zeta_threshold: Option<f64>,
    /// `g_1 > zeta_threshold`, which guarantees admissibility for every `N`.
    pub zeta_bound: Option<bool>,
}

/// Builds the power-law model. With `require_infinite_guarantee`, `γ ≤ 3`
/// is rejected because `Σ k^{2−γ}` diverges.
pub fn power_law_ring(sites: usize, g1: f64, c: f64, gamma: f64, require_infinite_guarantee: bool) -> Result<PowerLawDesign> {
    if !(g1 > 0.0) {
        return Err(Error::NonpositiveG1 { g1 });
    }
    if !(c >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("need c >= 0 and finite gamma, got c = {c}, gamma = {gamma}")));
    }
    if require_infinite_guarantee && !(gamma > 3.0) {
        return Err(Error::InvalidExponent { gamma });
    }
    let half = sites / 2;
    let g: Vec<f64> = (1..=half).map(|k| if k == 1 { g1 } else { -c * (k as f64).powf(-gamma) }).collect();
    let model = RingModel::new(sites, g)?;
    let finite_threshold = repulsion_weight(model.g_by_distance());
    let zeta_threshold = if gamma > 3.0 { Some(c * PI * PI * zeta_minus_one_tail(gamma - 2.0)?) } else { None };
    Ok(PowerLawDesign {
        finite_bound: g1 > finite_threshold,
        zeta_bound: zeta_threshold.map(|t| g1 > t),
        zeta_threshold,
        finite_threshold,
        gamma,
        c,
        model,
    })
}

/// `ζ(s) − 1 = Σ_{k≥2} k^{−s}`: direct sum up to `K − 1`, Euler–Maclaurin tail from `K`.
pub fn zeta_minus_one_tail(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::DivergentSeries { s });
    }
    const K: u32 = 32;
    let head: f64 = (2..K).rev().map(|k| (k as f64).powf(-s)).sum();
    let kf = K as f64;
    let f = kf.powf(-s);
    // −B_{2j}/(2j)! · f^{(2j−1)}(K) for j = 1..4
    let p1 = s;
    let p3 = p1 * (s + 1.0) * (s + 2.0);
    let p5 = p3 * (s + 3.0) * (s + 4.0);
    let p7 = p5 * (s + 5.0) * (s + 6.0);
    let tail = kf * f / (s - 1.0) + 0.5 * f + p1 * f / kf / 12.0 - p3 * f / kf.powi(3) / 720.0
        + p5 * f / kf.powi(5) / 30240.0
        - p7 * f / kf.powi(7) / 1_209_600.0;
    Ok(head + tail)
}

/// Distance-reduced couplings of discrete periodic fBm.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicFbmCouplings {
    pub model: RingModel,
    pub hurst: f64,
    /// Largest deviation of any pair coupling from its distance average.
    pub circulant_deviation: f64,
}

/// Couplings of periodic fBm on `N` sites.
///
/// The `N` increments around a closed ring sum to zero, so the full
/// circulant increment covariance is singular. The energy comes from the
/// first `N − 1` increments (positions `X_0..X_{N−1}`), whose covariance is
/// the leading principal block; the resulting pair couplings depend only on
/// geodesic distance.
pub fn periodic_fbm_ring(geom: &RingGeometry, hurst: f64) -> Result<PeriodicFbmCouplings> {
    let n = geom.sites();
    let cov = ring_increment_cov(geom, hurst)?.leading_block(n - 1);
    let profile = couplings_from_energy(&invert(&cov)?);
    let half = geom.distinct_distances();
    let mut sums = vec![0.0; half];
    let mut counts = vec![0usize; half];
    for k in 0..n {
        for l in (k + 1)..n {
            let d = geom.lag_distance(l as i64 - k as i64);
            sums[d - 1] += profile.get(k, l);
            counts[d - 1] += 1;
        }
    }
    let g: Vec<f64> = sums.iter().zip(&counts).map(|(s, c)| s / *c as f64).collect();
    let mut circulant_deviation = 0.0_f64;
    for k in 0..n {
        for l in (k + 1)..n {
            let d = geom.lag_distance(l as i64 - k as i64);
            circulant_deviation = circulant_deviation.max((profile.get(k, l) - g[d - 1]).abs());
        }
    }
    Ok(PeriodicFbmCouplings { model: RingModel::new(n, g)?, hurst, circulant_deviation })
}
