//! Expected Fourier energy of periodic fBm,
//! `E|∫₀^{2π} b^H(t) e^{int} dt|² = −(4π² / n^{2H+1}) ∫₀^π x^{2H} cos(nx) dx`.

use std::f64::consts::PI;

use super::quadrature::integrate_adaptive;
use crate::error::{Error, Result};

/// Absolute tolerance on the inner integral `∫₀^π x^{2H} cos(nx) dx`.
pub const ISTAS_DEFAULT_TOL: f64 = 1e-13;

const MAX_INTERVALS_PER_PANEL: usize = 4_000;

/// `∫₀^π x^p cos(nx) dx`, split at the zeros `(j + ½)π/n` of the cosine.
pub fn power_cosine_integral(power: f64, mode: u32, abs_tol: f64) -> Result<f64> {
    if mode == 0 {
        return Err(Error::InvalidParameter("mode must be at least 1".into()));
    }
    let n = mode as f64;
    let mut breaks = vec![0.0];
    breaks.extend((0..mode).map(|j| (j as f64 + 0.5) * PI / n));
    breaks.push(PI);
    let panel_tol = abs_tol / (breaks.len() - 1) as f64;
    let integrand = |x: f64| if x == 0.0 { 0.0 } else { x.powf(power) } * (n * x).cos();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate_adaptive(integrand, w[0], w[1], panel_tol, MAX_INTERVALS_PER_PANEL)?.value;
    }
    Ok(total)
}

pub fn istas_fourier_energy(hurst: f64, mode: u32) -> Result<f64> {
    istas_fourier_energy_with_tol(hurst, mode, ISTAS_DEFAULT_TOL)
}

pub fn istas_fourier_energy_with_tol(hurst: f64, mode: u32, abs_tol: f64) -> Result<f64> {
    crate::kernels::check_hurst(hurst)?;
    let inner = power_cosine_integral(2.0 * hurst, mode, abs_tol)?;
    let n = mode as f64;
    Ok(-4.0 * PI * PI / n.powf(2.0 * hurst + 1.0) * inner)
}
