//! Pairwise harmonic couplings behind a Gaussian increment energy.
//!
//! With monomer positions `x_0..x_n` and increments `y_k = x_k − x_{k−1}`
//! (`k = 1..n`), the energy `(y, A y)` equals `Σ_{k,l} g_kl (x_k − x_l)²`
//! summed over all *ordered* pairs. The position-space matrix `𝓗` built from
//! the same `g` uses the unordered sum `Σ_{k>l}`, so `⟨x, 𝓗 x⟩ = ½ (y, A y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{chain_increment_cov, ChainModel};
use crate::linalg::{eigenvalues_sym, invert, SymMatrix};

/// Symmetric coupling constants with zero diagonal over `size` monomers.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    size: usize,
    g: Vec<f64>,
}

impl CouplingProfile {
    /// Builds from `f(k, l)` on `k < l`; the diagonal is zero.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(size >= 2, "a coupling profile needs at least two monomers");
        let mut g = vec![0.0; size * size];
        for k in 0..size {
            for l in (k + 1)..size {
                let v = f(k, l);
                g[k * size + l] = v;
                g[l * size + k] = v;
            }
        }
        CouplingProfile { size, g }
    }

    pub fn from_row_major(size: usize, g: Vec<f64>) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter("a coupling profile needs at least two monomers".into()));
        }
        if g.len() != size * size {
            return Err(Error::DimensionMismatch { expected: size * size, got: g.len() });
        }
        for k in 0..size {
            if g[k * size + k] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero self-coupling at monomer {k}")));
            }
            for l in (k + 1)..size {
                if g[k * size + l].to_bits() != g[l * size + k].to_bits() {
                    return Err(Error::NotSymmetric { row: k, col: l });
                }
            }
        }
        Ok(CouplingProfile { size, g })
    }

    pub fn zeros(size: usize) -> Self {
        Self::from_fn(size, |_, _| 0.0)
    }

    /// Monomer count `n + 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.g[k * self.size + l]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.g
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `Σ_{k,l}` over ordered pairs of `g_kl (x_k − x_l)²`.
    pub fn ordered_pair_energy(&self, x: &[f64]) -> f64 {
        2.0 * self.pair_energy(x)
    }

    /// `Σ_{k>l} g_kl (x_k − x_l)²`.
    pub fn pair_energy(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.size);
        let mut e = 0.0;
        for k in 0..self.size {
            for l in 0..k {
                let dx = x[k] - x[l];
                e += self.get(k, l) * dx * dx;
            }
        }
        e
    }
}

/// Position-space energy matrix `𝓗` with the constant vector as zero mode.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyMatrixH {
    pub h: SymMatrix,
}

impl EnergyMatrixH {
    /// `max_i |(𝓗 · 1)_i|`.
    pub fn zero_mode_residual(&self) -> f64 {
        let ones = vec![1.0; self.h.dim()];
        self.h.mul_vec(&ones).iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Couplings from a symmetric `n × n` increment energy matrix.
///
/// `g_kl = −½ (a_{k,l} + a_{k+1,l+1} − a_{k,l+1} − a_{k+1,l})` with `a` indexed
/// from 1 and zero outside `1..=n`. The diagonal `g_kk` the formula produces
/// multiplies `(x_k − x_k)² = 0` and is dropped.
pub fn couplings_from_energy(a: &SymMatrix) -> CouplingProfile {
    let n = a.dim();
    let at = |k: usize, l: usize| -> f64 {
        if (1..=n).contains(&k) && (1..=n).contains(&l) {
            a.get(k - 1, l - 1)
        } else {
            0.0
        }
    };
    CouplingProfile::from_fn(n + 1, |k, l| {
        -0.5 * (at(k, l) + at(k + 1, l + 1) - at(k, l + 1) - at(k + 1, l))
    })
}

/// Inverse map: `a_st = 2 Σ_{i<s} Σ_{k≥t} g_ik` for `1 ≤ s ≤ t ≤ n`.
pub fn energy_from_couplings(gp: &CouplingProfile) -> SymMatrix {
    let size = gp.size();
    let n = size - 1;
    // block[s][t] = Σ_{i<s} Σ_{k≥t} g_ik, s, t in 0..=size
    let stride = size + 1;
    let mut block = vec![0.0; stride * stride];
    for s in 1..=size {
        let i = s - 1;
        let mut tail = 0.0;
        for t in (0..size).rev() {
            tail += gp.get(i, t);
            block[s * stride + t] = block[(s - 1) * stride + t] + tail;
        }
    }
    SymMatrix::from_fn(n, |s0, t0| {
        let (s, t) = (s0 + 1, t0 + 1);
        2.0 * block[s * stride + t]
    })
}

/// `h_ik = −g_ik` off the diagonal, `h_ii = Σ_j g_ij`.
pub fn h_matrix(gp: &CouplingProfile) -> EnergyMatrixH {
    let size = gp.size();
    let row_sums: Vec<f64> = (0..size).map(|i| (0..size).map(|j| gp.get(i, j)).sum()).collect();
    let h = SymMatrix::from_fn(size, |i, k| if i == k { row_sums[i] } else { -gp.get(i, k) });
    EnergyMatrixH { h }
}

/// Couplings of `center` to every other monomer, in index order.
pub fn coupling_slice(gp: &CouplingProfile, center: usize) -> Result<Vec<(usize, f64)>> {
    if center >= gp.size() {
        return Err(Error::IndexOutOfRange { index: center, len: gp.size() });
    }
    Ok((0..gp.size()).filter(|&i| i != center).map(|i| (i, gp.get(center, i))).collect())
}

/// Energy matrix `A = R⁻¹` of an open fBm chain.
pub fn chain_energy(model: &ChainModel) -> Result<SymMatrix> {
    invert(&chain_increment_cov(model))
}

/// Full chain pipeline: increment covariance, inverse, couplings.
pub fn chain_couplings(model: &ChainModel) -> Result<CouplingProfile> {
    Ok(couplings_from_energy(&chain_energy(model)?))
}

/// Spectrum of `𝓗` next to the spectrum of `A`.
///
/// The two agree for a single increment but not in general (already
/// `A = I₂` gives nonzero `𝓗` eigenvalues `{½, 3/2}`), so both are reported.
#[derive(Debug, Clone, Serialize)]
pub struct SpectraComparison {
    /// All `n + 1` eigenvalues of `𝓗`, ascending.
    pub h_eigenvalues: Vec<f64>,
    /// All `n` eigenvalues of `A`, ascending.
    pub a_eigenvalues: Vec<f64>,
    pub max_abs_difference_excluding_zero_mode: f64,
}

pub fn compare_spectra(a: &SymMatrix) -> Result<SpectraComparison> {
    let h = h_matrix(&couplings_from_energy(a));
    let h_eigenvalues = eigenvalues_sym(&h.h)?;
    let a_eigenvalues = eigenvalues_sym(a)?;
    let max_abs_difference_excluding_zero_mode = h_eigenvalues[1..]
        .iter()
        .zip(&a_eigenvalues)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(SpectraComparison { h_eigenvalues, a_eigenvalues, max_abs_difference_excluding_zero_mode })
}

/// Forward differences `y_k = x_k − x_{k−1}`, `k = 1..n`.
pub fn increments_of(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}
