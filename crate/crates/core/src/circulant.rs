//! Circulant matrices and their closed-form spectra.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Circulant matrix given by its first row `(c_0, …, c_{N−1})`; row `i` is
/// the first row shifted right by `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circulant {
    first_row: Vec<f64>,
    symmetric: bool,
}

impl Circulant {
    pub fn new(first_row: Vec<f64>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::InvalidParameter("circulant needs a nonempty first row".into()));
        }
        let n = first_row.len();
        let symmetric = (1..n).all(|k| first_row[k].to_bits() == first_row[n - k].to_bits());
        Ok(Circulant { first_row, symmetric })
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn entry(&self, i: usize, k: usize) -> f64 {
        let n = self.dim();
        self.first_row[(k + n - i % n) % n]
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.symmetric {
            return Ok(());
        }
        let n = self.dim();
        let index = (1..n).find(|&k| self.first_row[k].to_bits() != self.first_row[n - k].to_bits()).unwrap_or(1);
        Err(Error::NotSymmetricCirculant { index })
    }

    pub fn dense(&self) -> Result<SymMatrix> {
        self.require_symmetric()?;
        Ok(SymMatrix::from_fn(self.dim(), |i, k| self.entry(i, k)))
    }

    pub fn max_abs(&self) -> f64 {
        self.first_row.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// `cos(2π j / n)` with `j` reduced to `min(j mod n, n − j mod n)`, so that
/// angles `j` and `−j` give bit-identical values.
#[inline]
pub(crate) fn unit_cos(j: usize, n: usize) -> f64 {
    let r = j % n;
    let r = r.min(n - r);
    (TAU * r as f64 / n as f64).cos()
}

#[inline]
fn unit_sin(j: usize, n: usize) -> f64 {
    (TAU * (j % n) as f64 / n as f64).sin()
}

/// `λ_m = Σ_k c_k cos(2π m k / N)` in natural mode order `m = 0..N−1`.
pub fn circulant_eigenvalues(c: &Circulant) -> Result<Vec<f64>> {
    c.require_symmetric()?;
    let n = c.dim();
    Ok((0..n)
        .map(|m| c.first_row.iter().enumerate().map(|(k, ck)| ck * unit_cos(m * k, n)).sum())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Cos,
    Sin,
}

/// One real Fourier eigenvector of a symmetric circulant.
#[derive(Debug, Clone, Serialize)]
pub struct CirculantMode {
    pub mode: usize,
    pub kind: ModeKind,
    pub eigenvalue: f64,
    /// Unit-norm vector `cos(2πjm/N)` or `sin(2πjm/N)` over `j`.
    pub vector: Vec<f64>,
}

/// Real orthonormal eigenbasis: cosine modes `m = 0..=⌊N/2⌋` and sine modes `m = 1..=⌊(N−1)/2⌋`.
pub fn circulant_eigenvectors(c: &Circulant) -> Result<Vec<CirculantMode>> {
    let values = circulant_eigenvalues(c)?;
    let n = c.dim();
    let normalize = |v: Vec<f64>| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / norm).collect::<Vec<_>>()
    };
    let mut modes = Vec::with_capacity(n);
    for m in 0..=n / 2 {
        let v = (0..n).map(|j| unit_cos(j * m, n)).collect();
        modes.push(CirculantMode { mode: m, kind: ModeKind::Cos, eigenvalue: values[m], vector: normalize(v) });
    }
    for m in 1..=(n - 1) / 2 {
        let v = (0..n).map(|j| unit_sin(j * m, n)).collect();
        modes.push(CirculantMode { mode: m, kind: ModeKind::Sin, eigenvalue: values[m], vector: normalize(v) });
    }
    Ok(modes)
}

/// Distance-indexed couplings `g_1..g_{⌊N/2⌋}` mirrored onto a full row
/// `(0, g_1, g_2, …, g_2, g_1)` of length `N`.
pub fn mirrored_row(g_by_distance: &[f64], sites: usize) -> Vec<f64> {
    assert_eq!(g_by_distance.len(), sites / 2, "expected floor(N/2) distance couplings");
    (0..sites)
        .map(|k| {
            let d = k.min(sites - k);
            if d == 0 {
                0.0
            } else {
                g_by_distance[d - 1]
            }
        })
        .collect()
}

/// Ring energy eigenvalue `λ_m = Σ_{k=1}^{N−1} g_k (1 − cos(2π m k / N))`, mirrored `g`.
pub fn ring_lambda(g_by_distance: &[f64], sites: usize, mode: usize) -> f64 {
    let row = mirrored_row(g_by_distance, sites);
    row.iter().enumerate().skip(1).map(|(k, gk)| gk * (1.0 - unit_cos(mode * k, sites))).sum()
}

/// `ring_lambda` for every mode in natural order.
pub fn ring_spectrum(g_by_distance: &[f64], sites: usize) -> Vec<f64> {
    let row = mirrored_row(g_by_distance, sites);
    (0..sites)
        .map(|m| row.iter().enumerate().skip(1).map(|(k, gk)| gk * (1.0 - unit_cos(m * k, sites))).sum())
        .collect()
}

/// Ascending copy, for multiset comparisons against a dense solver.
pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}
