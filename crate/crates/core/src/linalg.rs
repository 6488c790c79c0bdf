//! Dense symmetric linear algebra.
//!
//! Everything downstream (covariances, energy matrices, position-space
//! energy matrices) is a small dense symmetric matrix, so this module keeps
//! one storage type, [`SymMatrix`], with full row-major storage and exact
//! symmetry enforced at construction.

use std::fmt;
use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sweep budget of the cyclic Jacobi eigensolver.
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix, `m[(i, k)] == m[(k, i)]` bit for bit.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from `f(i, k)` evaluated on the upper triangle and mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be at least 1");
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for k in i..dim {
                let v = f(i, k);
                data[i * dim + k] = v;
                data[k * dim + i] = v;
            }
        }
        SymMatrix { dim, data }
    }

    /// Takes ownership of row-major data, rejecting anything not exactly symmetric.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        for i in 0..dim {
            for k in (i + 1)..dim {
                if data[i * dim + k].to_bits() != data[k * dim + i].to_bits() {
                    return Err(Error::NotSymmetric { row: i, col: k });
                }
            }
        }
        Ok(SymMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Symmetrizes nearly-symmetric data by averaging `(i, k)` with `(k, i)`.
    pub(crate) fn symmetrized(dim: usize, data: &[f64]) -> Self {
        Self::from_fn(dim, |i, k| 0.5 * (data[i * dim + k] + data[k * dim + i]))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, k| if i == k { 1.0 } else { 0.0 })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| 0.0)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, k| if i == k { values[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.dim + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Plain product `self · other`, row-major (generally not symmetric).
    pub fn matmul(&self, other: &SymMatrix) -> Vec<f64> {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(j);
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, o) in dst.iter_mut().zip(orow) {
                    *d += a * o;
                }
            }
        }
        out
    }

    /// Leading `size × size` principal block.
    pub fn leading_block(&self, size: usize) -> SymMatrix {
        assert!(size >= 1 && size <= self.dim);
        SymMatrix::from_fn(size, |i, k| self.get(i, k))
    }

    /// Largest `|m(i,k) − m(k,i)|`; zero for every constructed value.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for k in (i + 1)..self.dim {
                worst = worst.max((self.get(i, k) - self.get(k, i)).abs());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, k): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + k]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Default positive-definiteness tolerance: `1e-9 · dim · max|entry|`.
pub fn default_tol_pd(m: &SymMatrix) -> f64 {
    1e-9 * m.dim() as f64 * m.max_abs()
}

/// Lower-triangular Cholesky factor, row-major with zeros above the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerFactor {
    dim: usize,
    data: Vec<f64>,
}

impl LowerFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.dim + k]
    }

    /// `L · Lᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_fn(n, |i, k| (0..=i.min(k)).map(|j| self.get(i, j) * self.get(k, j)).sum())
    }

    fn solve_lower(&self, b: &mut [f64]) {
        let n = self.dim;
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.data[i * n + j] * b[j];
            }
            b[i] = s / self.data[i * n + i];
        }
    }

    fn solve_upper_transposed(&self, b: &mut [f64]) {
        let n = self.dim;
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.data[j * n + i] * b[j];
            }
            b[i] = s / self.data[i * n + i];
        }
    }

    /// Solves `L Lᵀ x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_lower(&mut x);
        self.solve_upper_transposed(&mut x);
        x
    }
}

/// Cholesky factorization with the default tolerance.
pub fn cholesky(m: &SymMatrix) -> Result<LowerFactor> {
    cholesky_with_tol(m, default_tol_pd(m))
}

/// Cholesky factorization; a pivot `≤ tol_pd` is reported as [`Error::NotPositiveDefinite`].
pub fn cholesky_with_tol(m: &SymMatrix, tol_pd: f64) -> Result<LowerFactor> {
    let n = m.dim();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= l[j * n + k] * l[j * n + k];
        }
        if !(pivot > tol_pd) {
            return Err(Error::NotPositiveDefinite { pivot_index: j });
        }
        let d = pivot.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(LowerFactor { dim: n, data: l })
}

/// Inverse of a positive definite matrix through its Cholesky factor.
pub fn invert(m: &SymMatrix) -> Result<SymMatrix> {
    let factor = cholesky(m)?;
    let n = m.dim();
    let mut inv = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|c| *c = 0.0);
        col[j] = 1.0;
        factor.solve_lower(&mut col);
        factor.solve_upper_transposed(&mut col);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Ok(SymMatrix::symmetrized(n, &inv))
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Row-major `dim × dim`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| self.vectors[i * n + j]).collect()
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn eigen_sym(m: &SymMatrix) -> Result<EigenDecomposition> {
    jacobi(m, true, DEFAULT_MAX_SWEEPS)
}

/// Eigenvalues only (ascending); skips the eigenvector accumulation.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    jacobi(m, false, DEFAULT_MAX_SWEEPS).map(|e| e.values)
}

pub fn eigen_sym_with_budget(m: &SymMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    jacobi(m, true, max_sweeps)
}

// Threshold cyclic Jacobi (Rutishauser's update with accumulated diagonal
// corrections). Only the strict upper triangle of `a` is kept current.
fn jacobi(m: &SymMatrix, with_vectors: bool, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut v = if with_vectors { SymMatrix::identity(n).data } else { Vec::new() };
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged_after = None;
    for sweep in 1..=max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        if off == 0.0 {
            converged_after = Some(sweep - 1);
            break;
        }
        let thresh = if sweep < 4 { 0.2 * off / (n * n) as f64 } else { 0.0 };

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= thresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;

                let rotate = |a: &mut [f64], x: usize, y: usize| {
                    let g = a[x];
                    let h = a[y];
                    a[x] = g - s * (h + g * tau);
                    a[y] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut a, j * n + p, j * n + q);
                }
                for j in (p + 1)..q {
                    rotate(&mut a, p * n + j, j * n + q);
                }
                for j in (q + 1)..n {
                    rotate(&mut a, p * n + j, q * n + j);
                }
                if with_vectors {
                    for j in 0..n {
                        rotate(&mut v, j * n + p, j * n + q);
                    }
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    let sweeps = converged_after.ok_or(Error::NoConvergence { sweeps: max_sweeps })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = if with_vectors {
        let mut out = vec![0.0; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                out[row * n + new_col] = v[row * n + old_col];
            }
        }
        out
    } else {
        Vec::new()
    };
    Ok(EigenDecomposition { values, vectors, sweeps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefinitenessVerdict {
    pub kind: Definiteness,
    pub min_eigenvalue: f64,
    /// Eigenvalues with `|λ| ≤ tol_pd`.
    pub zero_mode_count: usize,
    pub tol_pd: f64,
}

/// Classifies with the default tolerance [`default_tol_pd`].
pub fn classify_definiteness(m: &SymMatrix) -> Result<DefinitenessVerdict> {
    classify_definiteness_with_tol(m, default_tol_pd(m))
}

pub fn classify_definiteness_with_tol(m: &SymMatrix, tol_pd: f64) -> Result<DefinitenessVerdict> {
    let values = eigenvalues_sym(m)?;
    Ok(verdict_from_eigenvalues(&values, tol_pd))
}

/// Verdict from an already computed spectrum.
pub fn verdict_from_eigenvalues(values: &[f64], tol_pd: f64) -> DefinitenessVerdict {
    let min_eigenvalue = values.iter().copied().fold(f64::INFINITY, f64::min);
    let zero_mode_count = values.iter().filter(|v| v.abs() <= tol_pd).count();
    let kind = if min_eigenvalue > tol_pd {
        Definiteness::PositiveDefinite
    } else if min_eigenvalue < -tol_pd {
        Definiteness::Indefinite
    } else {
        Definiteness::PositiveSemidefinite
    };
    DefinitenessVerdict { kind, min_eigenvalue, zero_mode_count, tol_pd }
}
