//! Bisection for the Hurst index at which a chain coupling changes sign.

use serde::Serialize;

use crate::coupling::chain_couplings;
use crate::error::{Error, Result};
use crate::kernels::ChainModel;

pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Coupling `g(center, center + offset)` of a chain with `monomers` positions at Hurst index `hurst`.
pub fn coupling_at(monomers: usize, hurst: f64, center: usize, offset: i64) -> Result<f64> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!("Hurst index must lie in (0, 1), got {hurst}")));
    }
    let partner = partner_index(monomers, center, offset)?;
    let g = chain_couplings(&ChainModel::from_monomers(monomers, hurst)?)?;
    Ok(g.get(center, partner))
}

fn partner_index(monomers: usize, center: usize, offset: i64) -> Result<usize> {
    if center >= monomers {
        return Err(Error::IndexOutOfRange { index: center, len: monomers });
    }
    if offset == 0 {
        return Err(Error::InvalidParameter("offset must be nonzero".into()));
    }
    let partner = center as i64 + offset;
    if partner < 0 || partner >= monomers as i64 {
        return Err(Error::IndexOutOfRange { index: partner.max(0) as usize, len: monomers });
    }
    Ok(partner as usize)
}

/// Middle monomer (0-based) of a chain.
pub fn middle(monomers: usize) -> usize {
    (monomers - 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignChangeQuery {
    pub monomers: usize,
    pub center: usize,
    pub offset: i64,
    pub bracket: (f64, f64),
    pub tol: f64,
}

impl SignChangeQuery {
    /// Middle monomer, bracket `(0.6, 0.9)`, tolerance `1e-6`.
    pub fn new(monomers: usize, offset: i64) -> Self {
        SignChangeQuery { monomers, center: middle(monomers), offset, bracket: (0.6, 0.9), tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalHurst {
    pub h_star: f64,
    pub iterations: usize,
    /// Coupling value at `h_star`.
    pub residual_coupling: f64,
    /// Largest absolute coupling of the center monomer at `h_star`.
    pub max_abs_coupling: f64,
    pub final_bracket: (f64, f64),
    pub monomers: usize,
}

/// Bisects on the sign of the coupling until the bracket is narrower than `tol`.
pub fn find_critical_hurst(q: &SignChangeQuery) -> Result<CriticalHurst> {
    let (mut lo, mut hi) = q.bracket;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::InvalidParameter(format!("bracket must satisfy 0 < lo < hi < 1, got ({lo}, {hi})")));
    }
    if !(q.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", q.tol)));
    }
    let f = |h: f64| coupling_at(q.monomers, h, q.center, q.offset);
    let g_lo = f(lo)?;
    let g_hi = f(hi)?;
    if g_lo == 0.0 {
        return finish(q, lo, lo, 0);
    }
    if g_hi == 0.0 {
        return finish(q, hi, hi, 0);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, g_lo, g_hi });
    }
    let lo_sign = g_lo.signum();
    let mut iterations = 0;
    while hi - lo > q.tol {
        if iterations == MAX_BISECTION_ITERATIONS {
            return Err(Error::MaxIterations { iterations });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let g_mid = f(mid)?;
        if g_mid == 0.0 {
            return finish(q, mid, mid, iterations);
        }
        if g_mid.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    finish(q, lo, hi, iterations)
}

fn finish(q: &SignChangeQuery, lo: f64, hi: f64, iterations: usize) -> Result<CriticalHurst> {
    let h_star = 0.5 * (lo + hi);
    let profile = chain_couplings(&ChainModel::from_monomers(q.monomers, h_star)?)?;
    let partner = partner_index(q.monomers, q.center, q.offset)?;
    let max_abs_coupling = (0..q.monomers)
        .filter(|&i| i != q.center)
        .map(|i| profile.get(q.center, i).abs())
        .fold(0.0, f64::max);
    Ok(CriticalHurst {
        h_star,
        iterations,
        residual_coupling: profile.get(q.center, partner),
        max_abs_coupling,
        final_bracket: (lo, hi),
        monomers: q.monomers,
    })
}
