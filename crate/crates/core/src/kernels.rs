//! Covariance kernels of the discretized chain and the periodic (ring) fBm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Open chain: `n` unit increments `Y_0..Y_{n-1}` between `n + 1` monomers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainModel {
    n: usize,
    hurst: f64,
}

impl ChainModel {
    pub fn new(n: usize, hurst: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("chain needs at least one increment".into()));
        }
        check_hurst(hurst)?;
        Ok(ChainModel { n, hurst })
    }

    /// Chain of `monomers` positions, i.e. `monomers − 1` increments.
    pub fn from_monomers(monomers: usize, hurst: f64) -> Result<Self> {
        if monomers < 2 {
            return Err(Error::InvalidParameter(format!("chain needs at least 2 monomers, got {monomers}")));
        }
        Self::new(monomers - 1, hurst)
    }

    pub fn increments(&self) -> usize {
        self.n
    }

    pub fn monomers(&self) -> usize {
        self.n + 1
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }
}

/// `N` equidistant sites on a circle of circumference `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RingGeometry {
    sites: usize,
}

impl RingGeometry {
    pub fn new(sites: usize) -> Result<Self> {
        if sites < 3 {
            return Err(Error::InvalidParameter(format!("ring needs at least 3 sites, got {sites}")));
        }
        Ok(RingGeometry { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Number of distinct nonzero geodesic distances, `⌊N/2⌋`.
    pub fn distinct_distances(&self) -> usize {
        self.sites / 2
    }

    /// Geodesic distance of a signed lag, `min(|Δ| mod N, N − |Δ| mod N)`.
    pub fn lag_distance(&self, lag: i64) -> usize {
        let n = self.sites as i64;
        let r = lag.rem_euclid(n);
        r.min(n - r) as usize
    }
}

pub(crate) fn check_hurst(hurst: f64) -> Result<()> {
    if hurst > 0.0 && hurst <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("Hurst index must lie in (0, 1], got {hurst}")))
    }
}

/// `|x|^{2H}` with the convention `0^{2H} = 0`.
#[inline]
fn structure(x: f64, hurst: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        0.0
    } else {
        x.powf(2.0 * hurst)
    }
}

/// Stationary fBm increment autocovariance at integer lag `d`.
pub fn increment_autocov(lag: i64, hurst: f64) -> f64 {
    if lag == 0 {
        return 1.0;
    }
    let d = lag as f64;
    0.5 * structure(d + 1.0, hurst) + 0.5 * structure(d - 1.0, hurst) - structure(d, hurst)
}

/// Increment covariance `R(i,k) = E(Y_i Y_k)` of the open chain (Toeplitz, unit diagonal).
pub fn chain_increment_cov(model: &ChainModel) -> SymMatrix {
    let h = model.hurst();
    let lags: Vec<f64> = (0..model.increments() as i64).map(|d| increment_autocov(d, h)).collect();
    SymMatrix::from_fn(model.increments(), |i, k| lags[k - i])
}

pub fn geodesic_distance(geom: &RingGeometry, i: usize, k: usize) -> Result<usize> {
    let n = geom.sites();
    for idx in [i, k] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, len: n });
        }
    }
    Ok(geom.lag_distance(i as i64 - k as i64))
}

/// Position covariance `E(X_k X_l) = (d(k)^{2H} + d(l)^{2H} − d(k−l)^{2H}) / 2`, pinned at `X_0 = 0`.
pub fn ring_position_cov(geom: &RingGeometry, hurst: f64) -> Result<SymMatrix> {
    check_hurst(hurst)?;
    let d = |lag: i64| structure(geom.lag_distance(lag) as f64, hurst);
    Ok(SymMatrix::from_fn(geom.sites(), |k, l| {
        let (k, l) = (k as i64, l as i64);
        0.5 * (d(k) + d(l) - d(k - l))
    }))
}

/// First row of the circulant ring increment covariance.
pub fn ring_increment_row(geom: &RingGeometry, hurst: f64) -> Result<Vec<f64>> {
    check_hurst(hurst)?;
    let d = |lag: i64| structure(geom.lag_distance(lag) as f64, hurst);
    Ok((0..geom.sites() as i64)
        .map(|lag| 0.5 * (d(lag + 1) + d(lag - 1) - 2.0 * d(lag)))
        .collect())
}

/// Increment covariance `E(Y_k Y_l)` of the ring, `Y_k = X_{k+1} − X_k` with `X_N ≡ X_0`.
pub fn ring_increment_cov(geom: &RingGeometry, hurst: f64) -> Result<SymMatrix> {
    let row = ring_increment_row(geom, hurst)?;
    let n = geom.sites();
    Ok(SymMatrix::from_fn(n, |i, k| row[(k + n - i) % n]))
}
