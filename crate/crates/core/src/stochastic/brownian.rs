//! Periodic Brownian motion on a circle of circumference `2π`.

use std::f64::consts::{PI, TAU};

use rand_distr::{Distribution, StandardNormal};

use super::sampler::SampleBatch;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

fn check_time(t: f64) -> Result<()> {
    if (0.0..=TAU).contains(&t) {
        Ok(())
    } else {
        Err(Error::GridOutOfRange { t })
    }
}

/// Covariance of periodic Brownian motion pinned at `b(0) = 0`, by branches
/// over `0 ≤ s ≤ t ≤ 2π`.
pub fn piecewise_cov(s: f64, t: f64) -> Result<f64> {
    check_time(s)?;
    check_time(t)?;
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    Ok(if t <= PI {
        s
    } else if s >= PI {
        TAU - t
    } else if t - s <= PI {
        PI + s - t
    } else {
        0.0
    })
}

/// `(d(s,0) + d(t,0) − d(s,t)) / 2` with geodesic distance on the `2π` circle.
pub fn geodesic_half_cov(s: f64, t: f64) -> f64 {
    let d = |x: f64| {
        let x = x.abs();
        x.min(TAU - x)
    };
    0.5 * (d(s) + d(t) - d(s - t))
}

/// `count` equally spaced points `2π j / count`, `j = 0..count`; with
/// `closed` the endpoint `2π` is appended.
pub fn uniform_ring_grid(count: usize, closed: bool) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..count).map(|j| TAU * j as f64 / count as f64).collect();
    if closed {
        grid.push(TAU);
    }
    grid
}

/// Standard Brownian motion at sorted, distinct, nonnegative `times`.
fn brownian_at(times: &[f64], rng: &mut impl rand::Rng, out: &mut [f64]) {
    let mut prev_t = 0.0;
    let mut prev_b = 0.0;
    for (t, o) in times.iter().zip(out.iter_mut()) {
        let dt = t - prev_t;
        let b = if dt > 0.0 {
            let z: f64 = StandardNormal.sample(rng);
            prev_b + dt.sqrt() * z
        } else {
            prev_b
        };
        *o = b;
        prev_t = *t;
        prev_b = b;
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn position(times: &[f64], t: f64) -> usize {
    times.binary_search_by(|x| x.total_cmp(&t)).expect("time registered in the evaluation set")
}

/// Reflected construction: `b(t) = B(t)` on `[0, π]`, `b(t) = B(π) − B(t − π)` on `[π, 2π]`.
pub fn reflected_brownian_ring(t_grid: &[f64], paths: usize, seed: u64) -> Result<SampleBatch> {
    for &t in t_grid {
        check_time(t)?;
    }
    let shifted = |t: f64| (t - PI).clamp(0.0, PI);
    let mut needed = vec![PI];
    for &t in t_grid {
        needed.push(if t <= PI { t } else { shifted(t) });
    }
    let times = sorted_unique(needed);
    let at_pi = position(&times, PI);
    let lookup: Vec<(bool, usize)> = t_grid
        .iter()
        .map(|&t| if t <= PI { (false, position(&times, t)) } else { (true, position(&times, shifted(t))) })
        .collect();
    let tag = format!("reflected_brownian_ring(points={})", t_grid.len());
    Ok(SampleBatch::generate(paths, t_grid.len(), seed, tag, |rng, row| {
        let mut b = vec![0.0; times.len()];
        brownian_at(&times, rng, &mut b);
        for (o, &(reflected, j)) in row.iter_mut().zip(&lookup) {
            *o = if reflected { b[at_pi] - b[j] } else { b[j] };
        }
    }))
}

/// Bridge construction `b(t) = B(t) − (t / 2π) B(2π)`.
pub fn brownian_bridge_ring(t_grid: &[f64], paths: usize, seed: u64) -> Result<SampleBatch> {
    for &t in t_grid {
        check_time(t)?;
    }
    let mut needed = t_grid.to_vec();
    needed.push(TAU);
    let times = sorted_unique(needed);
    let at_end = position(&times, TAU);
    let lookup: Vec<usize> = t_grid.iter().map(|&t| position(&times, t)).collect();
    let tag = format!("brownian_bridge_ring(points={})", t_grid.len());
    Ok(SampleBatch::generate(paths, t_grid.len(), seed, tag, |rng, row| {
        let mut b = vec![0.0; times.len()];
        brownian_at(&times, rng, &mut b);
        for ((o, &j), &t) in row.iter_mut().zip(&lookup).zip(t_grid) {
            *o = b[j] - t / TAU * b[at_end];
        }
    }))
}

/// Consecutive differences `b(t_{j+1}) − b(t_j)` of every path.
pub fn increments(batch: &SampleBatch) -> SampleBatch {
    let dim = batch.dim.saturating_sub(1);
    let mut values = Vec::with_capacity(batch.paths * dim);
    for p in 0..batch.paths {
        values.extend(batch.path(p).windows(2).map(|w| w[1] - w[0]));
    }
    SampleBatch { paths: batch.paths, dim, values, seed: batch.seed, model_tag: format!("increments of {}", batch.model_tag) }
}

/// Largest deviation of `m(i, k)` from the mean over its wrap-around
/// diagonal `(k − i) mod N`; zero exactly for circulant matrices.
pub fn circulant_deviation(m: &SymMatrix) -> f64 {
    let n = m.dim();
    let mut means = vec![0.0; n];
    for i in 0..n {
        for k in 0..n {
            means[(k + n - i) % n] += m.get(i, k);
        }
    }
    means.iter_mut().for_each(|v| *v /= n as f64);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for k in 0..n {
            worst = worst.max((m.get(i, k) - means[(k + n - i) % n]).abs());
        }
    }
    worst
}
