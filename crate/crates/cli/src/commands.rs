use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;

use fbm_springs::circulant::{circulant_eigenvalues, Circulant};
use fbm_springs::coupling::{chain_couplings, coupling_slice};
use fbm_springs::critical::{find_critical_hurst, middle, SignChangeQuery};
use fbm_springs::kernels::{chain_increment_cov, ring_increment_cov, ring_increment_row, ChainModel, RingGeometry};
use fbm_springs::linalg::{classify_definiteness, Definiteness};
use fbm_springs::ring::{check_admissible, periodic_fbm_ring, power_law_ring, RingModel};
use fbm_springs::stochastic::{
    brownian_bridge_ring, circulant_deviation, covariance_error, istas_fourier_energy, piecewise_cov,
    reflected_brownian_ring, sample_gaussian, uniform_ring_grid, CovarianceErrorReport, SampleBatch,
};
use fbm_springs::{Error, SymMatrix};
use serde::Serialize;

use crate::gfile::parse_ring_model;
use crate::output::{csv_series, fmt_num, gnuplot_script, json_pretty, with_suffix, Sink};
use crate::{
    CliError, CouplingsArgs, CriticalArgs, CsvOutput, Geometry, IstasArgs, RingDesignArgs, SampleArgs, SampleModel,
    SpectrumArgs,
};

const SIGMAS: f64 = 5.0;

fn emit_csv(sink: &mut Sink, output: &CsvOutput, csv: &str, title: &str, xlabel: &str, ylabel: &str) -> Result<(), CliError> {
    sink.emit(output.out.as_deref(), csv)?;
    if let (true, Some(out)) = (output.gnuplot, output.out.as_deref()) {
        sink.side_file(with_suffix(out, "gp"), &gnuplot_script(out, title, xlabel, ylabel))?;
    }
    Ok(())
}

/// 1-based center to 0-based, defaulting to the middle monomer.
fn center_index(center: Option<usize>, monomers: usize) -> Result<usize, CliError> {
    match center {
        None => Ok(middle(monomers)),
        Some(c) if (1..=monomers).contains(&c) => Ok(c - 1),
        Some(c) => Err(CliError::Invalid(format!("center must be a monomer in 1..={monomers}, got {c}"))),
    }
}

/// Periodic fBm couplings, refusing Hurst indices whose ring covariance is indefinite.
fn admissible_fbm_ring(sites: usize, hurst: f64) -> Result<RingModel, CliError> {
    let geom = RingGeometry::new(sites)?;
    let verdict = classify_definiteness(&ring_increment_cov(&geom, hurst)?)?;
    if verdict.kind == Definiteness::Indefinite {
        return Err(CliError::Invalid(format!(
            "{}; the ring increment covariance is a valid fBm covariance only for H <= 1/2 (N = {sites}, H = {hurst})",
            Error::IndefiniteCovariance { min_eigenvalue: verdict.min_eigenvalue }
        )));
    }
    match periodic_fbm_ring(&geom, hurst) {
        Ok(p) => Ok(p.model),
        Err(Error::NotPositiveDefinite { pivot_index }) => Err(CliError::Invalid(format!(
            "ring increment covariance at N = {sites}, H = {hurst} has a zero mode besides translation \
             (pivot {pivot_index}), so no finite couplings exist"
        ))),
        Err(e) => Err(e.into()),
    }
}

pub fn couplings(a: &CouplingsArgs, sink: &mut Sink) -> Result<(), CliError> {
    match a.mode {
        Geometry::Chain => {
            let center = center_index(a.center, a.monomers)?;
            let profile = chain_couplings(&ChainModel::from_monomers(a.monomers, a.hurst)?)?;
            let rows = coupling_slice(&profile, center)?.into_iter().map(|(i, g)| (i + 1, g));
            let title = format!("couplings of monomer {} of {}, H = {}", center + 1, a.monomers, a.hurst);
            emit_csv(sink, &a.output, &csv_series("index,g", rows), &title, "monomer", "g")
        }
        Geometry::Ring => {
            if a.center.is_some() {
                return Err(CliError::Invalid("--center applies to chains only; ring couplings depend on distance".into()));
            }
            let model = admissible_fbm_ring(a.monomers, a.hurst)?;
            let rows = model.g_by_distance().iter().enumerate().map(|(d, g)| (d + 1, *g));
            let title = format!("ring couplings, N = {}, H = {}", a.monomers, a.hurst);
            emit_csv(sink, &a.output, &csv_series("distance,g", rows), &title, "distance", "g")
        }
    }
}

pub fn spectrum(a: &SpectrumArgs, sink: &mut Sink) -> Result<(), CliError> {
    let (values, title) = if let Some(path) = &a.g_file {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let model = parse_ring_model(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        (model.spectrum(), format!("energy spectrum of {}", path.display()))
    } else {
        let sites = a.sites.ok_or_else(|| CliError::Invalid("--sites is required without --g-file".into()))?;
        if let Some(g1) = a.g1 {
            let model = RingModel::two_coupling(sites, g1, a.g2.unwrap_or(0.0))?;
            (model.spectrum(), format!("energy spectrum, N = {sites}"))
        } else if let Some(h) = a.hurst {
            if a.covariance {
                let row = ring_increment_row(&RingGeometry::new(sites)?, h)?;
                (circulant_eigenvalues(&Circulant::new(row)?)?, format!("increment covariance spectrum, N = {sites}, H = {h}"))
            } else {
                (admissible_fbm_ring(sites, h)?.spectrum(), format!("energy spectrum, N = {sites}, H = {h}"))
            }
        } else {
            return Err(CliError::Invalid("give --g-file, --g1 [--g2] or --hurst".into()));
        }
    };
    let rows = values.into_iter().enumerate();
    emit_csv(sink, &a.output, &csv_series("mode,lambda", rows), &title, "mode", "lambda")
}

#[derive(Serialize)]
struct CriticalModel {
    monomers: usize,
    center: usize,
    partner: i64,
    offset: i64,
    bracket: (f64, f64),
    tol: f64,
}

#[derive(Serialize)]
struct CriticalReport {
    h_star: f64,
    iterations: usize,
    residual_coupling: f64,
    max_abs_coupling: f64,
    final_bracket: (f64, f64),
    model: CriticalModel,
}

pub fn critical(a: &CriticalArgs, sink: &mut Sink) -> Result<(), CliError> {
    let center = center_index(a.center, a.monomers)?;
    let bracket = (a.bracket[0], a.bracket[1]);
    let q = SignChangeQuery { monomers: a.monomers, center, offset: a.offset, bracket, tol: a.tol };
    let r = find_critical_hurst(&q)?;
    let report = CriticalReport {
        h_star: r.h_star,
        iterations: r.iterations,
        residual_coupling: r.residual_coupling,
        max_abs_coupling: r.max_abs_coupling,
        final_bracket: r.final_bracket,
        model: CriticalModel {
            monomers: a.monomers,
            center: center + 1,
            partner: center as i64 + 1 + a.offset,
            offset: a.offset,
            bracket,
            tol: a.tol,
        },
    };
    sink.emit(a.out.as_deref(), &json_pretty(&report)?)
}

#[derive(Serialize)]
struct DesignModel<'a> {
    sites: usize,
    g1: f64,
    c: f64,
    gamma: f64,
    g_by_distance: &'a [f64],
}

#[derive(Serialize)]
struct DesignReport<'a> {
    model: DesignModel<'a>,
    finite_threshold: f64,
    finite_bound: bool,
    zeta_threshold: Option<f64>,
    zeta_bound: Option<bool>,
    admissible: Option<bool>,
    lambda_min: Option<f64>,
}

pub fn ring_design(a: &RingDesignArgs, sink: &mut Sink) -> Result<(), CliError> {
    let d = power_law_ring(a.sites, a.g1, a.c, a.gamma, a.infinite_guarantee)?;
    let check = a.check.then(|| check_admissible(&d.model));
    let report = DesignReport {
        model: DesignModel { sites: a.sites, g1: a.g1, c: a.c, gamma: a.gamma, g_by_distance: d.model.g_by_distance() },
        finite_threshold: d.finite_threshold,
        finite_bound: d.finite_bound,
        zeta_threshold: d.zeta_threshold,
        zeta_bound: d.zeta_bound,
        admissible: check.as_ref().map(|c| c.admissible),
        lambda_min: check.as_ref().map(|c| c.lambda_min_nonzero),
    };
    sink.emit(a.out.as_deref(), &json_pretty(&report)?)
}

#[derive(Serialize)]
struct SampleModelEcho {
    model: &'static str,
    grid: usize,
    hurst: Option<f64>,
}

#[derive(Serialize)]
struct SampleReport {
    model: SampleModelEcho,
    paths: usize,
    seed: u64,
    dim: usize,
    covariance: CovarianceErrorReport,
    /// Cyclic grid increments against the periodic Brownian increment covariance.
    periodic_increments: Option<CovarianceErrorReport>,
    increment_circulant_deviation: Option<f64>,
}

/// `y_j = b(t_{j+1}) − b(t_j)` around the circle, closing with `b(2π) = b(0) = 0`.
fn cyclic_increments(batch: &SampleBatch) -> SampleBatch {
    let n = batch.dim;
    let mut values = Vec::with_capacity(batch.paths * n);
    for p in 0..batch.paths {
        let x = batch.path(p);
        values.extend((0..n).map(|j| if j + 1 < n { x[j + 1] - x[j] } else { -x[j] }));
    }
    SampleBatch { paths: batch.paths, dim: n, values, seed: batch.seed, model_tag: batch.model_tag.clone() }
}

fn require_hurst(a: &SampleArgs) -> Result<f64, CliError> {
    a.hurst.ok_or_else(|| CliError::Invalid("--hurst is required for chain and ring sampling".into()))
}

pub fn sample(a: &SampleArgs, sink: &mut Sink) -> Result<(), CliError> {
    if a.paths == 0 {
        return Err(CliError::Invalid("--paths must be positive".into()));
    }
    let (name, batch, target) = match a.model {
        SampleModel::Reflected | SampleModel::Bridge => {
            if a.grid < 2 {
                return Err(CliError::Invalid("--grid must be at least 2".into()));
            }
            let grid = uniform_ring_grid(a.grid, false);
            if a.model == SampleModel::Reflected {
                let target = SymMatrix::from_fn(grid.len(), |i, k| piecewise_cov(grid[i], grid[k]).expect("grid inside [0, 2π]"));
                ("reflected", reflected_brownian_ring(&grid, a.paths, a.seed)?, target)
            } else {
                let target = SymMatrix::from_fn(grid.len(), |i, k| grid[i].min(grid[k]) - grid[i] * grid[k] / TAU);
                ("bridge", brownian_bridge_ring(&grid, a.paths, a.seed)?, target)
            }
        }
        SampleModel::Chain => {
            let cov = chain_increment_cov(&ChainModel::new(a.grid, require_hurst(a)?)?);
            ("chain", sample_gaussian(&cov, a.paths, a.seed)?, cov)
        }
        SampleModel::Ring => {
            let h = require_hurst(a)?;
            let cov = ring_increment_cov(&RingGeometry::new(a.grid)?, h)?;
            let batch = sample_gaussian(&cov, a.paths, a.seed).map_err(|e| match e {
                Error::IndefiniteCovariance { .. } => {
                    CliError::Invalid(format!("{e}; periodic fBm ring covariances are valid only for H <= 1/2 (H = {h})"))
                }
                other => other.into(),
            })?;
            ("ring", batch, cov)
        }
    };
    let covariance = covariance_error(&batch.second_moments(), &target, batch.paths, SIGMAS);
    let (periodic_increments, increment_circulant_deviation) = match a.model {
        SampleModel::Reflected | SampleModel::Bridge => {
            let inc = cyclic_increments(&batch);
            let moments = inc.second_moments();
            let dt = TAU / a.grid as f64;
            let base = ring_increment_cov(&RingGeometry::new(a.grid)?, 0.5)?;
            let periodic = SymMatrix::from_fn(a.grid, |i, k| base.get(i, k) * dt);
            (Some(covariance_error(&moments, &periodic, inc.paths, SIGMAS)), Some(circulant_deviation(&moments)))
        }
        _ => (None, None),
    };
    if let Some(out) = a.out.as_deref() {
        sink.side_file(out.to_path_buf(), &paths_csv(&batch))?;
    }
    let report = SampleReport {
        model: SampleModelEcho { model: name, grid: a.grid, hurst: a.hurst },
        paths: a.paths,
        seed: a.seed,
        dim: batch.dim,
        covariance,
        periodic_increments,
        increment_circulant_deviation,
    };
    let json = json_pretty(&report)?;
    if let Some(path) = a.report.as_deref() {
        sink.side_file(path.to_path_buf(), &json)?;
    }
    sink.emit(None, &json)
}

fn paths_csv(batch: &SampleBatch) -> String {
    let mut s = String::with_capacity(batch.paths * (batch.dim * 24 + 8) + 64);
    s.push_str("path");
    for j in 0..batch.dim {
        let _ = write!(s, ",x{j}");
    }
    s.push('\n');
    for p in 0..batch.paths {
        let _ = write!(s, "{p}");
        for v in batch.path(p) {
            s.push(',');
            s.push_str(&fmt_num(*v));
        }
        s.push('\n');
    }
    s
}

pub fn istas(a: &IstasArgs, sink: &mut Sink) -> Result<(), CliError> {
    if a.modes == 0 {
        return Err(CliError::Invalid("--modes must be at least 1".into()));
    }
    let rows = (1..=a.modes)
        .map(|n| istas_fourier_energy(a.hurst, n).map(|v| (n as usize, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let title = format!("expected Fourier energy, H = {}", a.hurst);
    emit_csv(sink, &a.output, &csv_series("mode,value", rows), &title, "mode", "energy")
}
