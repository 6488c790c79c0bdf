//! Command-line front end for `fbm-springs`.
//!
//! Every subcommand prints CSV (series) or JSON (scalar results) to stdout,
//! or writes it to `--out`. With `--out` a run manifest
//! `<out>.manifest.json` records the exact arguments so that `replay`
//! reproduces the files byte for byte.
//!
//! Exit codes: 0 success, 2 invalid input or model, 3 no result,
//! 4 numerical failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

mod commands;
pub mod gfile;
pub mod output;

use output::{json_pretty, with_suffix, RunManifest, Sink, ARTIFACT_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    NoResult(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io { .. } => 2,
            CliError::NoResult(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<fbm_springs::Error> for CliError {
    fn from(e: fbm_springs::Error) -> Self {
        use fbm_springs::Error as E;
        match e {
            E::NoSignChange { .. } => CliError::NoResult(e.to_string()),
            E::NoConvergence { .. } | E::MaxIterations { .. } | E::QuadratureFailure { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fbm-springs", version, about = "fBm chains and rings as Gaussian spring networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coupling constants of one monomer (chain) or by geodesic distance (ring).
    Couplings(CouplingsArgs),
    /// Energy eigenvalues of a ring model in natural mode order.
    Spectrum(SpectrumArgs),
    /// Hurst index at which a chain coupling changes sign, by bisection.
    Critical(CriticalArgs),
    /// Stiff ring with power-law repulsion `g_k = −c k^{−γ}` and its sufficient bounds.
    RingDesign(RingDesignArgs),
    /// Sample paths and compare the empirical covariance with its target.
    Sample(SampleArgs),
    /// Expected Fourier energy of periodic fBm per mode.
    Istas(IstasArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Geometry {
    Chain,
    Ring,
}

#[derive(Debug, Args)]
pub struct CsvOutput {
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script `<out>.gp`.
    #[arg(long, requires = "out")]
    pub gnuplot: bool,
}

#[derive(Debug, Args)]
pub struct CouplingsArgs {
    #[arg(long, value_enum, default_value = "chain")]
    pub mode: Geometry,
    /// Monomer positions on the chain, or sites on the ring.
    #[arg(long, default_value_t = 61)]
    pub monomers: usize,
    #[arg(long)]
    pub hurst: f64,
    /// 1-based monomer whose couplings are listed (chain only); defaults to the middle one.
    #[arg(long)]
    pub center: Option<usize>,
    #[command(flatten)]
    pub output: CsvOutput,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Ring model file (`N=…`, `gk=…` or `k value` lines).
    #[arg(long, conflicts_with_all = ["sites", "g1", "g2", "hurst"])]
    pub g_file: Option<PathBuf>,
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long, conflicts_with = "hurst", allow_negative_numbers = true)]
    pub g1: Option<f64>,
    #[arg(long, requires = "g1", allow_negative_numbers = true)]
    pub g2: Option<f64>,
    /// Periodic fBm ring at this Hurst index.
    #[arg(long)]
    pub hurst: Option<f64>,
    /// With `--hurst`: eigenvalues of the ring increment covariance instead of the energy.
    #[arg(long, requires = "hurst")]
    pub covariance: bool,
    #[command(flatten)]
    pub output: CsvOutput,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, default_value_t = 61)]
    pub monomers: usize,
    /// Partner offset from the center monomer.
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    pub offset: i64,
    /// 1-based center monomer; defaults to the middle one.
    #[arg(long)]
    pub center: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.6, 0.9])]
    pub bracket: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RingDesignArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long)]
    pub sites: usize,
    /// Sweep all modes and report admissibility and the smallest nonzero eigenvalue.
    #[arg(long)]
    pub check: bool,
    /// Insist on a bound valid for every ring size (needs gamma > 3).
    #[arg(long)]
    pub infinite_guarantee: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleModel {
    /// Periodic Brownian motion from the reflected construction.
    Reflected,
    /// Brownian bridge `B(t) − (t/2π) B(2π)`.
    Bridge,
    /// fBm chain increments.
    Chain,
    /// Periodic fBm ring increments.
    Ring,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: SampleModel,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Grid points on the circle (reflected, bridge), increments (chain) or sites (ring).
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[arg(long)]
    pub hurst: Option<f64>,
    /// Write the sampled paths as CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the covariance report here as well as to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IstasArgs {
    #[arg(long)]
    pub hurst: f64,
    /// Largest mode; modes 1..=MODES are listed.
    #[arg(long, default_value_t = 20)]
    pub modes: u32,
    #[command(flatten)]
    pub output: CsvOutput,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Resolved flags of the chosen subcommand, defaults included.
fn resolved_parameters(matches: &ArgMatches) -> BTreeMap<String, String> {
    let mut params = BTreeMap::new();
    if let Some((_, sub)) = matches.subcommand() {
        for id in sub.ids() {
            let Ok(Some(raw)) = sub.try_get_raw(id.as_str()) else { continue };
            let joined: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
            params.insert(id.as_str().to_string(), joined.join(" "));
        }
    }
    params
}

/// Parses `argv` (without the program name) and runs it.
pub fn run(argv: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let full = std::iter::once("fbm-springs".to_string()).chain(argv.iter().cloned());
    let matches = Cli::command().try_get_matches_from(full).map_err(|e| CliError::Invalid(e.to_string()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut sink = Sink { stdout, outputs: Vec::new() };
    let (name, seed) = match &cli.command {
        Command::Couplings(a) => ("couplings", commands::couplings(a, &mut sink).map(|_| None)?),
        Command::Spectrum(a) => ("spectrum", commands::spectrum(a, &mut sink).map(|_| None)?),
        Command::Critical(a) => ("critical", commands::critical(a, &mut sink).map(|_| None)?),
        Command::RingDesign(a) => ("ring-design", commands::ring_design(a, &mut sink).map(|_| None)?),
        Command::Sample(a) => ("sample", commands::sample(a, &mut sink).map(|_| Some(a.seed))?),
        Command::Istas(a) => ("istas", commands::istas(a, &mut sink).map(|_| None)?),
        Command::Replay(a) => return replay(&a.manifest, sink.stdout),
    };
    if let Some(first) = sink.outputs.first().cloned() {
        let manifest_path = with_suffix(&first, "manifest.json");
        let manifest = RunManifest {
            command: name.to_string(),
            parameters: resolved_parameters(&matches),
            argv: argv.to_vec(),
            artifact_version: ARTIFACT_VERSION.to_string(),
            seed,
            outputs: sink.outputs.clone(),
        };
        output::write_file(&manifest_path, json_pretty(&manifest)?.as_bytes())?;
    }
    Ok(())
}

fn replay(path: &std::path::Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let manifest = RunManifest::load(path)?;
    if manifest.artifact_version != ARTIFACT_VERSION {
        return Err(CliError::Invalid(format!(
            "manifest was written by version {}, this is {ARTIFACT_VERSION}",
            manifest.artifact_version
        )));
    }
    if manifest.argv.first().map(String::as_str) == Some("replay") {
        return Err(CliError::Invalid("a manifest cannot replay another replay".into()));
    }
    run(&manifest.argv, stdout)
}
