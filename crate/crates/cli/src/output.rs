use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Two-column CSV with an integer label column, LF line endings.
pub fn csv_series(header: &str, rows: impl IntoIterator<Item = (usize, f64)>) -> String {
    let mut s = String::new();
    s.push_str(header);
    s.push('\n');
    for (label, v) in rows {
        let _ = writeln!(s, "{label},{}", fmt_num(v));
    }
    s
}

pub fn json_pretty(value: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Where a command's primary text output goes.
pub struct Sink<'a> {
    pub stdout: &'a mut dyn Write,
    pub outputs: Vec<PathBuf>,
}

impl Sink<'_> {
    /// Writes to `out` when given, otherwise to stdout.
    pub fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<(), CliError> {
        match out {
            Some(path) => {
                write_file(path, text.as_bytes())?;
                self.outputs.push(path.to_path_buf());
                Ok(())
            }
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
        }
    }

    pub fn side_file(&mut self, path: PathBuf, text: &str) -> Result<(), CliError> {
        write_file(&path, text.as_bytes())?;
        self.outputs.push(path);
        Ok(())
    }
}

/// `<path>.<suffix>`, keeping the original extension.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

/// A gnuplot script drawing column 2 against column 1 of a CSV file.
pub fn gnuplot_script(csv: &Path, title: &str, xlabel: &str, ylabel: &str) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let png = format!("{name}.png");
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 800,500\n\
         set output '{png}'\n\
         set title '{title}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n\
         set xzeroaxis\n\
         set key off\n\
         plot '{name}' skip 1 using 1:2 with linespoints pt 7 ps 0.6\n"
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Every resolved flag, defaults included.
    pub parameters: BTreeMap<String, String>,
    /// Arguments after the program name; replay re-runs exactly these.
    pub argv: Vec<String>,
    pub artifact_version: String,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: not a run manifest: {e}", path.display())))
    }
}
