//! Plain-text ring model files.
//!
//! ```text
//! # two-coupling ring
//! N=12
//! g1=1
//! g2=-0.25
//! 3 -0.01
//! ```
//!
//! `gk=v` and the bare pair `k v` both set the coupling at distance `k`;
//! distances left out are zero. `#` starts a comment.

use std::collections::BTreeMap;

use fbm_springs::ring::RingModel;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct GFileError {
    /// 1-based; 0 for problems with the file as a whole.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> GFileError {
    GFileError { line, message: message.into() }
}

fn parse_value(line: usize, text: &str) -> Result<f64, GFileError> {
    let v: f64 = text.trim().parse().map_err(|_| err(line, format!("cannot read '{}' as a number", text.trim())))?;
    if !v.is_finite() {
        return Err(err(line, "coupling must be finite"));
    }
    Ok(v)
}

fn parse_distance(line: usize, text: &str) -> Result<usize, GFileError> {
    match text.trim().parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(err(line, format!("'{}' is not a distance (integer >= 1)", text.trim()))),
    }
}

pub fn parse_ring_model(text: &str) -> Result<RingModel, GFileError> {
    let mut sites: Option<(usize, usize)> = None;
    let mut couplings: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = if let Some((key, value)) = content.split_once('=') {
            let key = key.trim();
            if key == "N" {
                if sites.is_some() {
                    return Err(err(line, "N given twice"));
                }
                let n = value.trim().parse::<usize>().map_err(|_| err(line, format!("N must be an integer, got '{}'", value.trim())))?;
                sites = Some((n, line));
                continue;
            }
            let Some(k) = key.strip_prefix('g') else {
                return Err(err(line, format!("unknown key '{key}', expected N or gk")));
            };
            (parse_distance(line, k)?, parse_value(line, value)?)
        } else {
            let mut fields = content.split_whitespace();
            let (Some(k), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err(line, format!("expected 'k value', 'gk=value' or 'N=sites', got '{content}'")));
            };
            (parse_distance(line, k)?, parse_value(line, v)?)
        };
        if let Some((first, _)) = couplings.insert(k, (line, v)) {
            return Err(err(line, format!("coupling at distance {k} already set on line {first}")));
        }
    }
    let Some((n, n_line)) = sites else {
        return Err(err(0, "missing N=<sites>"));
    };
    if n < 3 {
        return Err(err(n_line, format!("a ring needs N >= 3, got {n}")));
    }
    let mut g = vec![0.0; n / 2];
    for (k, (line, v)) in couplings {
        if k > n / 2 {
            return Err(err(line, format!("distance {k} exceeds N/2 = {} on a ring of {n} sites", n / 2)));
        }
        g[k - 1] = v;
    }
    RingModel::new(n, g).map_err(|e| err(n_line, e.to_string()))
}
