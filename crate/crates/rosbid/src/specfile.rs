//! Plain-text input files.
//!
//! ```text
//! # comments start with '#'
//! label: my_input
//! v theta prob          # optional header
//! 0.5 0.4 1/3
//! 0.5, 0.6, 1/3
//! 0.5 0.7 0.333333333333333333
//! ```
//!
//! Columns may be separated by commas, whitespace or both. Probabilities may
//! be written as fractions. Duplicate `(v, theta)` rows are merged.

use std::path::Path;

use rosbid_core::distributions::DistError;
use rosbid_core::DiscreteJointSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("line {line}: bad token '{token}': {reason}")]
    Token { line: usize, token: String, reason: &'static str },
    #[error("line {line}: expected 3 columns (v theta prob), found {found}")]
    Columns { line: usize, found: usize },
    #[error("no atom rows")]
    Empty,
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn number(tok: &str, line: usize) -> Result<f64, SpecFileError> {
    let bad = |reason| SpecFileError::Token { line, token: tok.to_string(), reason };
    let x = match tok.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad("not a number"))?;
            let d: f64 = d.trim().parse().map_err(|_| bad("not a number"))?;
            if d == 0.0 {
                return Err(bad("zero denominator"));
            }
            n / d
        }
        None => tok.parse().map_err(|_| bad("not a number"))?,
    };
    if !x.is_finite() {
        return Err(bad("not finite"));
    }
    Ok(x)
}

/// Parses file contents. `default_label` is used when there is no `label:` line.
pub fn parse_spec(text: &str, default_label: &str) -> Result<DiscreteJointSpec, SpecFileError> {
    let mut label = default_label.to_string();
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("label:") {
            label = rest.trim().to_string();
            continue;
        }
        let toks: Vec<&str> =
            content.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if toks.len() != 3 {
            return Err(SpecFileError::Columns { line, found: toks.len() });
        }
        if rows.is_empty() && toks.iter().map(|t| t.to_ascii_lowercase()).eq(["v", "theta", "prob"]) {
            continue;
        }
        rows.push((number(toks[0], line)?, number(toks[1], line)?, number(toks[2], line)?));
    }
    if rows.is_empty() {
        return Err(SpecFileError::Empty);
    }
    Ok(DiscreteJointSpec::merged(label, &rows)?)
}

/// Reads and parses a file; the default label is the file stem.
pub fn load_spec(path: &Path) -> Result<DiscreteJointSpec, SpecFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| SpecFileError::Io { path: path.display().to_string(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
    parse_spec(&text, stem)
}
