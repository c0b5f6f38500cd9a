//! Library side of the `entpdf` command: state files, curve bundles and the
//! subcommand implementations. `main.rs` only parses arguments and maps
//! errors to exit codes.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub mod commands;
pub mod statefile;

pub use statefile::{load_state, StateFile, STATE_FORMAT_VERSION};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: exit::INPUT,
            message: message.into(),
        }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Self {
            code: exit::FAILED,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: exit::NUMERICAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<entpdf::Error> for CliError {
    fn from(e: entpdf::Error) -> Self {
        use entpdf::Error as E;
        let code = match &e {
            E::InvalidState { .. } | E::Domain(_) | E::InvalidProjection(_) => exit::INPUT,
            E::Inconsistent { .. } => exit::FAILED,
            E::NumericalFailure { .. } | E::Canonicalization { .. } | E::Integration { .. } | E::UniversalUnavailable(_) => {
                exit::NUMERICAL
            }
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = to_json(value);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

/// Two-column CSV `e,density` with 17 significant digits and LF endings.
pub fn write_curve_csv<W: Write>(mut w: W, grid: &[f64], density: &[f64]) -> std::io::Result<()> {
    w.write_all(b"e,density\n")?;
    for (e, d) in grid.iter().zip(density) {
        writeln!(w, "{e:.16e},{d:.16e}")?;
    }
    w.flush()
}

/// Parses the output of [`write_curve_csv`].
pub fn read_curve_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut lines = text.lines();
    if lines.next() != Some("e,density") {
        return Err(CliError::input("curve CSV must start with 'e,density'"));
    }
    let mut grid = Vec::new();
    let mut density = Vec::new();
    for (i, line) in lines.enumerate() {
        let parsed = line
            .split_once(',')
            .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)));
        let (e, d) = parsed.ok_or_else(|| CliError::input(format!("bad CSV row {}: '{line}'", i + 2)))?;
        grid.push(e);
        density.push(d);
    }
    Ok((grid, density))
}
