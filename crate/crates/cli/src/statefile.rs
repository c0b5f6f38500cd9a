use std::path::Path;

use entpdf::qstate::{ComplexMatrix4, DensityMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const STATE_FORMAT_VERSION: u32 = 1;

/// On-disk density matrix: rows of `[re, im]` pairs in the basis order
/// ↑↑, ↑↓, ↓↑, ↓↓.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>, source: Option<String>) -> Self {
        let m = rho.matrix();
        let matrix = (0..4)
            .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            format_version: STATE_FORMAT_VERSION,
            matrix,
            label,
            source,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        if self.format_version != STATE_FORMAT_VERSION {
            return Err(CliError::input(format!(
                "unsupported format_version {} (expected {STATE_FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.matrix.len() != 4 || self.matrix.iter().any(|r| r.len() != 4) {
            return Err(CliError::input("matrix must be 4×4"));
        }
        let mut m = ComplexMatrix4::zeros();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, [re, im]) in row.iter().enumerate() {
                m[(i, j)] = C64::new(*re, *im);
            }
        }
        Ok(DensityMatrix::new(m)?)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        crate::write_json(path, self)
    }
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    StateFile::read(path)?.to_density()
}
