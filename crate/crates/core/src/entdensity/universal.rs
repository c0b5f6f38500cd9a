//! The full-space density. It is universal (the same for every state), so it
//! is produced once by Monte Carlo, smoothed, and cached on disk.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use super::curve::{uniform_grid, Annotations, CurveKind, DensityCurve};
use crate::error::{Error, Result};
use crate::haarmc::{mc_histogram, FullSampler};

pub const UNIVERSAL_SEED: u64 = 0x0005_eed0_0004;
pub const UNIVERSAL_SAMPLES: u64 = 10_000_000;
pub const UNIVERSAL_BINS: usize = 512;
pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const SMOOTHING: &str = "binomial5";
/// Directory holding the cache file; defaults to `<tmp>/entpdf`.
pub const CACHE_DIR_ENV: &str = "ENTPDF_CACHE_DIR";
/// Set to 1 to forbid regenerating a missing or invalid cache.
pub const NO_GENERATE_ENV: &str = "ENTPDF_NO_GENERATE";

/// Smoothed Monte Carlo bin densities of the full-space ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalTable {
    pub seed: u64,
    pub samples: u64,
    pub bins: usize,
    pub density: Vec<f64>,
}

/// Symmetric binomial smoothing whose window shrinks near the ends.
fn smooth(raw: &[f64]) -> Vec<f64> {
    let n = raw.len();
    (0..n)
        .map(|i| {
            let radius = 2.min(i).min(n - 1 - i);
            match radius {
                0 => raw[i],
                1 => (raw[i - 1] + 2.0 * raw[i] + raw[i + 1]) / 4.0,
                _ => (raw[i - 2] + 4.0 * raw[i - 1] + 6.0 * raw[i] + 4.0 * raw[i + 1] + raw[i + 2]) / 16.0,
            }
        })
        .collect()
}

impl UniversalTable {
    pub fn generate(seed: u64, samples: u64, bins: usize) -> Result<Self> {
        let hist = mc_histogram(&FullSampler, samples, bins, seed)?;
        Ok(Self {
            seed,
            samples,
            bins,
            density: smooth(&hist.densities()),
        })
    }

    fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.bins as f64
    }

    /// Bin centres plus the two endpoints, where the density is linearly
    /// extrapolated from the outermost two centres (clamped at zero).
    pub fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.bins;
        let d = &self.density;
        let mut x = Vec::with_capacity(n + 2);
        let mut y = Vec::with_capacity(n + 2);
        x.push(0.0);
        y.push((d[0] - 0.5 * (d[1] - d[0])).max(0.0));
        for i in 0..n {
            x.push(self.center(i));
            y.push(d[i]);
        }
        x.push(1.0);
        y.push((d[n - 1] + 0.5 * (d[n - 1] - d[n - 2])).max(0.0));
        (x, y)
    }

    /// The table resampled onto `grid_n` uniform nodes. The cumulative
    /// distribution is the exact integral of the piecewise-linear
    /// interpolant through the native nodes and is not renormalized.
    pub fn curve(&self, grid_n: usize) -> Result<DensityCurve> {
        if grid_n < 16 {
            return Err(Error::Domain(format!("grid_n must be at least 16, got {grid_n}")));
        }
        let (x, y) = self.nodes();
        let mut cum = vec![0.0; x.len()];
        for i in 1..x.len() {
            cum[i] = cum[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        }
        let grid = uniform_grid(grid_n);
        let mut density = Vec::with_capacity(grid_n);
        let mut cdf = Vec::with_capacity(grid_n);
        for &e in &grid {
            let i = x.partition_point(|&v| v <= e).clamp(1, x.len() - 1);
            let (x0, x1) = (x[i - 1], x[i]);
            let t = e - x0;
            let slope = (y[i] - y[i - 1]) / (x1 - x0);
            density.push(y[i - 1] + slope * t);
            cdf.push(cum[i - 1] + y[i - 1] * t + 0.5 * slope * t * t);
        }
        Ok(DensityCurve::new(
            CurveKind::Universal,
            grid,
            density,
            cdf,
            Annotations {
                cusp: None,
                support_max: 1.0,
                divergences: vec![],
                kinks: vec![],
            },
        ))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# entpdf universal density");
        let _ = writeln!(s, "# format_version={CACHE_FORMAT_VERSION}");
        let _ = writeln!(s, "# seed={}", self.seed);
        let _ = writeln!(s, "# samples={}", self.samples);
        let _ = writeln!(s, "# bins={}", self.bins);
        let _ = writeln!(s, "# smoothing={SMOOTHING}");
        for (i, d) in self.density.iter().enumerate() {
            let _ = writeln!(s, "{:.17e} {:.17e}", self.center(i), d);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::UniversalUnavailable(format!("malformed cache: {msg}"));
        let mut meta = std::collections::HashMap::new();
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.trim().split_once('=') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(e), Some(d), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad(format!("bad row '{line}'")));
            };
            let e: f64 = e.parse().map_err(|_| bad(format!("bad number '{e}'")))?;
            let d: f64 = d.parse().map_err(|_| bad(format!("bad number '{d}'")))?;
            rows.push((e, d));
        }
        let get = |k: &str| meta.get(k).ok_or_else(|| bad(format!("missing {k}")));
        if get("format_version")?.parse::<u32>().ok() != Some(CACHE_FORMAT_VERSION) {
            return Err(bad("unsupported format_version".into()));
        }
        if get("smoothing")? != SMOOTHING {
            return Err(bad("unknown smoothing".into()));
        }
        let seed = get("seed")?.parse().map_err(|_| bad("bad seed".into()))?;
        let samples = get("samples")?.parse().map_err(|_| bad("bad samples".into()))?;
        let bins: usize = get("bins")?.parse().map_err(|_| bad("bad bins".into()))?;
        if bins < 8 || rows.len() != bins {
            return Err(bad(format!("expected {bins} rows, found {}", rows.len())));
        }
        let table = Self {
            seed,
            samples,
            bins,
            density: rows.iter().map(|r| r.1).collect(),
        };
        for (i, (e, d)) in rows.iter().enumerate() {
            if (e - table.center(i)).abs() > 1e-12 || !d.is_finite() || *d < 0.0 {
                return Err(bad(format!("row {i} is inconsistent")));
            }
        }
        Ok(table)
    }
}

/// Location of the cache and whether it may be (re)generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalStore {
    pub dir: PathBuf,
    pub allow_generate: bool,
}

impl UniversalStore {
    pub fn new(dir: impl Into<PathBuf>, allow_generate: bool) -> Self {
        Self {
            dir: dir.into(),
            allow_generate,
        }
    }

    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("entpdf"));
        let allow_generate = std::env::var(NO_GENERATE_ENV).map(|v| v != "1").unwrap_or(true);
        Self { dir, allow_generate }
    }

    pub fn cache_path(&self) -> PathBuf {
        self.dir.join(format!(
            "universal_v{CACHE_FORMAT_VERSION}_seed{UNIVERSAL_SEED}_n{UNIVERSAL_SAMPLES}_b{UNIVERSAL_BINS}.txt"
        ))
    }

    fn read(&self, path: &Path) -> Result<UniversalTable> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::UniversalUnavailable(format!("cannot read {}: {e}", path.display())))?;
        let t = UniversalTable::parse(&text)?;
        if t.seed != UNIVERSAL_SEED || t.samples != UNIVERSAL_SAMPLES || t.bins != UNIVERSAL_BINS {
            return Err(Error::UniversalUnavailable("cache metadata does not match".into()));
        }
        Ok(t)
    }

    /// Reads the cache, regenerating it when missing or invalid (if allowed).
    pub fn load_or_generate(&self) -> Result<UniversalTable> {
        let path = self.cache_path();
        match self.read(&path) {
            Ok(t) => Ok(t),
            Err(e) if !self.allow_generate => Err(e),
            Err(_) => {
                let t = UniversalTable::generate(UNIVERSAL_SEED, UNIVERSAL_SAMPLES, UNIVERSAL_BINS)?;
                write_atomic(&self.dir, &path, &t.to_text())?;
                Ok(t)
            }
        }
    }
}

fn write_atomic(dir: &Path, path: &Path, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::UniversalUnavailable(format!("cannot write cache: {e}"));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!(".universal.{}.tmp", std::process::id()));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

static DEFAULT_TABLE: Mutex<Option<Arc<UniversalTable>>> = Mutex::new(None);

/// The process-wide table from the environment-configured store.
pub fn universal_table() -> Result<Arc<UniversalTable>> {
    let mut slot = DEFAULT_TABLE.lock().unwrap_or_else(|p| p.into_inner());
    if let Some(t) = slot.as_ref() {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(UniversalStore::from_env().load_or_generate()?);
    *slot = Some(Arc::clone(&t));
    Ok(t)
}

pub fn universal_pdf(grid_n: usize) -> Result<DensityCurve> {
    universal_table()?.curve(grid_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_table() -> UniversalTable {
        UniversalTable::generate(3, 200_000, 64).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let t = small_table();
        let back = UniversalTable::parse(&t.to_text()).unwrap();
        assert_eq!(back.bins, 64);
        for (a, b) in t.density.iter().zip(&back.density) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }

    #[test]
    fn malformed_text_is_rejected() {
        let t = small_table();
        let text = t.to_text().replace("format_version=1", "format_version=9");
        assert!(matches!(UniversalTable::parse(&text), Err(Error::UniversalUnavailable(_))));
        let truncated: String = t.to_text().lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(UniversalTable::parse(&truncated).is_err());
    }

    #[test]
    fn curve_mass_is_near_one() {
        let c = small_table().curve(128).unwrap();
        assert!((c.trapezoid_mass() - 1.0).abs() < 1e-2);
        assert!((c.cdf.last().unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn missing_cache_without_generation_is_unavailable() {
        let dir = tempfile::tempdir().unwrap();
        let store = UniversalStore::new(dir.path(), false);
        assert!(matches!(store.load_or_generate(), Err(Error::UniversalUnavailable(_))));
    }
}
