use serde::{Deserialize, Serialize};

/// Mass deviation above which a curve carries a normalization warning.
pub const MASS_WARNING_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Plane,
    Triple,
    Universal,
    Combined,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Annotations {
    /// Location of the logarithmic cusp.
    pub cusp: Option<f64>,
    /// Density vanishes above this value.
    pub support_max: f64,
    /// Points where the density diverges (never sampled exactly).
    pub divergences: Vec<f64>,
    /// Points where the first derivative jumps.
    pub kinks: Vec<f64>,
}

/// A sampled density on an ascending grid together with its cumulative
/// distribution at the same nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
    pub annotations: Annotations,
    pub warnings: Vec<String>,
}

/// A point mass of the mixed-state density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaComponent {
    pub location: f64,
    pub weight: f64,
}

impl DensityCurve {
    pub(crate) fn new(
        kind: CurveKind,
        grid: Vec<f64>,
        density: Vec<f64>,
        cdf: Vec<f64>,
        annotations: Annotations,
    ) -> Self {
        let mut c = Self {
            kind,
            grid,
            density,
            cdf,
            annotations,
            warnings: Vec::new(),
        };
        let mass = c.trapezoid_mass();
        if (mass - 1.0).abs() > MASS_WARNING_TOL {
            c.warnings.push(format!("trapezoid mass {mass:.6} deviates from 1"));
        }
        c
    }

    pub fn trapezoid_mass(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    fn locate(&self, e: f64) -> Option<(usize, f64)> {
        let g = &self.grid;
        if g.is_empty() || e < g[0] || e > g[g.len() - 1] {
            return None;
        }
        let i = g.partition_point(|&v| v <= e).clamp(1, g.len() - 1);
        let (a, b) = (g[i - 1], g[i]);
        let t = if b > a { (e - a) / (b - a) } else { 0.0 };
        Some((i, t))
    }

    /// Linear interpolation of the density; zero outside the grid.
    pub fn density_at(&self, e: f64) -> f64 {
        match self.locate(e) {
            Some((i, t)) => self.density[i - 1] * (1.0 - t) + self.density[i] * t,
            None => 0.0,
        }
    }

    /// Linear interpolation of the stored cumulative distribution.
    pub fn cdf_at(&self, e: f64) -> f64 {
        if self.grid.is_empty() {
            return 0.0;
        }
        if e < self.grid[0] {
            return 0.0;
        }
        match self.locate(e) {
            Some((i, t)) => self.cdf[i - 1] * (1.0 - t) + self.cdf[i] * t,
            None => *self.cdf.last().expect("nonempty"),
        }
    }

    /// Grid node of maximal density, skipping infinite values.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.grid
            .iter()
            .zip(&self.density)
            .filter(|(_, d)| d.is_finite())
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(e, d)| (*e, *d))
    }
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Uniform nodes i/(n − 1), i = 0..n.
pub(crate) fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Sorts and removes nodes closer than `tol` to their predecessor.
pub(crate) fn normalize_grid(mut g: Vec<f64>, tol: f64) -> Vec<f64> {
    g.retain(|v| v.is_finite());
    g.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(g.len());
    for v in g {
        if out.last().is_none_or(|&l| v - l > tol) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_mass_of_a_triangle() {
        let grid = vec![0.0, 0.5, 1.0];
        let c = DensityCurve::new(CurveKind::Triple, grid, vec![0.0, 1.0, 2.0], vec![0.0, 0.25, 1.0], Annotations::default());
        assert!((c.trapezoid_mass() - 1.0).abs() < 1e-15);
        assert!(c.warnings.is_empty());
        assert!((c.density_at(0.75) - 1.5).abs() < 1e-15);
        assert_eq!(c.density_at(1.5), 0.0);
        assert_eq!(c.cdf_at(2.0), 1.0);
        assert_eq!(c.peak(), Some((1.0, 2.0)));
    }

    #[test]
    fn grid_normalization_drops_near_duplicates() {
        let g = normalize_grid(vec![0.5, 0.0, 0.5 + 1e-15, 1.0], 1e-13);
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
    }
}
