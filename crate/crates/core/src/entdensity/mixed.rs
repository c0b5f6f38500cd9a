use serde::Serialize;

use super::curve::{normalize_grid, uniform_grid, Annotations, CurveKind, DeltaComponent, DensityCurve, MASS_WARNING_TOL};
use super::markers::{plane_markers, PlaneMarkers};
use super::plane::{plane_pdf, SEPARABLE_TOL};
use super::triple::triple_pdf;
use super::universal::{universal_table, UniversalTable};
use crate::error::{Error, Result};
use crate::localops::{canonical_plane, pure_concurrence, triple_canonical, CanonicalPlane};
use crate::qstate::{eigendecompose, nested_resolution, DensityMatrix, NestedResolution};

/// Components with a weight below this are omitted.
pub const WEIGHT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PlaneComponent {
    pub weight: f64,
    pub markers: PlaneMarkers,
    pub plane: CanonicalPlane,
    pub curve: DensityCurve,
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleComponent {
    pub weight: f64,
    pub e_perp: f64,
    pub curve: DensityCurve,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniversalComponent {
    pub weight: f64,
    pub curve: DensityCurve,
}

/// 𝒫(ℰ) = Σ_M ω_M 𝒫_{Π_M}(ℰ): point masses plus weighted curves.
#[derive(Debug, Clone)]
pub struct MixedDensity {
    pub weights: [f64; 4],
    pub deltas: Vec<DeltaComponent>,
    pub plane: Option<PlaneComponent>,
    pub triple: Option<TripleComponent>,
    pub universal: Option<UniversalComponent>,
    /// Weighted sum of the continuous parts on the union of their grids.
    pub combined: DensityCurve,
}

impl MixedDensity {
    pub fn delta_mass(&self) -> f64 {
        self.deltas.iter().map(|d| d.weight).sum()
    }

    /// Delta weights plus the trapezoid mass of the combined curve.
    pub fn total_mass(&self) -> f64 {
        self.delta_mass() + self.combined.trapezoid_mass()
    }

    /// Weighted continuous components.
    pub fn curves(&self) -> Vec<(f64, &DensityCurve)> {
        let mut v = Vec::new();
        if let Some(p) = &self.plane {
            v.push((p.weight, &p.curve));
        }
        if let Some(t) = &self.triple {
            v.push((t.weight, &t.curve));
        }
        if let Some(u) = &self.universal {
            v.push((u.weight, &u.curve));
        }
        v
    }

    /// P(ℰ ≤ e) including point masses.
    pub fn cdf_at(&self, e: f64) -> f64 {
        let d: f64 = self.deltas.iter().filter(|d| d.location <= e).map(|d| d.weight).sum();
        d + self.curves().iter().map(|(w, c)| w * c.cdf_at(e)).sum::<f64>()
    }
}

pub fn mixed_pdf(rho: &DensityMatrix, grid_n: usize) -> Result<MixedDensity> {
    compose(rho, grid_n, || universal_table().map(|t| (*t).clone()))
}

/// As [`mixed_pdf`] with an explicitly supplied universal table.
pub fn mixed_pdf_with(rho: &DensityMatrix, grid_n: usize, table: &UniversalTable) -> Result<MixedDensity> {
    compose(rho, grid_n, || Ok(table.clone()))
}

fn compose<F>(rho: &DensityMatrix, grid_n: usize, table: F) -> Result<MixedDensity>
where
    F: FnOnce() -> Result<UniversalTable>,
{
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid_n must be at least 16, got {grid_n}")));
    }
    let res = nested_resolution(&eigendecompose(rho)?)?;
    compose_resolution(&res, grid_n, table)
}

pub(crate) fn compose_resolution<F>(res: &NestedResolution, grid_n: usize, table: F) -> Result<MixedDensity>
where
    F: FnOnce() -> Result<UniversalTable>,
{
    let mut weights = res.weights;
    for w in &mut weights {
        if *w < WEIGHT_CUTOFF {
            *w = 0.0;
        }
    }
    let mut deltas = Vec::new();
    if weights[0] > 0.0 {
        deltas.push(DeltaComponent {
            location: pure_concurrence(&res.eigenvectors[0]),
            weight: weights[0],
        });
    }

    let mut plane = None;
    if weights[1] > 0.0 {
        let cp = canonical_plane(&res.eigenvectors[0], &res.eigenvectors[1])?;
        let markers = plane_markers(cp.x, cp.y, cp.z);
        if markers.e_max < SEPARABLE_TOL {
            deltas.push(DeltaComponent {
                location: 0.0,
                weight: weights[1],
            });
        } else {
            plane = Some(PlaneComponent {
                weight: weights[1],
                markers,
                plane: cp,
                curve: plane_pdf(&cp, grid_n)?,
            });
        }
    }

    let triple = if weights[2] > 0.0 {
        let ct = triple_canonical(res.projection(3))?;
        Some(TripleComponent {
            weight: weights[2],
            e_perp: ct.e_perp,
            curve: triple_pdf(ct.e_perp, grid_n)?,
        })
    } else {
        None
    };

    let universal = if weights[3] > 0.0 {
        Some(UniversalComponent {
            weight: weights[3],
            curve: table()?.curve(grid_n)?,
        })
    } else {
        None
    };

    let mut mixed = MixedDensity {
        weights,
        deltas,
        plane,
        triple,
        universal,
        combined: empty_curve(),
    };
    mixed.combined = combine(&mixed, grid_n);
    let total = mixed.total_mass();
    if (total - 1.0).abs() > MASS_WARNING_TOL {
        mixed
            .combined
            .warnings
            .push(format!("total mass {total:.6} deviates from 1"));
    }
    Ok(mixed)
}

fn empty_curve() -> DensityCurve {
    DensityCurve {
        kind: CurveKind::Combined,
        grid: vec![],
        density: vec![],
        cdf: vec![],
        annotations: Annotations::default(),
        warnings: vec![],
    }
}

fn combine(m: &MixedDensity, grid_n: usize) -> DensityCurve {
    let curves = m.curves();
    if curves.is_empty() {
        return empty_curve();
    }
    let mut g = uniform_grid(grid_n);
    for (_, c) in &curves {
        g.extend_from_slice(&c.grid);
    }
    let grid = normalize_grid(g, 1e-14);
    let density: Vec<f64> = grid
        .iter()
        .map(|&e| curves.iter().map(|(w, c)| w * c.density_at(e)).sum())
        .collect();
    let cdf: Vec<f64> = grid
        .iter()
        .map(|&e| curves.iter().map(|(w, c)| w * c.cdf_at(e)).sum())
        .collect();

    let mut annotations = Annotations {
        cusp: None,
        support_max: 1.0,
        divergences: vec![],
        kinks: vec![],
    };
    if let Some(p) = &m.plane {
        annotations.cusp = p.curve.annotations.cusp;
        annotations.divergences = p.curve.annotations.divergences.clone();
        if m.triple.is_none() && m.universal.is_none() {
            annotations.support_max = p.curve.annotations.support_max;
        }
    }
    if let Some(t) = &m.triple {
        annotations.kinks = t.curve.annotations.kinks.clone();
    }
    let mut warnings = Vec::new();
    for (_, c) in &curves {
        warnings.extend(c.warnings.iter().map(|w| format!("{:?}: {w}", c.kind).to_lowercase()));
    }
    DensityCurve {
        kind: CurveKind::Combined,
        grid,
        density,
        cdf,
        annotations,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ComplexMatrix4, PureState};

    fn no_table() -> Result<UniversalTable> {
        Err(Error::UniversalUnavailable("not needed".into()))
    }

    #[test]
    fn bell_state_is_a_single_delta() {
        let bell = PureState::from_real([1.0, 0.0, 0.0, 1.0]).unwrap();
        let rho = DensityMatrix::from_pure(&bell);
        let res = nested_resolution(&eigendecompose(&rho).unwrap()).unwrap();
        let m = compose_resolution(&res, 64, no_table).unwrap();
        assert_eq!(m.deltas.len(), 1);
        assert!((m.deltas[0].location - 1.0).abs() < 1e-12);
        assert!((m.deltas[0].weight - 1.0).abs() < 1e-12);
        assert!(m.plane.is_none() && m.triple.is_none() && m.universal.is_none());
        assert!(m.combined.grid.is_empty());
    }

    #[test]
    fn rank_two_mixture_combines_delta_and_plane() {
        let a = PureState::from_real([1.0, 0.0, 0.0, 1.0]).unwrap();
        let b = PureState::from_real([0.0, 1.0, 0.0, 0.0]).unwrap();
        let rho = DensityMatrix::mixture(&[(0.7, a), (0.3, b)]).unwrap();
        let res = nested_resolution(&eigendecompose(&rho).unwrap()).unwrap();
        let m = compose_resolution(&res, 128, no_table).unwrap();
        let w2 = 0.3 / 0.7;
        assert!((m.weights[1] - w2).abs() < 1e-12);
        assert!(m.plane.is_some());
        assert!((m.total_mass() - 1.0).abs() < 5e-3);
        assert!((m.cdf_at(1.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn separable_plane_becomes_delta_at_zero() {
        let mut d = ComplexMatrix4::zeros();
        d[(0, 0)] = 0.6.into();
        d[(1, 1)] = 0.4.into();
        let rho = DensityMatrix::new(d).unwrap();
        let res = nested_resolution(&eigendecompose(&rho).unwrap()).unwrap();
        let m = compose_resolution(&res, 64, no_table).unwrap();
        assert!(m.plane.is_none());
        let zero_mass: f64 = m.deltas.iter().map(|d| d.weight).sum();
        assert!((zero_mass - 1.0).abs() < 1e-12);
    }
}
