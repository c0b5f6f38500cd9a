//! Density of ℰ over the invariant measure of a two-dimensional subspace.
//!
//! In the canonical frame the state cos(θ/2)e^{iφ/2}χ₁ + sin(θ/2)e^{−iφ/2}χ₂
//! has ℰ² = (U² + L²)/2 − (U² − L²)/2·cos φ, where
//!
//!   U(θ) = q − R cos(θ + θ₀),   L(θ) = |R cos(θ − θ₀) − q|,
//!
//! with q = xy, R = √(z² + q²), θ₀ = atan2(z, q). Averaging over φ gives
//!
//!   𝒫(ℰ) = (ℰ/π) ∫ sinθ dθ / √((ℰ² − L²)(U² − ℰ²))
//!
//! over the θ-region where L < ℰ < U.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::curve::{normalize_grid, uniform_grid, Annotations, CurveKind, DensityCurve};
use super::markers::{plane_markers, PlaneMarkers};
use super::quad::{integrate, QuadConfig};
use crate::error::{Error, Result};
use crate::localops::CanonicalPlane;

/// Quadrature error estimates above this are reported as failures.
pub const QUAD_FAILURE_TOL: f64 = 1e-6;
/// Planes with ℰ_max below this are treated as separable.
pub const SEPARABLE_TOL: f64 = 1e-9;
/// Relative size of q or z below which the limiting closed forms are used.
const DEGENERATE_TOL: f64 = 1e-12;
/// Closest approach of grid nodes to the cusp.
const CUSP_GAP: f64 = 1e-10;
const CLUSTER_RATIO: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// z = 0: uniform on [0, ℰ_max].
    Uniform,
    /// xy = 0: ℰ/(z√(z² − ℰ²)), divergent at ℰ_max = z.
    BellType,
    Generic,
}

/// Plane geometry in terms of (q, z), without assuming ℰ_max = 1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneGeometry {
    q: f64,
    z: f64,
    r: f64,
    theta0: f64,
    shape: Shape,
}

impl PlaneGeometry {
    pub(crate) fn new(q: f64, z: f64) -> Self {
        let r = z.hypot(q);
        let e_max = q + r;
        let shape = if z <= DEGENERATE_TOL * e_max {
            Shape::Uniform
        } else if q <= DEGENERATE_TOL * e_max {
            Shape::BellType
        } else {
            Shape::Generic
        };
        Self {
            q,
            z,
            r,
            theta0: z.atan2(q),
            shape,
        }
    }

    pub(crate) fn e_max(&self) -> f64 {
        self.q + self.r
    }

    fn upper(&self, theta: f64) -> f64 {
        self.q - self.r * (theta + self.theta0).cos()
    }

    fn lower(&self, theta: f64) -> f64 {
        (self.r * (theta - self.theta0).cos() - self.q).abs()
    }

    /// Density just below ℰ_max: 1/(ℰ_max sin μ).
    fn endpoint_density(&self) -> f64 {
        let e_max = self.e_max();
        let sin_mu = 2.0 * (self.q * (self.q * e_max + self.z * self.z)).sqrt() / e_max.powf(1.5);
        1.0 / (e_max * sin_mu)
    }

    /// Zeros in θ of the four factors ℰ − v, ℰ + v, U − ℰ, U + ℰ (with
    /// v = R cos(θ − θ₀) − q), as raw values before reduction to [0, π].
    fn roots(&self, e: f64) -> (Vec<f64>, Option<f64>) {
        let a_minus = ((self.q - e) / self.r).clamp(-1.0, 1.0).acos();
        let c_plus = (self.q + e) / self.r;
        let a_plus = (c_plus <= 1.0).then(|| c_plus.acos());
        let t0 = self.theta0;
        let mut roots = vec![t0 - a_minus, t0 + a_minus, -t0 - a_minus, -t0 + a_minus];
        if let Some(a) = a_plus {
            roots.extend([t0 - a, t0 + a, -t0 - a, -t0 + a]);
        }
        (roots, if a_plus.is_none() { Some(c_plus) } else { None })
    }

    /// Subintervals of [0, π] delimited by factor zeros.
    fn breakpoints(roots: &[f64]) -> Vec<f64> {
        let mut pts = vec![0.0, PI];
        for &r in roots {
            for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
                let v = r + shift;
                if (-1e-13..=PI + 1e-13).contains(&v) {
                    pts.push(v.clamp(0.0, PI));
                }
            }
        }
        normalize_grid(pts, 1e-15)
    }

    /// (ℰ² − L²)(U² − ℰ²) written as a product of sines about each zero, with
    /// distances to the zeros measured from the nearer interval endpoint.
    fn radicand(&self, roots: &[f64], no_root_c: Option<f64>, theta: f64, near: f64, offset: f64) -> f64 {
        // each factor with zeros r₁, r₂ equals ±2R sin((θ − r₁)/2) sin((θ − r₂)/2)
        let mut d = (2.0 * self.r).powi(roots.len() as i32 / 2);
        for &r in roots {
            // representative of r modulo 2π closest to the endpoint
            let k = ((near - r) / (2.0 * PI)).round();
            let diff = offset + (near - (r + 2.0 * PI * k));
            d *= (0.5 * diff).sin().abs();
        }
        if let Some(c) = no_root_c {
            let u = theta - self.theta0;
            let w = theta + self.theta0;
            d *= self.r * (c - u.cos()) * self.r * (c - w.cos());
        }
        d
    }

    fn in_region(&self, e: f64, theta: f64) -> bool {
        self.lower(theta) < e && e < self.upper(theta)
    }

    /// 𝒫(ℰ) for the unscaled geometry.
    pub(crate) fn density(&self, e: f64) -> Result<f64> {
        let e_max = self.e_max();
        let e = if (e - e_max).abs() <= 4.0 * f64::EPSILON * e_max { e_max } else { e };
        if !(e > 0.0) || e >= e_max {
            return Ok(match self.shape {
                Shape::Uniform if (0.0..=e_max).contains(&e) => 1.0 / e_max,
                _ if e == e_max && self.shape == Shape::Generic => self.endpoint_density(),
                Shape::BellType if e == e_max => f64::INFINITY,
                _ => 0.0,
            });
        }
        match self.shape {
            Shape::Uniform => return Ok(1.0 / e_max),
            Shape::BellType => {
                let z = self.z;
                return Ok(e / (z * ((z - e) * (z + e)).sqrt()));
            }
            Shape::Generic => {}
        }

        let (roots, no_root_c) = self.roots(e);
        let pts = Self::breakpoints(&roots);
        let cfg = QuadConfig::default();
        let mut total = 0.0;
        let mut err = 0.0;
        let mut segs = 0;
        for w in pts.windows(2) {
            let (ta, tb) = (w[0], w[1]);
            if tb - ta < 1e-14 || !self.in_region(e, 0.5 * (ta + tb)) {
                continue;
            }
            let h = 0.5 * (tb - ta);
            let f = |s: f64| {
                let (sn, cs) = s.sin_cos();
                let (theta, near, offset) = if s <= 0.0 {
                    // θ − θa = h(1 + sin s) = h cos²s / (1 − sin s)
                    let da = h * cs * cs / (1.0 - sn);
                    (ta + da, ta, da)
                } else {
                    let db = h * cs * cs / (1.0 + sn);
                    (tb - db, tb, -db)
                };
                let d = self.radicand(&roots, no_root_c, theta, near, offset);
                if d > 0.0 {
                    theta.sin() * h * cs / d.sqrt()
                } else {
                    0.0
                }
            };
            let q = integrate(f, -FRAC_PI_2, FRAC_PI_2, &cfg);
            total += q.value;
            err += q.error;
            segs += q.segments;
        }
        let scale = e / PI;
        if !(err * scale <= QUAD_FAILURE_TOL) || !total.is_finite() {
            return Err(Error::Integration {
                at: e,
                estimate: err * scale,
                segments: segs,
            });
        }
        Ok(scale * total)
    }

    /// P(ℰ' < ℰ) by integrating the conditional φ-fraction over θ.
    pub(crate) fn cdf(&self, e: f64) -> Result<f64> {
        let e_max = self.e_max();
        if e <= 0.0 {
            return Ok(0.0);
        }
        if e >= e_max {
            return Ok(1.0);
        }
        match self.shape {
            Shape::Uniform => return Ok(e / e_max),
            Shape::BellType => {
                let t = e / self.z;
                // 1 − √(1 − t²) without cancellation
                return Ok(t * t / (1.0 + ((1.0 - t) * (1.0 + t)).sqrt()));
            }
            Shape::Generic => {}
        }
        let (roots, _) = self.roots(e);
        let pts = Self::breakpoints(&roots);
        let cfg = QuadConfig::default();
        let mut total = 0.0;
        let mut err = 0.0;
        let mut segs = 0;
        for w in pts.windows(2) {
            let (ta, tb) = (w[0], w[1]);
            if tb - ta < 1e-15 {
                continue;
            }
            let mid = 0.5 * (ta + tb);
            if self.upper(mid) <= e {
                total += ta.cos() - tb.cos();
                continue;
            }
            if self.lower(mid) >= e {
                continue;
            }
            let h = 0.5 * (tb - ta);
            let zq4 = 4.0 * self.z * self.q;
            let f = |s: f64| {
                let (sn, cs) = s.sin_cos();
                let theta = if s <= 0.0 {
                    ta + h * cs * cs / (1.0 - sn)
                } else {
                    tb - h * cs * cs / (1.0 + sn)
                };
                let st = theta.sin();
                let one_minus = 2.0 * (0.5 * theta).sin().powi(2);
                let spread = zq4 * st * one_minus;
                if spread <= 0.0 {
                    return 0.0;
                }
                let u = self.upper(theta);
                let l = self.lower(theta);
                let w = ((2.0 * e * e - u * u - l * l) / spread).clamp(-1.0, 1.0);
                st * (1.0 - w.acos() / PI) * h * cs
            };
            let q = integrate(f, -FRAC_PI_2, FRAC_PI_2, &cfg);
            total += q.value;
            err += q.error;
            segs += q.segments;
        }
        if !(err <= QUAD_FAILURE_TOL) {
            return Err(Error::Integration {
                at: e,
                estimate: err,
                segments: segs,
            });
        }
        Ok((0.5 * total).clamp(0.0, 1.0))
    }
}

/// Density at ℰ for the plane with parameters (x, y, z), by the scaling law
/// 𝒫(ℰ) = 𝒫₁(ℰ/ℰ_max)/ℰ_max where 𝒫₁ is the ℰ_max = 1 density of the same μ.
pub fn plane_density_at(x: f64, y: f64, z: f64, e: f64) -> Result<f64> {
    let m = plane_markers(x, y, z);
    if m.e_max < SEPARABLE_TOL {
        return Err(Error::Domain("separable plane: the density is a point mass at 0".into()));
    }
    let unit = PlaneGeometry::new(x * y / m.e_max, z / m.e_max);
    Ok(unit.density(e / m.e_max)? / m.e_max)
}

/// Cumulative distribution of ℰ for the plane (x, y, z).
pub fn plane_cdf_at(x: f64, y: f64, z: f64, e: f64) -> Result<f64> {
    let m = plane_markers(x, y, z);
    if m.e_max < SEPARABLE_TOL {
        return Ok(if e >= 0.0 { 1.0 } else { 0.0 });
    }
    PlaneGeometry::new(x * y / m.e_max, z / m.e_max).cdf(e / m.e_max)
}

/// Density of ℰ for the plane without the scaling step; used as a
/// cross-check of the scaling law.
pub fn plane_density_unscaled(x: f64, y: f64, z: f64, e: f64) -> Result<f64> {
    PlaneGeometry::new(x * y, z).density(e)
}

fn cluster(center: f64, h: f64, min_gap: f64, sign: f64) -> impl Iterator<Item = f64> {
    let mut d = h;
    std::iter::from_fn(move || {
        if d < min_gap {
            return None;
        }
        let v = center + sign * d;
        d *= CLUSTER_RATIO;
        Some(v)
    })
}

fn plane_grid(m: &PlaneMarkers, geo: &PlaneGeometry, grid_n: usize) -> Vec<f64> {
    let h = 1.0 / (grid_n - 1) as f64;
    let e_max = m.e_max;
    let mut g: Vec<f64> = uniform_grid(grid_n);
    let top = match geo.shape {
        Shape::BellType => e_max * (1.0 - 1e-12),
        _ => e_max,
    };
    g.retain(|&v| v < top || v > e_max + 1e-12);
    g.push(top);
    if e_max + 1e-12 < 1.0 {
        g.push(e_max + 1e-12);
    }
    match geo.shape {
        Shape::Uniform => {}
        Shape::BellType => {
            g.extend(cluster(e_max, h, 1e-12 * e_max, -1.0));
        }
        Shape::Generic => {
            let c = m.e_cusp;
            g.retain(|&v| (v - c).abs() > 1e-9);
            g.extend(cluster(c, h, CUSP_GAP, -1.0).filter(|&v| v > 0.0));
            g.extend(cluster(c, h, CUSP_GAP, 1.0).filter(|&v| v < e_max));
            g.extend(cluster(e_max, h, CUSP_GAP, -1.0).filter(|&v| v > c + CUSP_GAP));
        }
    }
    normalize_grid(g, 1e-14)
}

/// Sampled density of a plane, with cusp and support annotations.
pub fn plane_pdf(cp: &CanonicalPlane, grid_n: usize) -> Result<DensityCurve> {
    plane_pdf_xyz(cp.x, cp.y, cp.z, grid_n)
}

pub fn plane_pdf_xyz(x: f64, y: f64, z: f64, grid_n: usize) -> Result<DensityCurve> {
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid_n must be at least 16, got {grid_n}")));
    }
    let m = plane_markers(x, y, z);
    if m.e_max < SEPARABLE_TOL {
        return Err(Error::Domain("separable plane: the density is a point mass at 0".into()));
    }
    let unit = PlaneGeometry::new(x * y / m.e_max, z / m.e_max);
    let grid = plane_grid(&m, &unit, grid_n);

    let values: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&e| {
            let t = e / m.e_max;
            let d = if t > 1.0 { 0.0 } else { unit.density(t.min(1.0))? / m.e_max };
            let c = unit.cdf(t)?;
            Ok((d, c))
        })
        .collect::<Result<_>>()?;
    let (density, cdf): (Vec<f64>, Vec<f64>) = values.into_iter().unzip();

    let annotations = match unit.shape {
        Shape::Uniform => Annotations {
            cusp: None,
            support_max: m.e_max,
            divergences: vec![],
            kinks: vec![],
        },
        Shape::BellType => Annotations {
            cusp: Some(m.e_max),
            support_max: m.e_max,
            divergences: vec![m.e_max],
            kinks: vec![],
        },
        Shape::Generic => Annotations {
            cusp: Some(m.e_cusp),
            support_max: m.e_max,
            divergences: vec![m.e_cusp],
            kinks: vec![],
        },
    };
    Ok(DensityCurve::new(CurveKind::Plane, grid, density, cdf, annotations))
}
