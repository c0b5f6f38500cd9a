use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Support maximum, cusp location and cusp angle of a plane density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneMarkers {
    pub e_max: f64,
    pub e_cusp: f64,
    pub mu: f64,
}

impl PlaneMarkers {
    /// sin μ from the plane parameters without going through arccos.
    pub fn sin_mu_from_xyz(x: f64, y: f64, z: f64) -> f64 {
        let q = x * y;
        let e_max = q + (z * z + q * q).sqrt();
        if e_max == 0.0 {
            return 0.0;
        }
        2.0 * (q * (q * e_max + z * z)).sqrt() / e_max.powf(1.5)
    }
}

/// ℰ_max = xy + √(z² + x²y²), ℰ_cusp = z²/ℰ_max, μ = arccos(ℰ_cusp/ℰ_max).
pub fn plane_markers(x: f64, y: f64, z: f64) -> PlaneMarkers {
    let q = x * y;
    let r = (z * z + q * q).sqrt();
    let e_max = (q + r).min(1.0);
    if e_max == 0.0 {
        return PlaneMarkers { e_max: 0.0, e_cusp: 0.0, mu: 0.0 };
    }
    // z²/(q + r) = r − q without cancellation
    let e_cusp = (z * z / e_max).min(e_max);
    let mu = (e_cusp / e_max).clamp(-1.0, 1.0).acos();
    PlaneMarkers { e_max, e_cusp, mu }
}

/// Plane parameters (x, y, z) with x ≥ y reproducing the given markers.
pub fn invert_markers(e_max: f64, e_cusp: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&e_max) || !(0.0..=e_max).contains(&e_cusp) {
        return Err(Error::Domain(format!(
            "markers must satisfy 0 ≤ e_cusp ≤ e_max ≤ 1, got e_cusp = {e_cusp}, e_max = {e_max}"
        )));
    }
    let z = (e_max * e_cusp).sqrt();
    let a = ((1.0 + e_max) * (1.0 - e_cusp)).sqrt();
    let b = ((1.0 - e_max) * (1.0 + e_cusp)).sqrt();
    let x = 0.5 * (a + b);
    // (a − b)/2 with a² − b² = 2(e_max − e_cusp)
    let y = if a + b > 0.0 { (e_max - e_cusp) / (a + b) } else { 0.0 };
    Ok((x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_plane_and_step_function_limits() {
        let m = plane_markers(0.0, 0.0, 1.0);
        assert_eq!((m.e_max, m.e_cusp, m.mu), (1.0, 1.0, 0.0));
        let (x, y) = ((1.8f64.sqrt() + 0.2f64.sqrt()) / 2.0, (1.8f64.sqrt() - 0.2f64.sqrt()) / 2.0);
        assert!((x * y - 0.4).abs() < 1e-15);
        let m = plane_markers(x, y, 0.0);
        assert!((m.e_max - 0.8).abs() < 1e-15);
        assert_eq!(m.e_cusp, 0.0);
    }

    #[test]
    fn inversion_round_trip() {
        let (x, y, z) = invert_markers(1.0, 1.0).unwrap();
        assert!(x.abs() < 1e-15 && y.abs() < 1e-15 && (z - 1.0).abs() < 1e-15);
        assert!(invert_markers(0.5, 0.6).is_err());
        assert!(invert_markers(1.1, 0.6).is_err());
    }
}
