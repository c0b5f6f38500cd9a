//! Density of ℰ over a three-dimensional subspace, fixed by the entanglement
//! ℰ_⊥ of its orthogonal complement:
//!
//!   𝒫₃(ℰ) = (2ℰ/√(1 − ℰ_⊥²)) cosh⁻¹(1/ℰ_>),   ℰ_> = max(ℰ, ℰ_⊥).

use rayon::prelude::*;

use super::curve::{normalize_grid, uniform_grid, Annotations, CurveKind, DensityCurve};
use crate::error::{Error, Result};

/// atanh(s)/s, accurate for small s.
fn atanh_ratio(s: f64) -> f64 {
    if s < 1e-4 {
        1.0 + s * s / 3.0 + s.powi(4) / 5.0
    } else {
        s.atanh() / s
    }
}

/// G(ℰ) = ℰ² cosh⁻¹(1/ℰ) − √(1 − ℰ²) as a function of s = √(1 − ℰ²).
fn g_of_s(s: f64) -> f64 {
    if s < 0.5 {
        // −2 Σ_{k≥1} s^{2k+1}/(4k² − 1)
        let s2 = s * s;
        let mut term = s * s2;
        let mut acc = 0.0;
        for k in 1..200 {
            let kf = k as f64;
            let add = term / (4.0 * kf * kf - 1.0);
            acc += add;
            if add < 1e-18 * acc {
                break;
            }
            term *= s2;
        }
        -2.0 * acc
    } else {
        (1.0 - s * s) * s.atanh() - s
    }
}

fn check_e_perp(e_perp: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&e_perp) {
        return Err(Error::Domain(format!("e_perp must lie in [0, 1], got {e_perp}")));
    }
    Ok(())
}

fn s_of(e: f64) -> f64 {
    ((1.0 - e) * (1.0 + e)).max(0.0).sqrt()
}

pub fn triple_density_at(e_perp: f64, e: f64) -> Result<f64> {
    check_e_perp(e_perp)?;
    if !(0.0..=1.0).contains(&e) {
        return Ok(0.0);
    }
    if e == 0.0 {
        return Ok(0.0);
    }
    let s_perp = s_of(e_perp);
    if s_perp == 0.0 {
        return Ok(2.0 * e);
    }
    let s = s_of(e.max(e_perp));
    // cosh⁻¹(1/ℰ) = atanh(√(1 − ℰ²))
    Ok(2.0 * e * atanh_ratio(s) * s / s_perp)
}

pub fn triple_cdf_at(e_perp: f64, e: f64) -> Result<f64> {
    check_e_perp(e_perp)?;
    if e <= 0.0 {
        return Ok(0.0);
    }
    if e >= 1.0 {
        return Ok(1.0);
    }
    let s_perp = s_of(e_perp);
    if s_perp == 0.0 {
        return Ok(e * e);
    }
    let v = if e <= e_perp {
        e * e * atanh_ratio(s_perp)
    } else {
        1.0 + g_of_s(s_of(e)) / s_perp
    };
    Ok(v.clamp(0.0, 1.0))
}

pub fn triple_pdf(e_perp: f64, grid_n: usize) -> Result<DensityCurve> {
    check_e_perp(e_perp)?;
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid_n must be at least 16, got {grid_n}")));
    }
    let mut g = uniform_grid(grid_n);
    let kink = e_perp > 0.0 && e_perp < 1.0;
    if kink {
        g.push(e_perp);
    }
    let grid = normalize_grid(g, 1e-14);
    let density: Vec<f64> = grid
        .par_iter()
        .map(|&e| triple_density_at(e_perp, e))
        .collect::<Result<_>>()?;
    let cdf: Vec<f64> = grid
        .par_iter()
        .map(|&e| triple_cdf_at(e_perp, e))
        .collect::<Result<_>>()?;
    let annotations = Annotations {
        cusp: None,
        support_max: 1.0,
        divergences: vec![],
        kinks: if kink { vec![e_perp] } else { vec![] },
    };
    Ok(DensityCurve::new(CurveKind::Triple, grid, density, cdf, annotations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_dual_entanglement_gives_straight_line() {
        for &e in &[0.0, 0.25, 0.5, 1.0] {
            assert_eq!(triple_density_at(1.0, e).unwrap(), 2.0 * e);
        }
    }

    #[test]
    fn series_and_direct_g_agree_at_switch() {
        let s = 0.5f64;
        let series = {
            let s2 = s * s;
            -2.0 * (1..400).map(|k| s * s2.powi(k) / (4.0 * (k * k) as f64 - 1.0)).sum::<f64>()
        };
        assert!((series - g_of_s(s)).abs() < 1e-15);
    }

    #[test]
    fn cdf_is_continuous_at_the_kink() {
        let ep = 0.4;
        let below = triple_cdf_at(ep, ep - 1e-12).unwrap();
        let above = triple_cdf_at(ep, ep + 1e-12).unwrap();
        assert!((below - above).abs() < 1e-10);
    }
}
