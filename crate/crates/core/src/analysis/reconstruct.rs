use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::markers::MarkerSet;
use crate::entdensity::{invert_markers, plane_markers};
use crate::error::{Error, Result};
use crate::localops::{canonical_plane, complement_plane, plane_point, pure_concurrence, triple_canonical, CanonicalPlane};
use crate::qstate::{eigendecompose, inner, nested_resolution, DensityMatrix, PureState, C64};

/// Tolerance on the concurrence of placed vectors against e1 and e_perp.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Placement of ψ₁ in the canonical plane and of ψ_⊥ in its complement, as
/// cos(θ/2)e^{iφ/2}χ₁ + sin(θ/2)e^{−iφ/2}χ₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionExtras {
    pub theta: f64,
    pub phi: f64,
    pub theta_perp: f64,
    pub phi_perp: f64,
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

fn check_angles(theta: f64, phi: f64, which: &str) -> Result<()> {
    if !(-1e-12..=PI + 1e-12).contains(&theta) || !phi.is_finite() {
        return Err(Error::Domain(format!("{which}: θ must lie in [0, π] and φ be finite")));
    }
    Ok(())
}

/// Orthonormal partner of `plane_point(c1, c2, θ, φ)` within the same plane.
fn partner(c1: &PureState, c2: &PureState, theta: f64, phi: f64) -> PureState {
    let a = C64::from_polar(-(theta / 2.0).sin(), phi / 2.0);
    let b = C64::from_polar((theta / 2.0).cos(), -phi / 2.0);
    let (u, v) = (c1.amplitudes(), c2.amplitudes());
    PureState::normalized(std::array::from_fn(|i| a * u[i] + b * v[i]))
        .expect("orthonormal basis")
        .phase_fixed()
}

/// Eigenvalues λ₁ ≥ … ≥ λ₄ from the weights: λ₁ = 1/Σ M·ω_M, Λ_M = λ₁ω_M.
fn spectrum_from_weights(ms: &MarkerSet) -> Result<[f64; 4]> {
    for (name, w) in [("w1", ms.w1), ("w2", ms.w2), ("w3", ms.w3)] {
        check_unit(name, w)?;
    }
    let sum = ms.w1 + ms.w2 + ms.w3;
    if sum > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("w1 + w2 + w3 must not exceed 1, got {sum}")));
    }
    let w = ms.weights();
    let l1 = 1.0 / (w[0] + 2.0 * w[1] + 3.0 * w[2] + 4.0 * w[3]);
    let l4 = l1 * w[3];
    let l3 = l4 + l1 * w[2];
    let l2 = l3 + l1 * w[1];
    Ok([l1, l2, l3, l4])
}

/// Builds a state with the given markers; {ψ₂, ψ₃} complete the nesting
/// Π₁ ⊂ Π₂ ⊂ Π₃ inside the canonical plane and its complement.
pub fn reconstruct_state(ms: &MarkerSet, ex: &ReconstructionExtras) -> Result<DensityMatrix> {
    for (name, v) in [("e1", ms.e1), ("e_perp", ms.e_perp)] {
        check_unit(name, v)?;
    }
    check_angles(ex.theta, ex.phi, "extras")?;
    check_angles(ex.theta_perp, ex.phi_perp, "perpendicular extras")?;
    let lambdas = spectrum_from_weights(ms)?;

    let (x, y, z) = invert_markers(ms.e_max, ms.e_cusp)?;
    let cp = CanonicalPlane::from_xyz(x, y, z)?;
    let psi1 = cp.point(ex.theta, ex.phi);
    let c1 = pure_concurrence(&psi1);
    if (c1 - ms.e1).abs() > CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            marker: "e1",
            requested: ms.e1,
            obtained: c1,
        });
    }
    let psi2 = partner(&cp.chi1, &cp.chi2, ex.theta, ex.phi);

    let (k1, k2) = complement_plane(&cp);
    let psi_perp = plane_point(&k1, &k2, ex.theta_perp, ex.phi_perp);
    let cp_perp = pure_concurrence(&psi_perp);
    if (cp_perp - ms.e_perp).abs() > CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            marker: "e_perp",
            requested: ms.e_perp,
            obtained: cp_perp,
        });
    }
    let psi3 = partner(&k1, &k2, ex.theta_perp, ex.phi_perp);

    DensityMatrix::mixture(&[
        (lambdas[0], psi1.phase_fixed()),
        (lambdas[1], psi2),
        (lambdas[2], psi3),
        (lambdas[3], psi_perp.phase_fixed()),
    ])
}

fn swap_qubits(v: &[C64; 4]) -> [C64; 4] {
    [v[0], v[2], v[1], v[3]]
}

/// (θ, φ) of `v` relative to the orthonormal pair (c1, c2).
fn angles_in(c1: &PureState, c2: &PureState, v: &[C64; 4]) -> (f64, f64) {
    let a = inner(c1.amplitudes(), v);
    let b = inner(c2.amplitudes(), v);
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = if a.norm() > 1e-14 && b.norm() > 1e-14 {
        (a.arg() - b.arg()).rem_euclid(TAU)
    } else {
        0.0
    };
    (theta, phi)
}

/// Extras that make [`reconstruct_state`] reproduce ρ's markers.
///
/// The canonical plane rebuilt from (e_max, e_cusp) has x ≥ y; when ρ's own
/// plane has x < y the frame is additionally mapped by the qubit swap, which
/// preserves concurrence.
pub fn measure_extras(rho: &DensityMatrix) -> Result<ReconstructionExtras> {
    let res = nested_resolution(&eigendecompose(rho)?)?;
    let psi = &res.eigenvectors;
    let cp = canonical_plane(&psi[0], &psi[1])?;
    let pm = plane_markers(cp.x, cp.y, cp.z);
    let (x, y, z) = invert_markers(pm.e_max, pm.e_cusp)?;
    let swap = (cp.x - y).abs() + (cp.y - x).abs() < (cp.x - x).abs() + (cp.y - y).abs();
    let frame = |v: &PureState| {
        let w = cp.lo.apply_vec(v.amplitudes());
        if swap {
            swap_qubits(&w)
        } else {
            w
        }
    };
    let target = CanonicalPlane::from_xyz(x, y, z)?;
    let (theta, phi) = angles_in(&target.chi1, &target.chi2, &frame(&psi[0]));

    let perp = triple_canonical(res.projection(3))?.psi_perp;
    let (k1, k2) = complement_plane(&target);
    let (theta_perp, phi_perp) = angles_in(&k1, &k2, &frame(&perp));
    Ok(ReconstructionExtras {
        theta,
        phi,
        theta_perp,
        phi_perp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::extract_markers;

    #[test]
    fn bell_projector_round_trip() {
        let bell = PureState::from_real([1.0, 0.0, 0.0, 1.0]).unwrap();
        let rho = DensityMatrix::from_pure(&bell);
        let ms = extract_markers(&rho).unwrap();
        let ex = measure_extras(&rho).unwrap();
        let back = reconstruct_state(&ms, &ex).unwrap();
        assert!(extract_markers(&back).unwrap().max_abs_diff(&ms) < 1e-10);
    }

    #[test]
    fn inconsistent_e1_is_named() {
        let ms = MarkerSet {
            w1: 0.5,
            w2: 0.2,
            w3: 0.1,
            e1: 0.9,
            e_cusp: 0.0,
            e_max: 0.0,
            e_perp: 0.0,
        };
        let ex = ReconstructionExtras {
            theta: 0.3,
            phi: 0.0,
            theta_perp: 0.0,
            phi_perp: 0.0,
        };
        match reconstruct_state(&ms, &ex) {
            Err(Error::Inconsistent { marker, .. }) => assert_eq!(marker, "e1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_weights_are_rejected() {
        let ms = MarkerSet {
            w1: 0.7,
            w2: 0.5,
            w3: 0.0,
            e1: 0.0,
            e_cusp: 0.0,
            e_max: 0.0,
            e_perp: 0.0,
        };
        let ex = ReconstructionExtras {
            theta: 0.0,
            phi: 0.0,
            theta_perp: 0.0,
            phi_perp: 0.0,
        };
        assert!(matches!(reconstruct_state(&ms, &ex), Err(Error::Domain(_))));
    }
}
