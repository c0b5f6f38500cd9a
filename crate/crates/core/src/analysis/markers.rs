use serde::{Deserialize, Serialize};

use crate::entdensity::plane_markers;
use crate::error::Result;
use crate::localops::{canonical_plane, pure_concurrence, triple_canonical};
use crate::qstate::{eigendecompose, nested_resolution, DensityMatrix};

/// The seven local-operation invariants of a two-qubit state: three
/// independent weights and four concurrence markers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerSet {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub e1: f64,
    pub e_cusp: f64,
    pub e_max: f64,
    pub e_perp: f64,
}

impl MarkerSet {
    /// ω₄, implied by Σω = 1.
    pub fn w4(&self) -> f64 {
        (1.0 - self.w1 - self.w2 - self.w3).max(0.0)
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.w1, self.w2, self.w3, self.w4()]
    }

    /// Largest absolute difference over the seven fields.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    pub fn to_array(&self) -> [f64; 7] {
        [self.w1, self.w2, self.w3, self.e1, self.e_cusp, self.e_max, self.e_perp]
    }
}

pub fn extract_markers(rho: &DensityMatrix) -> Result<MarkerSet> {
    let res = nested_resolution(&eigendecompose(rho)?)?;
    let psi = &res.eigenvectors;
    let cp = canonical_plane(&psi[0], &psi[1])?;
    let pm = plane_markers(cp.x, cp.y, cp.z);
    let ct = triple_canonical(res.projection(3))?;
    Ok(MarkerSet {
        w1: res.weights[0],
        w2: res.weights[1],
        w3: res.weights[2],
        e1: pure_concurrence(&psi[0]),
        e_cusp: pm.e_cusp,
        e_max: pm.e_max,
        e_perp: ct.e_perp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;

    #[test]
    fn bell_projector_markers() {
        let bell = PureState::from_real([1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = extract_markers(&DensityMatrix::from_pure(&bell)).unwrap();
        assert!((m.w1 - 1.0).abs() < 1e-12 && (m.e1 - 1.0).abs() < 1e-12);
        assert!(m.w4() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_only_full_space_weight() {
        let m = extract_markers(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!([m.w1, m.w2, m.w3], [0.0, 0.0, 0.0]);
        assert!((m.w4() - 1.0).abs() < 1e-12);
    }
}
