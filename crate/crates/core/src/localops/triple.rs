use super::concurrence::pure_concurrence;
use crate::error::{Error, Result};
use crate::qstate::{hermitian_eigen, ComplexMatrix4, PureState};

const PROJECTOR_TOL: f64 = 1e-9;

/// A three-dimensional subspace is characterized up to local operations by
/// the entanglement of its orthogonal complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalTriple {
    pub e_perp: f64,
    pub psi_perp: PureState,
}

pub fn triple_canonical(pi3: &ComplexMatrix4) -> Result<CanonicalTriple> {
    let idem = (*pi3 * *pi3).max_abs_diff(pi3).max(pi3.hermiticity_residual());
    if idem > PROJECTOR_TOL {
        return Err(Error::InvalidProjection(format!(
            "not a Hermitian idempotent (residual {idem:.3e})"
        )));
    }
    let eig = hermitian_eigen(&pi3.0)?;
    let rank = eig.values.iter().filter(|&&v| v > 0.5).count();
    if rank != 3 {
        return Err(Error::InvalidProjection(format!("expected rank 3, got rank {rank}")));
    }
    let k = (0..4)
        .min_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]))
        .expect("nonempty");
    let psi_perp = PureState::normalized(eig.column(k))?.phase_fixed();
    Ok(CanonicalTriple {
        e_perp: pure_concurrence(&psi_perp),
        psi_perp,
    })
}

/// Orthonormal basis of the range of a rank-3 projector.
pub fn triple_basis(pi3: &ComplexMatrix4) -> Result<[PureState; 3]> {
    let v = crate::qstate::projector_range(pi3)?;
    if v.len() != 3 {
        return Err(Error::InvalidProjection(format!("expected rank 3, got rank {}", v.len())));
    }
    Ok([v[0], v[1], v[2]])
}
