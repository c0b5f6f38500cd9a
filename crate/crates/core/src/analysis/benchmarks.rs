use serde::Serialize;

use crate::localops::pure_concurrence;
use crate::qstate::{eigendecompose, hermitian_eigen, DensityMatrix, PureState, C64};

/// vᵀ (σ_y ⊗ σ_y) w
fn spin_flip_form(v: &[C64; 4], w: &[C64; 4]) -> C64 {
    -v[0] * w[3] + v[1] * w[2] + v[2] * w[1] - v[3] * w[0]
}

/// Mixed-state concurrence max(0, s₁ − s₂ − s₃ − s₄).
///
/// The s_i are the singular values of τ_ij = v_iᵀ(σ_y⊗σ_y)v_j with
/// v_i = √λ_i ψ_i, which coincide with the square roots of the eigenvalues
/// of ρρ̃ but avoid the non-Hermitian eigenproblem.
pub fn wootters_concurrence(rho: &DensityMatrix) -> f64 {
    let spec = eigendecompose(rho).expect("validated density matrix");
    let v: [[C64; 4]; 4] = std::array::from_fn(|i| {
        let s = spec.eigenvalues[i].max(0.0).sqrt();
        spec.eigenvectors[i].amplitudes().map(|a| a * s)
    });
    let mut h = [[C64::new(0.0, 0.0); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let t = spin_flip_form(&v[i], &v[j]);
            h[i][4 + j] = t;
            h[4 + j][i] = t.conj();
        }
    }
    let eig = hermitian_eigen(&h).expect("8x8 Jacobi converges");
    let mut s: Vec<f64> = eig.values.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
}

/// Twice the absolute sum of the negative eigenvalues of ρ^{T₂}.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = rho.matrix().partial_transpose_second();
    let eig = hermitian_eigen(&pt.0).expect("4x4 Jacobi converges");
    2.0 * eig.values.iter().filter(|&&v| v < 0.0).fold(0.0, |acc, v| acc - v)
}

/// Both sides of 𝒞_ρ ≤ (λ₁ − λ₂)𝒞_{Π₁} + (λ₂ − λ₃)𝒞_{Π₂}.
///
/// 𝒞_{Π₂} is the concurrence of the unnormalized projector, i.e. twice that
/// of Π₂/2; the Π₃ and Π₄ terms vanish identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub concurrence: f64,
    pub c_pi1: f64,
    pub c_pi2: f64,
    pub bound: f64,
    pub slack: f64,
    pub violated: bool,
}

pub const CONVEXITY_TOL: f64 = 1e-8;

pub fn concurrence_convexity_check(rho: &DensityMatrix) -> ConvexityReport {
    let spec = eigendecompose(rho).expect("validated density matrix");
    let l = spec.eigenvalues;
    let c_pi1 = pure_concurrence(&spec.eigenvectors[0]);
    let half_pi2 = DensityMatrix::mixture(&[(0.5, spec.eigenvectors[0]), (0.5, spec.eigenvectors[1])])
        .expect("orthonormal eigenvectors");
    let c_pi2 = 2.0 * wootters_concurrence(&half_pi2);
    let concurrence = wootters_concurrence(rho);
    let bound = (l[0] - l[1]) * c_pi1 + (l[1] - l[2]) * c_pi2;
    let slack = bound - concurrence;
    ConvexityReport {
        concurrence,
        c_pi1,
        c_pi2,
        bound,
        slack,
        violated: slack < -CONVEXITY_TOL,
    }
}

/// Concurrence of a pure state through the mixed-state formula.
pub fn projector_concurrence(psi: &PureState) -> f64 {
    wootters_concurrence(&DensityMatrix::from_pure(psi))
}
