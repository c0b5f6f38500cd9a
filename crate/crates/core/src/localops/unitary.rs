use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qstate::{
    mat2_adjoint, mat2_det, mat2_mul, ComplexMatrix4, DensityMatrix, Mat2, PureState, C64, ONE,
    ZERO,
};

pub const UNITARITY_TOL: f64 = 1e-12;

/// A local operation U₁ ⊗ U₂ with U₁, U₂ ∈ SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitaryPair {
    pub u1: Mat2,
    pub u2: Mat2,
}

impl Default for LocalUnitaryPair {
    fn default() -> Self {
        Self::identity()
    }
}

impl LocalUnitaryPair {
    pub fn identity() -> Self {
        let id = [[ONE, ZERO], [ZERO, ONE]];
        Self { u1: id, u2: id }
    }

    pub fn new(u1: Mat2, u2: Mat2) -> Result<Self> {
        for u in [&u1, &u2] {
            let res = su2_residual(u);
            if res > UNITARITY_TOL {
                return Err(Error::InvalidState {
                    invariant: "special unitary",
                    residual: res,
                });
            }
        }
        Ok(Self { u1, u2 })
    }

    /// Independent Haar-random factors.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            u1: random_su2(rng),
            u2: random_su2(rng),
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix4 {
        ComplexMatrix4::kron(&self.u1, &self.u2)
    }

    pub fn inverse(&self) -> Self {
        Self {
            u1: mat2_adjoint(&self.u1),
            u2: mat2_adjoint(&self.u2),
        }
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Self) -> Self {
        Self {
            u1: mat2_mul(&self.u1, &first.u1),
            u2: mat2_mul(&self.u2, &first.u2),
        }
    }

    pub fn apply_vec(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for i1 in 0..2 {
            for i2 in 0..2 {
                let mut acc = ZERO;
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        acc += self.u1[i1][j1] * self.u2[i2][j2] * v[2 * j1 + j2];
                    }
                }
                out[2 * i1 + i2] = acc;
            }
        }
        out
    }

    pub fn apply(&self, psi: &PureState) -> PureState {
        PureState::normalized(self.apply_vec(psi.amplitudes())).expect("unitary preserves norm")
    }

    /// U M U†
    pub fn conjugate(&self, m: &ComplexMatrix4) -> ComplexMatrix4 {
        let u = self.to_matrix();
        u * *m * u.adjoint()
    }

    pub fn conjugate_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.conjugate(rho.matrix()))
    }
}

fn su2_residual(u: &Mat2) -> f64 {
    let p = mat2_mul(u, &mat2_adjoint(u));
    let mut res = (mat2_det(u) - ONE).norm();
    for i in 0..2 {
        for j in 0..2 {
            let target = if i == j { ONE } else { ZERO };
            res = res.max((p[i][j] - target).norm());
        }
    }
    res
}

/// Haar-random SU(2) element from a uniformly random unit quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-12 {
            let [a, b, c, d] = q.map(|v| v / n);
            return [
                [C64::new(a, b), C64::new(c, d)],
                [C64::new(-c, d), C64::new(a, -b)],
            ];
        }
    }
}

/// diag(e^{ia}, e^{−ia})
pub(crate) fn phase_rotation(a: f64) -> Mat2 {
    [[C64::from_polar(1.0, a), ZERO], [ZERO, C64::from_polar(1.0, -a)]]
}

/// Rescales a unitary by a phase so that its determinant is one.
pub(crate) fn to_special(u: Mat2) -> Mat2 {
    let d = mat2_det(&u);
    let f = C64::from_polar(1.0, -d.arg() / 2.0);
    [[u[0][0] * f, u[0][1] * f], [u[1][0] * f, u[1][1] * f]]
}

/// The SU(2) element mapping the unit spinor α to (1, 0).
pub(crate) fn rotate_to_up(alpha: [C64; 2]) -> Mat2 {
    [[alpha[0].conj(), alpha[1].conj()], [-alpha[1], alpha[0]]]
}
