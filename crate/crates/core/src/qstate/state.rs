use super::matrix::{ComplexMatrix4, C64, ZERO};
use super::spectral::{eigendecompose, SpectralDecomposition};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// A normalized two-qubit pure state with amplitudes (c↑↑, c↑↓, c↓↑, c↓↓).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState([C64; 4]);

impl PureState {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let n = norm(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState {
                invariant: "unit norm",
                residual: (n - 1.0).abs(),
            });
        }
        Ok(Self(amplitudes))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: [C64; 4]) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::InvalidState {
                invariant: "nonzero norm",
                residual: n,
            });
        }
        Ok(Self(amplitudes.map(|c| c / n)))
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::normalized(amplitudes.map(|r| C64::new(r, 0.0)))
    }

    /// The computational basis state with index `i` in {↑↑, ↑↓, ↓↑, ↓↓}.
    pub fn basis(i: usize) -> Self {
        let mut a = [ZERO; 4];
        a[i] = C64::new(1.0, 0.0);
        Self(a)
    }

    pub(crate) fn from_raw(amplitudes: [C64; 4]) -> Self {
        Self(amplitudes)
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.0, &other.0)
    }

    pub fn projector(&self) -> ComplexMatrix4 {
        ComplexMatrix4::outer(&self.0, &self.0)
    }

    pub fn scaled(&self, phase: C64) -> Self {
        Self(self.0.map(|c| c * phase))
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude (first
    /// one on near-ties) is real and positive.
    pub fn phase_fixed(&self) -> Self {
        Self(fix_phase(self.0))
    }

    /// 1 − |⟨self|other⟩|², zero iff the rays coincide.
    pub fn ray_distance(&self, other: &Self) -> f64 {
        (1.0 - self.inner(other).norm_sqr()).max(0.0)
    }
}

pub(crate) fn norm(v: &[C64; 4]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u|v⟩
pub(crate) fn inner(u: &[C64; 4], v: &[C64; 4]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn fix_phase(v: [C64; 4]) -> [C64; 4] {
    let mut best = 0;
    for i in 1..4 {
        if v[i].norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let m = v[best].norm();
    if m == 0.0 {
        return v;
    }
    let phase = v[best].conj() / m;
    let mut out = v.map(|c| c * phase);
    out[best] = C64::new(out[best].norm(), 0.0);
    out
}

/// A validated two-qubit density matrix: Hermitian, unit trace, positive
/// semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix4);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState {
                invariant: "finite entries",
                residual: f64::INFINITY,
            });
        }
        let herm = m.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                invariant: "Hermitian",
                residual: herm,
            });
        }
        let tr = m.trace();
        let tr_res = (tr - C64::new(1.0, 0.0)).norm();
        if tr_res > TRACE_TOL {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                residual: tr_res,
            });
        }
        let rho = Self(m);
        // eigendecompose rejects eigenvalues below −PSD_TOL
        eigendecompose(&rho)?;
        Ok(rho)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self(psi.projector())
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix4::diag([0.25; 4]))
    }

    /// Σ p_i |ψ_i⟩⟨ψ_i|, validated.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self> {
        let mut m = ComplexMatrix4::zeros();
        for (p, psi) in parts {
            m = m + psi.projector().scale(*p);
        }
        Self::new(m)
    }

    pub(crate) fn from_raw(m: ComplexMatrix4) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.0
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        eigendecompose(self)
    }
}
