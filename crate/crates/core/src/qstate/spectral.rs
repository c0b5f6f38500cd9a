use super::jacobi::hermitian_eigen;
use super::matrix::{ComplexMatrix4, C64, ZERO};
use super::state::{fix_phase, inner, norm, DensityMatrix, PureState, PSD_TOL};
use crate::error::{Error, Result};

/// Eigenvalues closer than this are treated as one degenerate block.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄ ≥ 0, summing to one.
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [PureState; 4],
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix4 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .fold(ComplexMatrix4::zeros(), |acc, (l, v)| acc + v.projector().scale(*l))
    }
}

/// ρ = Σ_M Λ_M Π_M with Π_M the projector onto the M leading eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedResolution {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [PureState; 4],
    /// Λ_M = λ_M − λ_{M+1}, Λ₄ = λ₄.
    pub lambdas_big: [f64; 4],
    /// ω_M = Λ_M / λ₁.
    pub weights: [f64; 4],
    pub projections: [ComplexMatrix4; 4],
}

impl NestedResolution {
    pub fn weight(&self, m: usize) -> f64 {
        self.weights[m - 1]
    }

    pub fn projection(&self, m: usize) -> &ComplexMatrix4 {
        &self.projections[m - 1]
    }

    pub fn reconstruct(&self) -> ComplexMatrix4 {
        self.lambdas_big
            .iter()
            .zip(&self.projections)
            .fold(ComplexMatrix4::zeros(), |acc, (l, p)| acc + p.scale(*l))
    }
}

/// Sorted spectral decomposition with deterministic bases for degenerate
/// eigenspaces.
pub fn eigendecompose(rho: &DensityMatrix) -> Result<SpectralDecomposition> {
    let eig = hermitian_eigen(&rho.matrix().0)?;

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
    let mut values = order.map(|i| eig.values[i]);
    let vectors = order.map(|i| eig.column(i));

    if values[3] < -PSD_TOL {
        return Err(Error::InvalidState {
            invariant: "positive semidefinite",
            residual: -values[3],
        });
    }
    for v in values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= total);

    let mut out_vecs = vectors;
    let mut start = 0;
    while start < 4 {
        let mut end = start + 1;
        while end < 4 && values[start] - values[end] <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start == 1 {
            out_vecs[start] = fix_phase(vectors[start]);
        } else {
            let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
            values[start..end].iter_mut().for_each(|v| *v = mean);
            let basis = block_basis(&vectors[start..end]);
            out_vecs[start..end].copy_from_slice(&basis);
        }
        start = end;
    }

    Ok(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: out_vecs.map(PureState::from_raw),
    })
}

/// Canonical orthonormal basis of span(block): project the computational basis
/// vectors in order and Gram–Schmidt them.
fn block_basis(block: &[[C64; 4]]) -> Vec<[C64; 4]> {
    let project = |e: &[C64; 4]| -> [C64; 4] {
        let mut out = [ZERO; 4];
        for v in block {
            let c = inner(v, e);
            for i in 0..4 {
                out[i] += v[i] * c;
            }
        }
        out
    };
    let mut basis: Vec<[C64; 4]> = Vec::with_capacity(block.len());
    for k in 0..4 {
        if basis.len() == block.len() {
            break;
        }
        let mut e = [ZERO; 4];
        e[k] = C64::new(1.0, 0.0);
        let mut w = project(&e);
        // two passes of classical Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for i in 0..4 {
                    w[i] -= b[i] * c;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-4 {
            basis.push(fix_phase(w.map(|c| c / n)));
        }
    }
    debug_assert_eq!(basis.len(), block.len());
    basis
}

pub fn nested_resolution(spec: &SpectralDecomposition) -> Result<NestedResolution> {
    let l = spec.eigenvalues;
    if !(l[0] > 0.0) {
        return Err(Error::InvalidState {
            invariant: "nonzero leading eigenvalue",
            residual: l[0],
        });
    }
    let lambdas_big = [l[0] - l[1], l[1] - l[2], l[2] - l[3], l[3]];
    let weights = lambdas_big.map(|x| x / l[0]);
    let mut projections = [ComplexMatrix4::zeros(); 4];
    let mut acc = ComplexMatrix4::zeros();
    for m in 0..4 {
        acc = acc + spec.eigenvectors[m].projector();
        projections[m] = acc;
    }
    Ok(NestedResolution {
        eigenvalues: l,
        eigenvectors: spec.eigenvectors,
        lambdas_big,
        weights,
        projections,
    })
}

/// Normalized projection of ψ onto range(Π), or `None` if it (nearly)
/// vanishes.
pub fn project_onto(pi: &ComplexMatrix4, psi: &PureState) -> Option<PureState> {
    let v = pi.apply(psi.amplitudes());
    let n = norm(&v);
    if n < 1e-12 {
        None
    } else {
        Some(PureState::from_raw(v.map(|c| c / n)))
    }
}

/// Orthonormal basis of the range of a projector (rank decided at 1/2 on the
/// eigenvalues), in the same deterministic convention as `eigendecompose`.
pub fn projector_range(pi: &ComplexMatrix4) -> Result<Vec<PureState>> {
    let eig = hermitian_eigen(&pi.0)?;
    let block: Vec<[C64; 4]> = (0..4)
        .filter(|&i| eig.values[i] > 0.5)
        .map(|i| eig.column(i))
        .collect();
    if block.is_empty() {
        return Ok(Vec::new());
    }
    Ok(block_basis(&block).into_iter().map(PureState::from_raw).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_spectrum_and_canonical_basis() {
        let s = eigendecompose(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(s.eigenvalues, [0.25; 4]);
        for (i, v) in s.eigenvectors.iter().enumerate() {
            assert!((v.amplitudes()[i] - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pure_state_gives_single_weight() {
        let psi = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
        let s = eigendecompose(&DensityMatrix::from_pure(&psi)).unwrap();
        let n = nested_resolution(&s).unwrap();
        assert!((n.weights[0] - 1.0).abs() < 1e-12);
        assert!(n.weights[1..].iter().all(|w| w.abs() < 1e-12));
        assert!(s.eigenvectors[0].ray_distance(&psi) < 1e-12);
    }

    #[test]
    fn project_onto_identity_and_orthogonal() {
        let psi = PureState::from_real([0.1, 0.2, 0.3, 0.4]).unwrap();
        let p = project_onto(&ComplexMatrix4::identity(), &psi).unwrap();
        assert!(p.ray_distance(&psi) < 1e-15);
        let pi = PureState::basis(0).projector();
        assert!(project_onto(&pi, &PureState::basis(1)).is_none());
    }
}
