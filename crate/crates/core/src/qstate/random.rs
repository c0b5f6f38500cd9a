//! Random states for tests and oracles.

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix4, C64};
use super::state::{inner, norm, DensityMatrix, PureState};

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R) -> [C64; 4] {
    std::array::from_fn(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-uniform pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        if let Ok(psi) = PureState::normalized(gaussian_vector(rng)) {
            return psi;
        }
    }
}

/// Haar-uniform orthonormal basis (columns of a Haar unitary).
pub fn random_orthonormal_basis<R: Rng + ?Sized>(rng: &mut R) -> [PureState; 4] {
    let mut basis: Vec<[C64; 4]> = Vec::with_capacity(4);
    while basis.len() < 4 {
        let mut w = gaussian_vector(rng);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for i in 0..4 {
                    w[i] -= b[i] * c;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-6 {
            basis.push(w.map(|c| c / n));
        }
    }
    std::array::from_fn(|i| PureState::from_raw(basis[i]))
}

/// Random full-rank state G G† / Tr(G G†) with G a complex Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let mut g = ComplexMatrix4::zeros();
    for i in 0..4 {
        let row = gaussian_vector(rng);
        g.0[i] = row;
    }
    let m = g * g.adjoint();
    let tr = m.trace().re;
    let mut rho = m.scale(1.0 / tr);
    for i in 0..4 {
        rho.0[i][i] = C64::new(rho.0[i][i].re, 0.0);
        for j in 0..i {
            rho.0[i][j] = rho.0[j][i].conj();
        }
    }
    DensityMatrix::from_raw(rho)
}

/// Random state with a prescribed spectrum in a Haar-random eigenbasis.
pub fn random_state_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: [f64; 4]) -> DensityMatrix {
    let basis = random_orthonormal_basis(rng);
    let mut m = ComplexMatrix4::zeros();
    for (l, v) in spectrum.iter().zip(&basis) {
        m = m + v.projector().scale(*l);
    }
    DensityMatrix::from_raw(m)
}
