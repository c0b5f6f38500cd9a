//! Two-qubit states, spectral decomposition and the nested-projection
//! resolution ρ = Σ Λ_M Π_M.

mod jacobi;
mod matrix;
pub mod random;
mod spectral;
mod state;

pub use jacobi::{hermitian_eigen, HermitianEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{pauli, ComplexMatrix4, Mat2, C64};
pub(crate) use matrix::{mat2_adjoint, mat2_det, mat2_mul, ONE, ZERO};
pub use spectral::{
    eigendecompose, nested_resolution, project_onto, projector_range, NestedResolution,
    SpectralDecomposition, DEGENERACY_TOL,
};
pub(crate) use state::{inner, norm};
pub use state::{DensityMatrix, PureState, HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL};
