//! Closed-form and cached densities of pure-state concurrence over each
//! projected subspace, and their weighted composition.

mod curve;
mod markers;
mod mixed;
mod plane;
pub mod quad;
mod triple;
mod universal;

pub use curve::{trapezoid, Annotations, CurveKind, DeltaComponent, DensityCurve, MASS_WARNING_TOL};
pub use markers::{invert_markers, plane_markers, PlaneMarkers};
pub use mixed::{mixed_pdf, mixed_pdf_with, MixedDensity, PlaneComponent, TripleComponent, UniversalComponent, WEIGHT_CUTOFF};
pub use plane::{
    plane_cdf_at, plane_density_at, plane_density_unscaled, plane_pdf, plane_pdf_xyz, QUAD_FAILURE_TOL, SEPARABLE_TOL,
};
pub use triple::{triple_cdf_at, triple_density_at, triple_pdf};
pub use universal::{
    universal_pdf, universal_table, UniversalStore, UniversalTable, CACHE_DIR_ENV, CACHE_FORMAT_VERSION,
    NO_GENERATE_ENV, UNIVERSAL_BINS, UNIVERSAL_SAMPLES, UNIVERSAL_SEED,
};
