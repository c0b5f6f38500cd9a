//! Standard entanglement benchmarks, the seven-marker summary of a state and
//! reconstruction of a state from its markers.

mod benchmarks;
mod markers;
mod reconstruct;

pub use benchmarks::{
    concurrence_convexity_check, negativity, projector_concurrence, wootters_concurrence, ConvexityReport,
    CONVEXITY_TOL,
};
pub use markers::{extract_markers, MarkerSet};
pub use reconstruct::{measure_extras, reconstruct_state, ReconstructionExtras, CONSISTENCY_TOL};
