//! Quantities invariant under local SU(2) × SU(2) operations: concurrence and
//! canonical forms of one-, two- and three-dimensional subspaces.

mod concurrence;
mod plane;
mod triple;
mod unitary;

pub use concurrence::{pure_concurrence, schmidt_canonical};
pub(crate) use plane::plane_point;
pub use plane::{canonical_plane, complement_plane, find_separable_in_plane, CanonicalPlane};
pub use triple::{triple_basis, triple_canonical, CanonicalTriple};
pub use unitary::{random_su2, LocalUnitaryPair, UNITARITY_TOL};
