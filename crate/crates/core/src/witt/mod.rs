//! Truncated p-typical Witt vectors over perfect rings.

mod polys;
mod specialize;
mod vector;

pub use polys::{ghost_components, int_witt_op, structure_polys, IntPoly, WittStructurePolys, MAX_LEN};
pub use specialize::{specialize_x_to_p, SpecializedValue};
pub use vector::WittVector;
