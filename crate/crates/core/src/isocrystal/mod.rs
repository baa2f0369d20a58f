//! Isocrystals over Q_{p^s}: degree, slopes, slope decomposition,
//! Dieudonné–Manin data, filtrations and weak admissibility.
//!
//! Q_{p^s} stands in for K_0 = Frac W(F_p^alg). Slopes and the slope
//! decomposition are insensitive to this; a Dieudonné–Manin basis may need a
//! larger s, in which case [`Isocrystal::dm_data`] reports it as unavailable.

mod admissible;
mod crystal;
mod dm;
mod filtered;
mod slopes;

pub use admissible::{Decision, WaReport, WaSearch, Witness};
pub use crystal::{Isocrystal, KMatrix, SlopeComponent, MAX_TWISTED_SIZE};
pub use dm::{dm_summands, standard_block, DmData};
pub use filtered::{hodge_polygon, int_columns, FilteredIsocrystal};
