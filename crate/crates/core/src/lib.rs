//! Exact p-adic arithmetic for Witt vectors, seminorms, filtered isocrystals
//! and truncated Robba series.

pub mod error;
pub mod isocrystal;
pub mod json;
pub mod linalg;
pub mod padic;
pub mod perfect;
pub mod presets;
pub mod robba;
pub mod scan;
pub mod seminorm;
pub mod svg;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
