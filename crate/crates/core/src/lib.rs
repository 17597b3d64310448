//! Perfect colourings of regular tilings `(p^q)`.
//!
//! A colouring of the tiles of a regular tiling is *perfect* when every
//! symmetry of the uncoloured tiling permutes the colour classes. Such
//! colourings with `k` colours correspond to subgroups of index `k` of the
//! tiling's symmetry group that contain the stabilizer of a tile. This crate
//! enumerates those subgroups as coset tables of triangle groups, interprets
//! them as colourings, and draws them in the Poincaré disc.

pub mod census;
pub mod coincidence;
pub mod colouring;
pub mod coset_table;
pub mod error;
pub mod geometry;
pub mod low_index;
pub mod presentation;
pub mod render;
pub mod tiling;

pub use error::{Error, Result};

/// Version tag written into every JSON document this crate emits.
pub const SCHEMA: &str = "tessella/1";
