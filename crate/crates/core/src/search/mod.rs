//! The two-part extremal colouring, monochromatic copy detection and
//! exhaustive small Ramsey numbers with isomorph rejection.

pub mod canonical;
mod extremal;
mod ramsey;

pub use canonical::{burnside_orbit_count, code_greater, edge_list, EdgeSymmetry, Mask};
pub use extremal::{extremal_coloring, verify_extremal, ExtremalInstance, ExtremalReport};
pub use ramsey::{
    contains_mono_copy, ramsey_search, LevelReport, RamseyOptions, RamseyResult,
    DEFAULT_RAMSEY_EDGE_CAP,
};
