//! Integral and exact-rational fractional matchings, confined LP optima and
//! the exact μ computation over small complete colourings.

mod fractional;
mod integral;
mod lp;
mod mu;

pub use fractional::FractionalMatching;
pub use integral::{maximal_matching_greedy, maximum_matching, Matching, DEFAULT_MATCHING_EDGE_CAP};
pub use lp::{
    max_fractional_confined, max_fractional_on, max_fractional_value, LinearProgram, LpSolution,
    DEFAULT_LP_CAP,
};
pub use mu::{
    confined_with_floor, mu_exact, score_coloring, ColoringScore, MuMode, MuOptions, MuResult,
    DEFAULT_MU_EDGE_CAP,
};
