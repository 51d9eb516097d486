//! Tight components, fractional matchings, blow-ups and exhaustive
//! small-instance searches for 2-edge-coloured k-uniform hypergraphs.

pub mod blowup;
pub mod combinatorics;
pub mod error;
pub mod hypergraph;
pub mod matching;
pub mod pipeline;
pub mod rational;
pub mod search;
pub mod tight;

pub use error::{Error, ErrorClass, Result};
pub use hypergraph::{Color, ColoredHypergraph, Edge, Hypergraph, Vertex};
pub use rational::Rational;
pub use matching::{FractionalMatching, Matching};
pub use tight::{ComponentId, PseudoWalk};
pub use blowup::Blowup;
