use thiserror::Error;

use crate::hypergraph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    BudgetExhausted,
    InternalConsistency,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("edge {edge:?} has {found} vertices, expected {expected}")]
    BadArity {
        edge: Vec<Vertex>,
        found: usize,
        expected: usize,
    },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<Vertex>),
    #[error("duplicate vertex inside edge {0:?}")]
    RepeatedVertexInEdge(Vec<Vertex>),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("colour list has {found} entries for {expected} edges")]
    MissingColors { found: usize, expected: usize },
    #[error("unknown colour {0:?}, expected \"R\" or \"B\"")]
    BadColor(String),
    #[error("invalid uniformity k = {k} for n = {n}")]
    InvalidUniformity { k: usize, n: usize },
    #[error("{edges} edges exceed the cap of {cap}")]
    EdgeCapExceeded { edges: u128, cap: usize },
    #[error("subset of size {size} outside [1, {max}]")]
    SubsetSize { size: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window at position {position} repeats a vertex")]
    RepeatedVertexInWindow { position: usize },
    #[error("window {0:?} is not an edge of the host")]
    NotAnEdge(Vec<Vertex>),
    #[error("edge {0:?} is not in the host graph")]
    EdgeNotInHost(Vec<Vertex>),
    #[error("consecutive walk edges {0:?} and {1:?} share fewer than k-1 vertices")]
    NotAdjacent(Vec<Vertex>, Vec<Vertex>),
    #[error("pseudo-walk is not closed")]
    WalkNotClosed,
    #[error("index {index} out of range ({detail})")]
    IndexOutOfRange { index: usize, detail: String },
    #[error("weights are not multiples of 1/{0}")]
    NotFractional(u64),
    #[error("host vertex sets are not disjoint")]
    HostsNotDisjoint,
    #[error("host is not a subgraph: {0}")]
    HostNotSubgraph(String),
    #[error("fractional matching infeasible: {0}")]
    Infeasible(String),
    #[error("matching invalid: {0}")]
    InvalidMatching(String),
    #[error("LP with {rows}x{cols} tableau exceeds the cap of {cap} entries")]
    LpSizeCap { rows: usize, cols: usize, cap: usize },
    #[error("LP is unbounded")]
    Unbounded,
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("density precondition failed: {0}")]
    DensityPrecondition(String),
    #[error("component map is not a bijection: blown {blown} -> base {base}")]
    PiMtcNotBijective { blown: String, base: String },
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedJson(_) => "malformed-json",
            Error::BadArity { .. } => "bad-arity",
            Error::DuplicateEdge(_) => "duplicate-edge",
            Error::RepeatedVertexInEdge(_) => "repeated-vertex-in-edge",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::MissingColors { .. } => "missing-colors",
            Error::BadColor(_) => "bad-color",
            Error::InvalidUniformity { .. } => "wrong-uniformity",
            Error::EdgeCapExceeded { .. } => "edge-cap-exceeded",
            Error::SubsetSize { .. } => "subset-size",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::RepeatedVertexInWindow { .. } => "repeated-vertex-in-window",
            Error::NotAnEdge(_) => "window-not-an-edge",
            Error::EdgeNotInHost(_) => "edge-not-in-host",
            Error::NotAdjacent(..) => "not-adjacent",
            Error::WalkNotClosed => "walk-not-closed",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::NotFractional(_) => "not-r-fractional",
            Error::HostsNotDisjoint => "hosts-not-disjoint",
            Error::HostNotSubgraph(_) => "host-not-subgraph",
            Error::Infeasible(_) => "infeasible",
            Error::InvalidMatching(_) => "invalid-matching",
            Error::LpSizeCap { .. } => "lp-size-cap",
            Error::Unbounded => "lp-unbounded",
            Error::BudgetExhausted(_) => "budget-exhausted",
            Error::EnumerationCap(_) => "enumeration-cap",
            Error::DensityPrecondition(_) => "density-precondition",
            Error::PiMtcNotBijective { .. } => "pi-mtc-not-bijective",
            Error::InternalConsistency(_) => "internal-consistency",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::BudgetExhausted(_) | Error::EnumerationCap(_) | Error::LpSizeCap { .. } => {
                ErrorClass::BudgetExhausted
            }
            Error::PiMtcNotBijective { .. } | Error::InternalConsistency(_) => {
                ErrorClass::InternalConsistency
            }
            _ => ErrorClass::InvalidInput,
        }
    }
}
