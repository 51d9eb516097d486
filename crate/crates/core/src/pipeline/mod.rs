//! Constructive enlargement of matchings inside monochromatic tight
//! components: an initial matching, two increment steps and the driver
//! that alternates them with blow-ups.

mod config;
mod driver;
mod increment_one;
mod increment_two;
mod initial;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::for_each_subset;
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::tight::{ComponentId, PseudoWalk};

pub use config::{PipelineConfig, PipelineConfigFile};
pub use driver::{
    replay_archive, run_pipeline, run_pipeline_from, Guarantees, PipelineResult, PipelineStatus, ReplayReport,
    TraceRecord,
};
pub use increment_one::{
    claim_two_plus, matching_increment_one, ClaimBranch, ClaimMatching, ClaimOutcome,
    IncrementOneReport, IncrementOutcome, OneCase,
};
pub use increment_two::{matching_increment_two, pv_walk, IncrementTwoReport, TwoCase, TwoOutcome};
pub use initial::{
    initial_component_matching, kk_bound_check, large_component_bound, large_tight_component,
    InitialMatching, KkReport, LargeComponent,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InconclusiveReason {
    NoFreshApex,
    NoConnectorSet,
    StructureViolation,
    CaseSplitEmpty,
}

impl InconclusiveReason {
    pub fn label(self) -> &'static str {
        match self {
            InconclusiveReason::NoFreshApex => "no-fresh-apex",
            InconclusiveReason::NoConnectorSet => "no-connector-set",
            InconclusiveReason::StructureViolation => "structure-violation",
            InconclusiveReason::CaseSplitEmpty => "case-split-empty",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    IncrementOne,
    IncrementTwo,
}

/// The partner matching handed to the second increment: pairs `(f, g(f))`
/// with `f` in the first matching and `g(f)` in `component`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partner {
    pub pairs: Vec<(Edge, Edge)>,
    pub component: ComponentId,
}

/// Everything needed to rerun a step that stopped without a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Archive {
    pub reason: InconclusiveReason,
    pub stage: Stage,
    pub level: usize,
    pub seed: u64,
    pub matching: Vec<Edge>,
    pub component: ComponentId,
    pub partner: Option<Partner>,
    pub others: Vec<Edge>,
    pub walk: Option<PseudoWalk>,
    pub pivot: Option<usize>,
    pub reversed: bool,
}

impl Archive {
    pub(crate) fn new(reason: InconclusiveReason, stage: Stage, seed: u64, matching: &[Edge], component: ComponentId) -> Self {
        Archive {
            reason,
            stage,
            level: 0,
            seed,
            matching: matching.to_vec(),
            component,
            partner: None,
            others: Vec::new(),
            walk: None,
            pivot: None,
            reversed: false,
        }
    }
}

/// True iff every `k`-set made of `w` and `k - 1` vertices of `clique` is
/// an edge, i.e. `clique ∪ {w}` stays a clique when `clique` is one.
pub(crate) fn extends(h: &Hypergraph, clique: &[Vertex], w: Vertex) -> bool {
    let mut ok = true;
    for_each_subset(clique, h.k() - 1, |s| {
        if ok {
            ok = h.contains(&Edge::new(s.iter().copied().chain([w])));
        }
    });
    ok
}

pub(crate) fn shuffled<T: Clone>(items: &[T], rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut out = items.to_vec();
    out.shuffle(rng);
    out
}

pub(crate) fn k_subsets(vertices: &[Vertex], k: usize) -> Vec<Edge> {
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for_each_subset(&sorted, k, |s| out.push(Edge::from_sorted(s)));
    out
}
