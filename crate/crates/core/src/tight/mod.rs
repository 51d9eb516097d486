//! Tight adjacency, pseudo-walks, tight components and monochromatic
//! tight cycle/path search.

mod components;
mod cycle;
mod structure;
mod union_find;
mod walk;

pub use crate::hypergraph::edge_adjacent;
pub use components::{
    components_of_ids, mono_components, tight_components, Component, ComponentId,
    ComponentIndex, ComponentTag, MonoComponents,
};
pub use cycle::{
    find_tight_cycle, find_tight_path, validate_witness, ColorFilter, SearchOptions,
    SearchOutcome, Shape, Witness, DEFAULT_NODE_BUDGET,
};
pub use structure::{
    check_structure_lemma, check_structure_lemma_with, sample_structure_case, StructureCase, Verdict,
};
pub use union_find::UnionFind;
pub use walk::{find_walk, find_walk_in, induced_walk, vertex_sequence_windows, PseudoWalk};

