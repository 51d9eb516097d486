use std::collections::HashMap;

use serde::Serialize;

use super::union_find::UnionFind;
use crate::combinatorics::{for_each_subset, Subset};
use crate::hypergraph::{Color, ColoredHypergraph, Hypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentTag {
    Red,
    Blue,
    Uncoloured,
}

impl From<Color> for ComponentTag {
    fn from(c: Color) -> Self {
        match c {
            Color::Red => ComponentTag::Red,
            Color::Blue => ComponentTag::Blue,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub tag: ComponentTag,
    /// Host edge ids, ascending.
    pub edges: Vec<usize>,
}

/// Partition of a set of host edges into tight components. Edge ids refer
/// to the host graph; edges outside the indexed set map to `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentIndex {
    component_of: Vec<Option<usize>>,
    components: Vec<Component>,
}

impl ComponentIndex {
    pub fn component_of(&self, edge_id: usize) -> Option<usize> {
        self.component_of.get(edge_id).copied().flatten()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &Component {
        &self.components[index]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        matches!((self.component_of(a), self.component_of(b)), (Some(x), Some(y)) if x == y)
    }

    /// Index of a largest component; ties go to the smaller index.
    pub fn largest(&self) -> Option<usize> {
        self.components
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.edges.len().cmp(&b.1.edges.len()).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.edges.len()).collect()
    }

    /// Builds the index from a per-edge label, renumbering labels by their
    /// smallest edge id.
    pub(crate) fn from_labels(labels: impl IntoIterator<Item = Option<usize>>, tag: ComponentTag) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut components: Vec<Component> = Vec::new();
        let component_of = labels
            .into_iter()
            .enumerate()
            .map(|(id, label)| {
                label.map(|l| {
                    let next = components.len();
                    let c = *renumber.entry(l).or_insert(next);
                    if c == next {
                        components.push(Component { tag, edges: Vec::new() });
                    }
                    components[c].edges.push(id);
                    c
                })
            })
            .collect();
        ComponentIndex {
            component_of,
            components,
        }
    }
}

/// Packs a sorted vertex list into one integer when it fits (at most six
/// vertices below 2^21), which keeps the bucket sort cheap.
fn pack(vertices: &[Vertex]) -> Option<u128> {
    if vertices.len() > 6 || vertices.iter().any(|&v| v >= 1 << 21) {
        return None;
    }
    Some(
        vertices
            .iter()
            .enumerate()
            .fold(0u128, |acc, (j, &v)| acc | (v as u128) << (21 * j)),
    )
}

/// Union-find over `(k-1)`-subset buckets restricted to the edge ids `ids`.
pub fn components_of_ids(
    h: &Hypergraph,
    ids: impl IntoIterator<Item = usize>,
    tag: ComponentTag,
) -> ComponentIndex {
    let ids: Vec<usize> = ids.into_iter().collect();
    let k = h.k();
    let mut uf = UnionFind::new(ids.len());
    let packable = h.n() < 1 << 21 && k - 1 <= 6;
    if packable {
        let mut keys: Vec<(u128, u32)> = Vec::with_capacity(ids.len() * k);
        for (local, &id) in ids.iter().enumerate() {
            for_each_subset(h.edge(id).vertices(), k - 1, |s| {
                keys.push((pack(s).expect("packable"), local as u32));
            });
        }
        keys.sort_unstable();
        for w in keys.windows(2) {
            if w[0].0 == w[1].0 {
                uf.union(w[0].1 as usize, w[1].1 as usize);
            }
        }
    } else {
        let mut first: HashMap<Subset<Vertex>, usize> = HashMap::new();
        for (local, &id) in ids.iter().enumerate() {
            for_each_subset(h.edge(id).vertices(), k - 1, |s| {
                let rep = *first.entry(Subset::from_slice(s)).or_insert(local);
                uf.union(rep, local);
            });
        }
    }

    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_unstable_by_key(|&i| ids[i]);
    let mut component_of = vec![None; h.len()];
    let mut root_index: HashMap<usize, usize> = HashMap::new();
    let mut components: Vec<Component> = Vec::new();
    for local in order {
        let root = uf.find(local);
        let next = components.len();
        let c = *root_index.entry(root).or_insert(next);
        if c == components.len() {
            components.push(Component {
                tag,
                edges: Vec::new(),
            });
        }
        components[c].edges.push(ids[local]);
        component_of[ids[local]] = Some(c);
    }
    ComponentIndex {
        component_of,
        components,
    }
}

/// Tight components of the whole graph, ordered by their smallest edge id.
pub fn tight_components(h: &Hypergraph) -> ComponentIndex {
    components_of_ids(h, 0..h.len(), ComponentTag::Uncoloured)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ComponentId {
    pub color: Color,
    pub index: usize,
}

/// Red and blue tight components of a coloured graph, both indexed by the
/// base graph's edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoComponents {
    pub red: ComponentIndex,
    pub blue: ComponentIndex,
}

impl MonoComponents {
    pub fn of(&self, color: Color) -> &ComponentIndex {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    /// The monochromatic component containing a base edge.
    pub fn id_of(&self, g: &ColoredHypergraph, edge_id: usize) -> ComponentId {
        let color = g.color(edge_id);
        ComponentId {
            color,
            index: self.of(color).component_of(edge_id).expect("every edge is indexed"),
        }
    }

    pub fn edges(&self, id: ComponentId) -> &[usize] {
        &self.of(id.color).component(id.index).edges
    }

    pub fn contains(&self, id: ComponentId, edge_id: usize) -> bool {
        self.of(id.color).component_of(edge_id) == Some(id.index)
    }

    pub fn all_ids(&self) -> Vec<ComponentId> {
        let red = (0..self.red.len()).map(|index| ComponentId {
            color: Color::Red,
            index,
        });
        let blue = (0..self.blue.len()).map(|index| ComponentId {
            color: Color::Blue,
            index,
        });
        red.chain(blue).collect()
    }
}

pub fn mono_components(g: &ColoredHypergraph) -> MonoComponents {
    MonoComponents {
        red: components_of_ids(g.base(), g.ids_of(Color::Red), ComponentTag::Red),
        blue: components_of_ids(g.base(), g.ids_of(Color::Blue), ComponentTag::Blue),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graphs_are_tightly_connected() {
        for n in 4..=8 {
            for k in 2..n {
                assert_eq!(tight_components(&Hypergraph::complete(k, n).unwrap()).len(), 1);
            }
        }
    }

    #[test]
    fn small_fixtures() {
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(tight_components(&two).len(), 2);
        let c5 = Hypergraph::new(3, 5, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [3, 4, 0], [4, 0, 1]])
            .unwrap();
        assert_eq!(tight_components(&c5).len(), 1);
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 6).unwrap(), Color::Red);
        let mc = mono_components(&g);
        assert_eq!((mc.red.len(), mc.blue.len()), (1, 0));
        let single = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 3).unwrap(), Color::Red);
        let mc = mono_components(&single);
        assert_eq!((mc.red.len(), mc.blue.len()), (1, 0));
    }

    #[test]
    fn unpackable_graphs_use_the_hash_path() {
        let h = Hypergraph::new(8, 9, [[0, 1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 5, 6, 7, 8]]).unwrap();
        assert_eq!(tight_components(&h).len(), 1);
        let h = Hypergraph::new(8, 16, [[0, 1, 2, 3, 4, 5, 6, 7], [1, 2, 3, 4, 5, 6, 8, 9]]).unwrap();
        assert_eq!(tight_components(&h).len(), 2);
    }
}
