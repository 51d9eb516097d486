//! k-uniform hypergraphs over the dense vertex set `{0, .., n-1}`.
//!
//! Edges are kept sorted and deduplicated; the edge list itself is sorted
//! lexicographically so that edge ids are stable across runs. A hash index
//! gives constant-time membership tests.

mod color;
mod density;
mod generate;
mod json;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::combinatorics::{binom, for_each_subset};
use crate::error::{Error, Result};

pub use color::{Color, ColoredHypergraph};
pub use density::{is_dense, DensityReport, LevelCensus};
pub use generate::{random_colored_complete, random_dense, random_hypergraph};
pub use json::{
    parse_colored, parse_document, parse_hypergraph, serialize_colored, serialize_hypergraph,
    GraphDocument,
};

pub type Vertex = u32;

/// Default ceiling on materialised edge sets.
pub const DEFAULT_EDGE_CAP: usize = 1 << 22;

/// A set of vertices kept in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(SmallVec<[Vertex; 6]>);

impl Edge {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: SmallVec<[Vertex; 6]> = vertices.into_iter().collect();
        v.sort_unstable();
        Edge(v)
    }

    /// Caller guarantees `vertices` is strictly increasing.
    pub fn from_sorted(vertices: &[Vertex]) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(SmallVec::from_slice(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn has_distinct_vertices(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn intersection_len(&self, other: &Edge) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn is_subset_of(&self, other: &Edge) -> bool {
        self.intersection_len(other) == self.len()
    }

    pub fn intersection(&self, other: &Edge) -> Vec<Vertex> {
        self.0.iter().copied().filter(|v| other.contains(*v)).collect()
    }

    pub fn difference(&self, other: &Edge) -> Vec<Vertex> {
        self.0.iter().copied().filter(|v| !other.contains(*v)).collect()
    }

    pub fn without(&self, v: Vertex) -> Edge {
        Edge(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    pub fn with(&self, v: Vertex) -> Edge {
        Edge::new(self.0.iter().copied().chain(std::iter::once(v)))
    }

    pub fn union(&self, other: &Edge) -> Edge {
        let set: BTreeSet<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        Edge(set.into_iter().collect())
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.0.to_vec()
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<&[Vertex]> for Edge {
    fn from(v: &[Vertex]) -> Self {
        Edge::new(v.iter().copied())
    }
}

impl<const N: usize> From<[Vertex; N]> for Edge {
    fn from(v: [Vertex; N]) -> Self {
        Edge::new(v)
    }
}

/// True iff the two k-sets share at least `k - 1` vertices.
pub fn edge_adjacent(e: &Edge, f: &Edge) -> bool {
    e.intersection_len(f) + 1 >= e.len()
}

#[derive(Clone)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Result of [`Hypergraph::induced`]: the reindexed subgraph together with
/// the map from new vertex ids to the original ones.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Hypergraph,
    pub original: Vec<Vertex>,
}

impl Hypergraph {
    /// Validating constructor; vertex lists may be given in any order.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if k < 2 {
            return Err(Error::InvalidUniformity { k, n });
        }
        let mut list = Vec::new();
        for raw in edges {
            list.push(Self::check_edge(k, n, raw.as_ref())?);
        }
        if list.len() > DEFAULT_EDGE_CAP {
            return Err(Error::EdgeCapExceeded {
                edges: list.len() as u128,
                cap: DEFAULT_EDGE_CAP,
            });
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].to_vec()));
        }
        Ok(Self::from_sorted_unique(k, n, list))
    }

    pub(crate) fn check_edge(k: usize, n: usize, raw: &[Vertex]) -> Result<Edge> {
        if raw.len() != k {
            return Err(Error::BadArity {
                edge: raw.to_vec(),
                found: raw.len(),
                expected: k,
            });
        }
        if let Some(&v) = raw.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let edge = Edge::new(raw.iter().copied());
        if !edge.has_distinct_vertices() {
            return Err(Error::RepeatedVertexInEdge(raw.to_vec()));
        }
        Ok(edge)
    }

    /// Builds from edges that are already valid k-sets; sorts and dedups.
    pub(crate) fn from_edges_unchecked(k: usize, n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unique(k, n, edges)
    }

    fn from_sorted_unique(k: usize, n: usize, edges: Vec<Edge>) -> Self {
        let index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Hypergraph { k, n, edges, index }
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidUniformity { k, n });
        }
        Ok(Self::from_sorted_unique(k, n, Vec::new()))
    }

    /// The complete k-graph on `n` vertices.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::InvalidUniformity { k, n });
        }
        let count = binom(n, k);
        if count > DEFAULT_EDGE_CAP as u128 {
            return Err(Error::EdgeCapExceeded {
                edges: count,
                cap: DEFAULT_EDGE_CAP,
            });
        }
        let vertices: Vec<Vertex> = (0..n as Vertex).collect();
        let mut edges = Vec::with_capacity(count as usize);
        for_each_subset(&vertices, k, |s| edges.push(Edge::from_sorted(s)));
        Ok(Self::from_sorted_unique(k, n, edges))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_id(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.index.contains_key(e)
    }

    /// Membership test for an unsorted vertex list.
    pub fn contains_vertices(&self, vertices: &[Vertex]) -> bool {
        self.index.contains_key(&Edge::new(vertices.iter().copied()))
    }

    pub fn require_edge(&self, e: &Edge) -> Result<usize> {
        self.edge_id(e).ok_or_else(|| Error::EdgeNotInHost(e.to_vec()))
    }

    /// True iff every k-subset of `vertices` is an edge.
    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut ok = true;
        for_each_subset(&sorted, self.k, |s| {
            if ok && !self.index.contains_key(&Edge::from_sorted(s)) {
                ok = false;
            }
        });
        ok
    }

    /// Per-vertex list of incident edge ids.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            for &v in e.vertices() {
                inc[v as usize].push(id);
            }
        }
        inc
    }

    fn check_subset(&self, s: &[Vertex]) -> Result<Edge> {
        if s.is_empty() || s.len() >= self.k {
            return Err(Error::SubsetSize {
                size: s.len(),
                max: self.k - 1,
            });
        }
        if let Some(&v) = s.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let set = Edge::new(s.iter().copied());
        if !set.has_distinct_vertices() {
            return Err(Error::RepeatedVertexInEdge(s.to_vec()));
        }
        Ok(set)
    }

    /// All `(k - |S|)`-sets `S'` with `S ∪ S'` an edge.
    pub fn neighborhood(&self, s: &[Vertex]) -> Result<BTreeSet<Edge>> {
        let set = self.check_subset(s)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| set.is_subset_of(e))
            .map(|e| Edge::new(e.difference(&set)))
            .collect())
    }

    pub fn degree(&self, s: &[Vertex]) -> Result<usize> {
        let set = self.check_subset(s)?;
        Ok(self.edges.iter().filter(|e| set.is_subset_of(e)).count())
    }

    /// The (k-1)-graph of all (k-1)-sets covered by some edge.
    pub fn shadow(&self) -> Hypergraph {
        let mut faces = Vec::with_capacity(self.edges.len() * self.k);
        for e in &self.edges {
            for_each_subset(e.vertices(), self.k - 1, |s| faces.push(Edge::from_sorted(s)));
        }
        Self::from_edges_unchecked(self.k - 1, self.n, faces)
    }

    /// `H[W]`, reindexed so that the i-th smallest vertex of `W` becomes `i`.
    pub fn induced(&self, w: &[Vertex]) -> Result<Induced> {
        if let Some(&v) = w.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let original: Vec<Vertex> = w.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut new_of_old = vec![None; self.n];
        for (i, &v) in original.iter().enumerate() {
            new_of_old[v as usize] = Some(i as Vertex);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                e.vertices()
                    .iter()
                    .map(|&v| new_of_old[v as usize])
                    .collect::<Option<SmallVec<[Vertex; 6]>>>()
                    .map(Edge)
            })
            .collect();
        Ok(Induced {
            graph: Self::from_edges_unchecked(self.k, original.len(), edges),
            original,
        })
    }

    /// Subgraph on the same vertex set keeping the listed edge ids.
    pub fn edge_subgraph(&self, ids: impl IntoIterator<Item = usize>) -> Hypergraph {
        let edges = ids.into_iter().map(|i| self.edges[i].clone()).collect();
        Self::from_edges_unchecked(self.k, self.n, edges)
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.k == other.k && self.n <= other.n && self.edges.iter().all(|e| other.contains(e))
    }
}
