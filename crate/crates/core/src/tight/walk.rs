use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{edge_adjacent, Edge, Hypergraph, Vertex};

/// A nonempty edge sequence in which consecutive edges share at least
/// `k - 1` vertices. Repeated edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PseudoWalk {
    edges: Vec<Edge>,
}

impl PseudoWalk {
    /// Validates membership in `host` and consecutive adjacency.
    pub fn new(host: &Hypergraph, edges: Vec<Edge>) -> Result<Self> {
        let walk = PseudoWalk { edges };
        walk.validate(host)?;
        Ok(walk)
    }

    pub(crate) fn from_edges_unchecked(edges: Vec<Edge>) -> Self {
        debug_assert!(!edges.is_empty());
        PseudoWalk { edges }
    }

    pub fn single(e: Edge) -> Self {
        PseudoWalk { edges: vec![e] }
    }

    pub fn validate(&self, host: &Hypergraph) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::InvalidParameter("empty pseudo-walk".into()));
        }
        for e in &self.edges {
            host.require_edge(e)?;
        }
        for w in self.edges.windows(2) {
            if !edge_adjacent(&w[0], &w[1]) {
                return Err(Error::NotAdjacent(w[0].to_vec(), w[1].to_vec()));
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first(&self) -> &Edge {
        &self.edges[0]
    }

    pub fn last(&self) -> &Edge {
        &self.edges[self.edges.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        edge_adjacent(self.first(), self.last())
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges.iter().flat_map(|e| e.vertices().iter().copied()).collect()
    }

    /// `self` followed by `other`; the junction must be tight.
    pub fn concat(&self, other: &PseudoWalk) -> Result<PseudoWalk> {
        if !edge_adjacent(self.last(), other.first()) {
            return Err(Error::NotAdjacent(self.last().to_vec(), other.first().to_vec()));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().cloned());
        Ok(PseudoWalk { edges })
    }

    pub fn reversed(&self) -> PseudoWalk {
        PseudoWalk {
            edges: self.edges.iter().rev().cloned().collect(),
        }
    }

    /// The walk restricted to positions `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> PseudoWalk {
        PseudoWalk::from_edges_unchecked(self.edges[range].to_vec())
    }
}

/// Windows of `k` consecutive entries of `vs`, each of which must consist
/// of distinct vertices. No host check.
pub fn vertex_sequence_windows(k: usize, vs: &[Vertex]) -> Result<Vec<Edge>> {
    if k == 0 || vs.len() < k {
        return Err(Error::InvalidParameter(format!(
            "vertex sequence of length {} is shorter than k = {k}",
            vs.len()
        )));
    }
    let mut edges = Vec::with_capacity(vs.len() - k + 1);
    for (position, window) in vs.windows(k).enumerate() {
        let e = Edge::new(window.iter().copied());
        if !e.has_distinct_vertices() {
            return Err(Error::RepeatedVertexInWindow { position });
        }
        edges.push(e);
    }
    Ok(edges)
}

/// The pseudo-walk induced by a vertex sequence: `e_i = {vs_i, .., vs_{i+k-1}}`.
pub fn induced_walk(host: &Hypergraph, vs: &[Vertex]) -> Result<PseudoWalk> {
    let edges = vertex_sequence_windows(host.k(), vs)?;
    if let Some(e) = edges.iter().find(|e| !host.contains(e)) {
        return Err(Error::NotAnEdge(e.to_vec()));
    }
    Ok(PseudoWalk { edges })
}

/// Ids of host edges sharing `k - 1` vertices with edge `id` (excluding it),
/// generated by swapping one vertex at a time.
pub(crate) fn for_each_neighbour(h: &Hypergraph, id: usize, mut f: impl FnMut(usize)) {
    let e = h.edge(id);
    for &out in e.vertices() {
        let rest = e.without(out);
        for v in 0..h.n() as Vertex {
            if e.contains(v) {
                continue;
            }
            if let Some(other) = h.edge_id(&rest.with(v)) {
                f(other);
            }
        }
    }
}

/// Shortest pseudo-walk between two edge ids using only edges accepted by
/// `allowed`, via bidirectional breadth-first search.
pub fn find_walk_in(
    h: &Hypergraph,
    allowed: impl Fn(usize) -> bool,
    from: usize,
    to: usize,
) -> Option<PseudoWalk> {
    if !allowed(from) || !allowed(to) {
        return None;
    }
    if from == to {
        return Some(PseudoWalk::single(h.edge(from).clone()));
    }
    // node -> (parent, distance from its side's root)
    let mut seen: [HashMap<usize, (usize, usize)>; 2] = [HashMap::new(), HashMap::new()];
    seen[0].insert(from, (from, 0));
    seen[1].insert(to, (to, 0));
    let mut frontier = [vec![from], vec![to]];
    loop {
        if frontier[0].is_empty() || frontier[1].is_empty() {
            return None;
        }
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let (mine, other) = if side == 0 {
            let (a, b) = seen.split_at_mut(1);
            (&mut a[0], &b[0])
        } else {
            let (a, b) = seen.split_at_mut(1);
            (&mut b[0], &a[0])
        };
        let mut next = Vec::new();
        let mut meet: Option<(usize, usize)> = None;
        for &x in &frontier[side] {
            let dx = mine[&x].1;
            for_each_neighbour(h, x, |y| {
                if !allowed(y) || mine.contains_key(&y) {
                    return;
                }
                mine.insert(y, (x, dx + 1));
                if let Some(&(_, dy)) = other.get(&y) {
                    let cost = dx + 1 + dy;
                    if meet.is_none_or(|(_, c)| cost < c) {
                        meet = Some((y, cost));
                    }
                }
                next.push(y);
            });
        }
        if let Some((y, _)) = meet {
            let trace = |map: &HashMap<usize, (usize, usize)>| {
                let mut path = vec![y];
                let mut cur = y;
                while map[&cur].0 != cur {
                    cur = map[&cur].0;
                    path.push(cur);
                }
                path
            };
            let mut head = trace(&seen[0]);
            head.reverse();
            let tail = trace(&seen[1]);
            head.extend(tail.into_iter().skip(1));
            let edges = head.into_iter().map(|i| h.edge(i).clone()).collect();
            return Some(PseudoWalk { edges });
        }
        frontier[side] = next;
    }
}

/// Shortest pseudo-walk from `e` to `f` in `h`, or `None` when they lie in
/// different tight components.
pub fn find_walk(h: &Hypergraph, e: &Edge, f: &Edge) -> Result<Option<PseudoWalk>> {
    let from = h.require_edge(e)?;
    let to = h.require_edge(f)?;
    Ok(find_walk_in(h, |_| true, from, to))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_walks() {
        let k5 = Hypergraph::complete(3, 5).unwrap();
        let w = induced_walk(&k5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(
            w.edges(),
            &[Edge::from([0, 1, 2]), Edge::from([1, 2, 3]), Edge::from([2, 3, 4])]
        );
        assert_eq!(induced_walk(&k5, &[4, 0, 2]).unwrap().len(), 1);
        assert_eq!(
            induced_walk(&k5, &[0, 1, 0, 2]).unwrap_err().code(),
            "repeated-vertex-in-window"
        );
        let path = Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert_eq!(induced_walk(&path, &[0, 1, 2, 3]).unwrap_err().code(), "window-not-an-edge");
    }

    #[test]
    fn shortest_walks() {
        let k5 = Hypergraph::complete(3, 5).unwrap();
        let e = Edge::from([0, 1, 2]);
        assert_eq!(find_walk(&k5, &e, &e).unwrap().unwrap().len(), 1);
        let w = find_walk(&k5, &e, &Edge::from([2, 3, 4])).unwrap().unwrap();
        assert_eq!(w.len(), 3);
        w.validate(&k5).unwrap();
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(find_walk(&two, &e, &Edge::from([3, 4, 5])).unwrap().is_none());
        assert!(find_walk(&two, &e, &Edge::from([1, 4, 5])).is_err());
    }

    #[test]
    fn concatenation_requires_a_tight_junction() {
        let a = PseudoWalk::single(Edge::from([0, 1, 2]));
        let b = PseudoWalk::single(Edge::from([1, 2, 3]));
        let c = PseudoWalk::single(Edge::from([3, 4, 5]));
        assert_eq!(a.concat(&b).unwrap().len(), 2);
        assert!(a.concat(&c).is_err());
        assert!(a.concat(&b).unwrap().is_closed());
    }
}
