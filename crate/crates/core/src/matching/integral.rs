use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lp::max_fractional_value;
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::rational::Rational;

/// Pairwise vertex-disjoint k-sets, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    k: usize,
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(k: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.len() != k {
                return Err(Error::InvalidMatching(format!("edge {e:?} is not a {k}-set")));
            }
            for &v in e.vertices() {
                if !seen.insert(v) {
                    return Err(Error::InvalidMatching(format!("vertex {v} covered twice")));
                }
            }
        }
        Ok(Matching { k, edges })
    }

    pub fn k(&self) -> usize {
        self.k
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

    pub fn covered(&self) -> BTreeSet<Vertex> {
        self.edges.iter().flat_map(|e| e.vertices().iter().copied()).collect()
    }

    pub fn validate_in(&self, h: &Hypergraph) -> Result<()> {
        match self.edges.iter().find(|e| !h.contains(e)) {
            Some(e) => Err(Error::EdgeNotInHost(e.to_vec())),
            None => Ok(()),
        }
    }
}

/// Inclusion-maximal matching built by scanning `within` (or all edges) in a
/// seeded random order.
pub fn maximal_matching_greedy(h: &Hypergraph, within: Option<&[usize]>, seed: u64) -> Matching {
    let mut order: Vec<usize> = match within {
        Some(ids) => ids.to_vec(),
        None => (0..h.len()).collect(),
    };
    order.sort_unstable();
    order.dedup();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut used = vec![false; h.n()];
    let mut edges = Vec::new();
    for id in order {
        let e = h.edge(id);
        if e.vertices().iter().all(|&v| !used[v as usize]) {
            e.vertices().iter().for_each(|&v| used[v as usize] = true);
            edges.push(e.clone());
        }
    }
    Matching::new(h.k(), edges).expect("greedy output is a matching")
}

pub const DEFAULT_MATCHING_EDGE_CAP: usize = 4096;

struct BranchAndBound<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
    ceiling: usize,
    nodes: u64,
    budget: u64,
}

impl BranchAndBound<'_> {
    fn free_edge(&self, id: usize) -> bool {
        self.h.edge(id).vertices().iter().all(|&v| !self.used[v as usize])
    }

    /// Vertices at or after `from` that are free and still lie in a free edge.
    fn live_vertices(&self, from: usize) -> usize {
        (from..self.h.n())
            .filter(|&v| !self.used[v] && self.incidence[v].iter().any(|&id| self.free_edge(id)))
            .count()
    }

    fn search(&mut self, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() >= self.ceiling {
            return Ok(());
        }
        let bound = self.current.len() + self.live_vertices(from) / self.h.k();
        if bound <= self.best.len() {
            return Ok(());
        }
        let Some(v) = (from..self.h.n())
            .find(|&v| !self.used[v] && self.incidence[v].iter().any(|&id| self.free_edge(id)))
        else {
            return Ok(());
        };
        // v is covered by one of its free edges ...
        let choices: Vec<usize> = self.incidence[v]
            .iter()
            .copied()
            .filter(|&id| self.free_edge(id))
            .collect();
        for id in choices {
            let e = self.h.edge(id).clone();
            e.vertices().iter().for_each(|&u| self.used[u as usize] = true);
            self.current.push(id);
            self.search(v + 1)?;
            self.current.pop();
            e.vertices().iter().for_each(|&u| self.used[u as usize] = false);
        }
        // ... or stays uncovered
        self.used[v] = true;
        let r = self.search(v + 1);
        self.used[v] = false;
        r
    }
}

/// Maximum-cardinality matching by branch and bound, seeded with a greedy
/// lower bound and capped above by the fractional LP optimum.
pub fn maximum_matching(h: &Hypergraph, edge_cap: usize, node_budget: u64) -> Result<Matching> {
    if h.len() > edge_cap {
        return Err(Error::EdgeCapExceeded {
            edges: h.len() as u128,
            cap: edge_cap,
        });
    }
    let greedy = maximal_matching_greedy(h, None, 0);
    let lp: Rational = max_fractional_value(h)?;
    let ceiling = lp.floor().to_integer().try_into().unwrap_or(usize::MAX);
    let mut bb = BranchAndBound {
        h,
        incidence: h.incidence(),
        used: vec![false; h.n()],
        current: Vec::new(),
        best: greedy.edges().iter().map(|e| h.edge_id(e).expect("host edge")).collect(),
        ceiling,
        nodes: 0,
        budget: node_budget,
    };
    bb.search(0)?;
    Matching::new(h.k(), bb.best.iter().map(|&id| h.edge(id).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_sizes() {
        let k9 = Hypergraph::complete(3, 9).unwrap();
        for seed in 0..5 {
            assert_eq!(maximal_matching_greedy(&k9, None, seed).len(), 3);
        }
        let single = Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert_eq!(maximal_matching_greedy(&single, None, 1).len(), 1);
        let star = Hypergraph::new(3, 7, [[0, 1, 2], [0, 1, 3], [0, 1, 4], [0, 1, 5]]).unwrap();
        assert_eq!(maximal_matching_greedy(&star, None, 9).len(), 1);
        let within = [0usize, 1];
        assert_eq!(maximal_matching_greedy(&star, Some(&within), 9).len(), 1);
    }

    #[test]
    fn maximum_on_cliques() {
        let m6 = maximum_matching(&Hypergraph::complete(3, 6).unwrap(), 4096, 1 << 20).unwrap();
        assert_eq!(m6.len(), 2);
        let m7 = maximum_matching(&Hypergraph::complete(3, 7).unwrap(), 4096, 1 << 20).unwrap();
        assert_eq!(m7.len(), 2);
    }

    #[test]
    fn invalid_matchings() {
        assert!(Matching::new(3, vec![Edge::from([0, 1, 2]), Edge::from([2, 3, 4])]).is_err());
        assert!(Matching::new(3, vec![Edge::from([0, 1])]).is_err());
    }
}
