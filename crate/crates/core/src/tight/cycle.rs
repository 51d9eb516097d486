//! Exhaustive backtracking for monochromatic tight cycles and paths.
//!
//! Cycles are enumerated with their smallest vertex first and oriented so
//! that the second vertex is smaller than the last; paths are oriented so
//! that the first vertex is smaller than the last. Every window of `k`
//! consecutive vertices is checked as soon as it is complete.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Edge, Vertex};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorFilter {
    Red,
    Blue,
    Any,
}

impl ColorFilter {
    fn colors(self) -> &'static [Color] {
        match self {
            ColorFilter::Red => &[Color::Red],
            ColorFilter::Blue => &[Color::Blue],
            ColorFilter::Any => &[Color::Red, Color::Blue],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_nodes: u64,
    /// Explore second-vertex branches on the rayon pool. Each branch then
    /// gets the full node budget; the first witness in canonical order wins.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_nodes: DEFAULT_NODE_BUDGET,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub color: Color,
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { witness: Witness, nodes: u64 },
    Absent { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::Absent { nodes }
            | SearchOutcome::BudgetExhausted { nodes } => *nodes,
        }
    }
}

struct ClassSet {
    k: usize,
    edges: HashSet<Edge>,
}

impl ClassSet {
    fn new(g: &ColoredHypergraph, color: Color) -> Self {
        ClassSet {
            k: g.k(),
            edges: g.ids_of(color).map(|i| g.base().edge(i).clone()).collect(),
        }
    }

    fn has(&self, window: &[Vertex]) -> bool {
        self.edges.contains(&Edge::new(window.iter().copied()))
    }
}

/// Marker for an exhausted node budget.
struct OutOfBudget;

struct Searcher<'a> {
    class: &'a ClassSet,
    n: usize,
    len: usize,
    shape: Shape,
    budget: u64,
    nodes: u64,
    seq: Vec<Vertex>,
    used: Vec<bool>,
    window: Vec<Vertex>,
}

impl<'a> Searcher<'a> {
    fn new(class: &'a ClassSet, n: usize, len: usize, shape: Shape, budget: u64) -> Self {
        Searcher {
            class,
            n,
            len,
            shape,
            budget,
            nodes: 0,
            seq: Vec::with_capacity(len),
            used: vec![false; n],
            window: Vec::with_capacity(class.k),
        }
    }

    fn window_ok(&mut self, end: usize) -> bool {
        let k = self.class.k;
        self.window.clear();
        for j in 0..k {
            self.window.push(self.seq[(end + self.len + 1 - k + j) % self.len]);
        }
        self.class.has(&self.window)
    }

    fn push(&mut self, v: Vertex) -> bool {
        self.seq.push(v);
        self.used[v as usize] = true;
        let end = self.seq.len() - 1;
        end + 1 < self.class.k || self.window_ok(end)
    }

    fn pop(&mut self) {
        let v = self.seq.pop().expect("nonempty");
        self.used[v as usize] = false;
    }

    fn closing_ok(&mut self) -> bool {
        match self.shape {
            Shape::Path => self.seq[0] < self.seq[self.len - 1],
            Shape::Cycle => {
                if self.len > 2 && self.seq[1] > self.seq[self.len - 1] {
                    return false;
                }
                // wrap-around windows end at positions 0 .. k-2
                (0..self.class.k - 1).all(|end| self.window_ok(end))
            }
        }
    }

    /// Depth-first extension; `Some(true)` on a witness.
    fn extend(&mut self) -> std::result::Result<bool, OutOfBudget> {
        if self.seq.len() == self.len {
            return Ok(self.closing_ok());
        }
        let first = self.seq[0];
        for v in 0..self.n as Vertex {
            if self.used[v as usize] || (self.shape == Shape::Cycle && v < first) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OutOfBudget);
            }
            if self.push(v) {
                match self.extend() {
                    Ok(true) => return Ok(true),
                    Ok(false) => {}
                    Err(step) => return Err(step),
                }
            }
            self.pop();
        }
        Ok(false)
    }

    /// Searches every sequence starting with `prefix`.
    fn run(&mut self, prefix: &[Vertex]) -> std::result::Result<bool, OutOfBudget> {
        for &v in prefix {
            self.nodes += 1;
            if !self.push(v) {
                return Ok(false);
            }
        }
        self.extend()
    }
}

fn prefixes(n: usize, shape: Shape) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for a in 0..n as Vertex {
        for b in 0..n as Vertex {
            if a != b && (shape == Shape::Path || b > a) {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

/// One parallel branch: its witness (or `Err` when out of budget) and node count.
type Branch = (std::result::Result<Option<Vec<Vertex>>, ()>, u64);

fn search_color(
    g: &ColoredHypergraph,
    color: Color,
    len: usize,
    shape: Shape,
    opts: SearchOptions,
) -> SearchOutcome {
    let class = ClassSet::new(g, color);
    let n = g.n();
    if class.edges.is_empty() {
        return SearchOutcome::Absent { nodes: 0 };
    }
    if !opts.parallel {
        let mut s = Searcher::new(&class, n, len, shape, opts.max_nodes);
        let mut total = 0u64;
        for prefix in prefixes(n, shape) {
            s.budget = opts.max_nodes.saturating_sub(total);
            s.nodes = 0;
            s.seq.clear();
            s.used.iter_mut().for_each(|u| *u = false);
            let result = s.run(&prefix);
            total += s.nodes;
            match result {
                Ok(true) => {
                    return SearchOutcome::Found {
                        witness: Witness {
                            color,
                            vertices: s.seq.clone(),
                        },
                        nodes: total,
                    }
                }
                Ok(false) => {}
                Err(_) => return SearchOutcome::BudgetExhausted { nodes: total },
            }
        }
        return SearchOutcome::Absent { nodes: total };
    }

    let results: Vec<Branch> = prefixes(n, shape)
        .par_iter()
        .map(|prefix| {
            let mut s = Searcher::new(&class, n, len, shape, opts.max_nodes);
            let r = match s.run(prefix) {
                Ok(true) => Ok(Some(s.seq.clone())),
                Ok(false) => Ok(None),
                Err(_) => Err(()),
            };
            (r, s.nodes)
        })
        .collect();
    let nodes = results.iter().map(|(_, c)| c).sum();
    for (r, _) in &results {
        match r {
            Ok(Some(seq)) => {
                return SearchOutcome::Found {
                    witness: Witness {
                        color,
                        vertices: seq.clone(),
                    },
                    nodes,
                }
            }
            Ok(None) => {}
            Err(()) => return SearchOutcome::BudgetExhausted { nodes },
        }
    }
    SearchOutcome::Absent { nodes }
}

fn search(
    g: &ColoredHypergraph,
    len: usize,
    filter: ColorFilter,
    shape: Shape,
    opts: SearchOptions,
) -> Result<SearchOutcome> {
    let k = g.k();
    if len < k {
        return Err(Error::InvalidParameter(format!("length {len} is below k = {k}")));
    }
    if len > g.n() {
        return Ok(SearchOutcome::Absent { nodes: 0 });
    }
    let mut nodes = 0;
    let mut exhausted = false;
    for &color in filter.colors() {
        let budget = SearchOptions {
            max_nodes: opts.max_nodes.saturating_sub(nodes),
            ..opts
        };
        match search_color(g, color, len, shape, budget) {
            SearchOutcome::Found { witness, nodes: c } => {
                return Ok(SearchOutcome::Found {
                    witness,
                    nodes: nodes + c,
                })
            }
            SearchOutcome::Absent { nodes: c } => nodes += c,
            SearchOutcome::BudgetExhausted { nodes: c } => {
                nodes += c;
                exhausted = true;
            }
        }
    }
    Ok(if exhausted {
        SearchOutcome::BudgetExhausted { nodes }
    } else {
        SearchOutcome::Absent { nodes }
    })
}

/// A cyclic ordering of `len` vertices whose every cyclic window of `k`
/// consecutive vertices is an edge of one colour admitted by `filter`.
pub fn find_tight_cycle(
    g: &ColoredHypergraph,
    len: usize,
    filter: ColorFilter,
    opts: SearchOptions,
) -> Result<SearchOutcome> {
    search(g, len, filter, Shape::Cycle, opts)
}

/// The linear analogue of [`find_tight_cycle`].
pub fn find_tight_path(
    g: &ColoredHypergraph,
    len: usize,
    filter: ColorFilter,
    opts: SearchOptions,
) -> Result<SearchOutcome> {
    search(g, len, filter, Shape::Path, opts)
}

/// Rechecks a witness: distinct vertices and every window an edge of its colour.
pub fn validate_witness(g: &ColoredHypergraph, w: &Witness, shape: Shape) -> bool {
    let k = g.k();
    let len = w.vertices.len();
    let distinct: HashSet<_> = w.vertices.iter().collect();
    if distinct.len() != len || len < k {
        return false;
    }
    let windows = match shape {
        Shape::Cycle => len,
        Shape::Path => len - k + 1,
    };
    (0..windows).all(|s| {
        let e = Edge::new((0..k).map(|j| w.vertices[(s + j) % len]));
        g.color_of(&e) == Some(w.color)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn all_red(n: usize) -> ColoredHypergraph {
        ColoredHypergraph::monochromatic(Hypergraph::complete(3, n).unwrap(), Color::Red)
    }

    #[test]
    fn complete_graph_hits_and_misses() {
        let g = all_red(6);
        let hit = find_tight_cycle(&g, 6, ColorFilter::Red, SearchOptions::default()).unwrap();
        let w = hit.witness().unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2, 3, 4, 5]);
        assert!(validate_witness(&g, w, Shape::Cycle));
        let miss = find_tight_cycle(&g, 6, ColorFilter::Blue, SearchOptions::default()).unwrap();
        assert!(matches!(miss, SearchOutcome::Absent { .. }));
        let path = find_tight_path(&g, 5, ColorFilter::Any, SearchOptions::default()).unwrap();
        assert!(validate_witness(&g, path.witness().unwrap(), Shape::Path));
        assert!(find_tight_cycle(&g, 2, ColorFilter::Red, SearchOptions::default()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_distinct_from_absence() {
        let g = ColoredHypergraph::from_rule(Hypergraph::complete(3, 9).unwrap(), |e| {
            if e.contains(0) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let opts = SearchOptions {
            max_nodes: 5,
            parallel: false,
        };
        let r = find_tight_cycle(&g, 9, ColorFilter::Red, opts).unwrap();
        assert!(matches!(r, SearchOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn parallel_search_returns_the_sequential_witness() {
        let g = crate::hypergraph::random_colored_complete(3, 8, &crate::rational::ratio(1, 2), 11)
            .unwrap();
        for len in 3..=8 {
            for filter in [ColorFilter::Red, ColorFilter::Blue] {
                let seq = find_tight_cycle(&g, len, filter, SearchOptions::default()).unwrap();
                let par = find_tight_cycle(
                    &g,
                    len,
                    filter,
                    SearchOptions {
                        parallel: true,
                        ..SearchOptions::default()
                    },
                )
                .unwrap();
                assert_eq!(seq.witness(), par.witness());
            }
        }
    }
}
