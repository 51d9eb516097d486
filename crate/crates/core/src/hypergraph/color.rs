use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Edge, Hypergraph, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Color::Red => "R",
            Color::Blue => "B",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Color> {
        match s {
            "R" => Ok(Color::Red),
            "B" => Ok(Color::Blue),
            other => Err(Error::BadColor(other.to_string())),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// A hypergraph with a total red/blue assignment, aligned with edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    base: Hypergraph,
    colors: Vec<Color>,
}

impl ColoredHypergraph {
    pub fn new(base: Hypergraph, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != base.len() {
            return Err(Error::MissingColors {
                found: colors.len(),
                expected: base.len(),
            });
        }
        Ok(ColoredHypergraph { base, colors })
    }

    pub fn monochromatic(base: Hypergraph, color: Color) -> Self {
        let colors = vec![color; base.len()];
        ColoredHypergraph { base, colors }
    }

    /// Colours every edge by a rule on its vertex set.
    pub fn from_rule(base: Hypergraph, rule: impl Fn(&Edge) -> Color) -> Self {
        let colors = base.edges().iter().map(rule).collect();
        ColoredHypergraph { base, colors }
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, id: usize) -> Color {
        self.colors[id]
    }

    pub fn color_of(&self, e: &Edge) -> Option<Color> {
        self.base.edge_id(e).map(|id| self.colors[id])
    }

    pub fn ids_of(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == color)
            .map(|(i, _)| i)
    }

    pub fn count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// `H^red` or `H^blue` on the full vertex set.
    pub fn class(&self, color: Color) -> Hypergraph {
        self.base.edge_subgraph(self.ids_of(color))
    }

    /// True iff every k-subset of `vertices` is an edge of colour `color`.
    pub fn is_mono_clique(&self, vertices: &[Vertex], color: Color) -> bool {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut ok = true;
        crate::combinatorics::for_each_subset(&sorted, self.k(), |s| {
            if ok && self.color_of(&Edge::from_sorted(s)) != Some(color) {
                ok = false;
            }
        });
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_partition_the_base() {
        let base = Hypergraph::complete(3, 6).unwrap();
        let g = ColoredHypergraph::from_rule(base.clone(), |e| {
            if e.contains(0) {
                Color::Blue
            } else {
                Color::Red
            }
        });
        let red = g.class(Color::Red);
        let blue = g.class(Color::Blue);
        assert_eq!(red.len() + blue.len(), base.len());
        assert!(red.edges().iter().all(|e| !blue.contains(e)));
        assert_eq!(blue.len(), 10);
        assert!(g.is_mono_clique(&[1, 2, 3, 4], Color::Red));
        assert!(!g.is_mono_clique(&[0, 2, 3, 4], Color::Red));
    }

    #[test]
    fn colour_length_mismatch() {
        let base = Hypergraph::complete(3, 4).unwrap();
        let err = ColoredHypergraph::new(base, vec![Color::Red]).unwrap_err();
        assert_eq!(err.code(), "missing-colors");
    }
}
