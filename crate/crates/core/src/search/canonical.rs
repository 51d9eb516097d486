//! Orderly generation of 2-colourings of `K_n^(k)` up to vertex
//! permutation.
//!
//! A colouring is a bit mask over the lexicographically ordered edges (bit
//! set = red). Masks are compared by their code, reading edge 0 as the most
//! significant position; a mask is canonical when no vertex permutation
//! maps it to a larger code. Dropping the last set bit of a canonical mask
//! leaves a canonical mask, so the canonical masks form a tree rooted at
//! the empty mask and can be enumerated without duplicates.

use rayon::prelude::*;

use crate::combinatorics::{binom, factorial, for_each_subset, permutations};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Edge, Hypergraph, Vertex};

pub type Mask = u128;

/// Largest vertex count for which all permutations are materialised.
pub const MAX_PERMUTATION_VERTICES: usize = 9;

/// True iff `a` has a larger code than `b`.
pub fn code_greater(a: Mask, b: Mask) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) != 0
}

#[derive(Debug, Clone)]
pub struct EdgeSymmetry {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
    /// `images[p][i]` is the index of the image of edge `i` under permutation `p`.
    images: Vec<Vec<u8>>,
}

impl EdgeSymmetry {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::InvalidUniformity { k, n });
        }
        let count = binom(n, k);
        if count > Mask::BITS as u128 {
            return Err(Error::EnumerationCap(format!("{count} edges exceed {} mask bits", Mask::BITS)));
        }
        if n > MAX_PERMUTATION_VERTICES {
            return Err(Error::EnumerationCap(format!("{n} vertices exceed the permutation table limit")));
        }
        let h = Hypergraph::complete(k, n)?;
        let edges = h.edges().to_vec();
        let images = permutations(n)
            .into_iter()
            .map(|p| {
                edges
                    .iter()
                    .map(|e| {
                        let image = Edge::new(e.vertices().iter().map(|&v| p[v as usize] as Vertex));
                        h.edge_id(&image).expect("permutations preserve K_n") as u8
                    })
                    .collect()
            })
            .collect();
        Ok(EdgeSymmetry { n, k, edges, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn apply(&self, p: &[u8], mask: Mask) -> Mask {
        let mut out = 0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= 1 << p[i];
            rest &= rest - 1;
        }
        out
    }

    pub fn is_canonical(&self, mask: Mask) -> bool {
        self.images.iter().all(|p| !code_greater(self.apply(p, mask), mask))
    }

    /// The orbit representative of `mask`.
    pub fn canonical_form(&self, mask: Mask) -> Mask {
        self.images
            .iter()
            .map(|p| self.apply(p, mask))
            .fold(mask, |best, m| if code_greater(m, best) { m } else { best })
    }

    pub fn coloring(&self, mask: Mask) -> ColoredHypergraph {
        let base = Hypergraph::complete(self.k, self.n).expect("validated in new");
        let colors = (0..self.edges.len())
            .map(|i| if mask >> i & 1 == 1 { Color::Red } else { Color::Blue })
            .collect();
        ColoredHypergraph::new(base, colors).expect("aligned")
    }

    fn descend(&self, mask: Mask, next: usize, out: &mut Vec<Mask>) {
        out.push(mask);
        for j in next..self.edges.len() {
            let child = mask | 1 << j;
            if self.is_canonical(child) {
                self.descend(child, j + 1, out);
            }
        }
    }

    /// Every canonical mask, in depth-first order of the generation tree.
    /// With `parallel`, subtrees below the second level run on the rayon
    /// pool; the output order does not change.
    pub fn canonical_masks(&self, parallel: bool) -> Vec<Mask> {
        if !parallel {
            let mut out = Vec::new();
            self.descend(0, 0, &mut out);
            return out;
        }
        // depth-first skeleton down to `SPLIT` set bits; deeper subtrees are tasks
        const SPLIT: u32 = 2;
        let mut skeleton: Vec<(Mask, usize, bool)> = Vec::new();
        let mut stack = vec![(0 as Mask, 0usize)];
        while let Some((mask, next)) = stack.pop() {
            if mask.count_ones() == SPLIT {
                skeleton.push((mask, next, true));
                continue;
            }
            skeleton.push((mask, next, false));
            for j in (next..self.edges.len()).rev() {
                let child = mask | 1 << j;
                if self.is_canonical(child) {
                    stack.push((child, j + 1));
                }
            }
        }
        let parts: Vec<Vec<Mask>> = skeleton
            .par_iter()
            .map(|&(mask, next, task)| {
                let mut sub = Vec::new();
                if task {
                    self.descend(mask, next, &mut sub);
                } else {
                    sub.push(mask);
                }
                sub
            })
            .collect();
        let mut out = Vec::new();
        for part in parts {
            out.extend(part);
        }
        out
    }
}

/// Number of orbits by Burnside's lemma: the average of `2^(edge cycles)`.
pub fn burnside_orbit_count(n: usize, k: usize) -> Result<u128> {
    let sym = EdgeSymmetry::new(n, k)?;
    let mut total: u128 = 0;
    for p in &sym.images {
        let mut seen = vec![false; p.len()];
        let mut cycles = 0;
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = p[i] as usize;
            }
        }
        total += 1u128 << cycles;
    }
    Ok(total / factorial(n) as u128)
}

/// Edges of `K_n^(k)` in mask bit order.
pub fn edge_list(n: usize, k: usize) -> Vec<Edge> {
    let vertices: Vec<Vertex> = (0..n as Vertex).collect();
    let mut out = Vec::new();
    for_each_subset(&vertices, k, |s| out.push(Edge::from_sorted(s)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn code_order() {
        assert!(code_greater(0b01, 0b10));
        assert!(!code_greater(0b10, 0b01));
        assert!(!code_greater(0b11, 0b11));
        assert!(code_greater(0b11, 0b01));
    }

    #[test]
    fn orbit_counts_match_burnside_and_naive_enumeration() {
        for (n, k, expected) in [(4, 3, 5u128), (5, 3, 34), (4, 2, 11), (5, 2, 34)] {
            let sym = EdgeSymmetry::new(n, k).unwrap();
            let canon = sym.canonical_masks(false);
            assert_eq!(canon.len() as u128, expected, "n={n} k={k}");
            assert_eq!(burnside_orbit_count(n, k).unwrap(), expected);
            let naive: HashSet<Mask> = (0..1u128 << sym.edge_count()).map(|m| sym.canonical_form(m)).collect();
            assert_eq!(naive.len() as u128, expected);
            assert!(canon.iter().all(|m| naive.contains(m)));
            assert_eq!(sym.canonical_masks(true), canon);
        }
    }

    #[test]
    fn mask_colourings() {
        let sym = EdgeSymmetry::new(4, 3).unwrap();
        let g = sym.coloring(0b0101);
        assert_eq!(g.count(Color::Red), 2);
        assert_eq!(g.color(0), Color::Red);
        assert_eq!(g.color(1), Color::Blue);
        assert_eq!(edge_list(4, 3), g.base().edges());
    }
}
