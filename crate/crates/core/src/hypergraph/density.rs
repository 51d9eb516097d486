//! The `(μ, α)`-density census.
//!
//! For every level `i` in `1..k`, every i-set `S` must either have degree 0
//! or degree at least `μ` times the largest degree an i-set can have,
//! `C(n - i, k - i)`; at most `α·C(n, i)` sets may have degree 0.

use std::collections::HashMap;

use num::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Hypergraph, Vertex};
use crate::combinatorics::{binom, for_each_subset, Subset};
use crate::rational::{int, ser_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCensus {
    pub level: usize,
    /// i-sets with `0 < d(S) < μ·C(n-i, k-i)`.
    pub violators: u128,
    /// i-sets with `d(S) = 0`.
    pub zeros: u128,
    #[serde(serialize_with = "ser_rational")]
    pub degree_threshold: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub zero_allowance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(serialize_with = "ser_rational")]
    pub mu: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub per_level: Vec<LevelCensus>,
    pub passes: bool,
}

/// Exact census of nonzero degrees per level, keyed by the i-set.
fn degree_counts(h: &Hypergraph, level: usize) -> HashMap<Subset<Vertex>, u64> {
    let mut counts: HashMap<Subset<Vertex>, u64> = HashMap::new();
    for e in h.edges() {
        for_each_subset(e.vertices(), level, |s| {
            *counts.entry(Subset::from_slice(s)).or_default() += 1;
        });
    }
    counts
}

pub fn is_dense(h: &Hypergraph, mu: &Rational, alpha: &Rational) -> DensityReport {
    let (n, k) = (h.n(), h.k());
    let mut per_level = Vec::with_capacity(k.saturating_sub(1));
    for level in 1..k {
        let counts = degree_counts(h, level);
        let degree_threshold = mu * int(binom(n.saturating_sub(level), k - level));
        let zero_allowance = alpha * int(binom(n, level));
        let violators = counts
            .values()
            .filter(|&&d| int(d as u128) < degree_threshold)
            .count() as u128;
        let zeros = binom(n, level) - counts.len() as u128;
        per_level.push(LevelCensus {
            level,
            violators,
            zeros,
            degree_threshold,
            zero_allowance,
        });
    }
    let passes = per_level
        .iter()
        .all(|c| c.violators == 0 && int(c.zeros) <= c.zero_allowance);
    DensityReport {
        mu: mu.clone(),
        alpha: alpha.clone(),
        per_level,
        passes,
    }
}

impl DensityReport {
    /// Largest zero-count ratio `zeros_i / C(n, i)` over the levels, as f64.
    pub fn worst_zero_fraction(&self, n: usize) -> f64 {
        self.per_level
            .iter()
            .map(|c| {
                let total = binom(n, c.level);
                if total.is_zero() {
                    0.0
                } else {
                    c.zeros.to_f64().unwrap_or(0.0) / total as f64
                }
            })
            .fold(0.0, f64::max)
    }
}
