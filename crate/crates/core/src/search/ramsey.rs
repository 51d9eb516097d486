//! Exact small Ramsey numbers of tight paths and cycles by exhaustive
//! canonical enumeration of colourings of `K_N^(k)` for increasing `N`.

use rayon::prelude::*;
use serde::Serialize;

use super::canonical::EdgeSymmetry;
use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Hypergraph};
use crate::tight::{
    find_tight_cycle, find_tight_path, ColorFilter, SearchOptions, SearchOutcome, Shape,
};

/// Default ceiling on `C(N, k)` for the enumeration.
pub const DEFAULT_RAMSEY_EDGE_CAP: usize = 20;

/// Looks for a monochromatic tight cycle or path on `m` vertices.
pub fn contains_mono_copy(
    g: &ColoredHypergraph,
    shape: Shape,
    m: usize,
    opts: SearchOptions,
) -> Result<SearchOutcome> {
    match shape {
        Shape::Cycle => find_tight_cycle(g, m, ColorFilter::Any, opts),
        Shape::Path => find_tight_path(g, m, ColorFilter::Any, opts),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RamseyOptions {
    pub edge_cap: usize,
    pub search: SearchOptions,
    pub parallel: bool,
}

impl Default for RamseyOptions {
    fn default() -> Self {
        RamseyOptions {
            edge_cap: DEFAULT_RAMSEY_EDGE_CAP,
            search: SearchOptions::default(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub vertices: usize,
    pub canonical_colorings: usize,
    pub avoiding_found: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamseyResult {
    pub pattern: Shape,
    pub k: usize,
    pub m: usize,
    /// The Ramsey number when the search resolved it.
    pub value: Option<usize>,
    /// `[lo, hi]`: the value is at least `lo`; `hi` is known only when resolved.
    pub bounds: (usize, Option<usize>),
    /// A colouring on `lo - 1` vertices without a monochromatic copy.
    pub witness_below: ColoredHypergraph,
    pub examined: u64,
    pub method: &'static str,
    pub levels: Vec<LevelReport>,
    /// Why the search stopped short, if it did.
    pub stopped: Option<String>,
}

fn trivial_witness(k: usize, n: usize) -> Result<ColoredHypergraph> {
    let base = if n < k {
        Hypergraph::empty(k, n)?
    } else {
        Hypergraph::complete(k, n)?
    };
    Ok(ColoredHypergraph::monochromatic(base, Color::Red))
}

/// First canonical colouring (in generation order) with no monochromatic
/// copy; `Err` on an exhausted copy search.
fn first_avoiding(
    sym: &EdgeSymmetry,
    masks: &[u128],
    shape: Shape,
    m: usize,
    opts: &RamseyOptions,
) -> Result<Option<ColoredHypergraph>> {
    let check = |&mask: &u128| -> Result<Option<ColoredHypergraph>> {
        let g = sym.coloring(mask);
        match contains_mono_copy(&g, shape, m, opts.search)? {
            SearchOutcome::Found { .. } => Ok(None),
            SearchOutcome::Absent { .. } => Ok(Some(g)),
            SearchOutcome::BudgetExhausted { nodes } => Err(Error::BudgetExhausted(nodes)),
        }
    };
    if opts.parallel {
        let results: Vec<Result<Option<ColoredHypergraph>>> = masks.par_iter().map(check).collect();
        for r in results {
            if let Some(g) = r? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    } else {
        for mask in masks {
            if let Some(g) = check(mask)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

pub fn ramsey_search(
    shape: Shape,
    k: usize,
    m: usize,
    n_max: usize,
    opts: RamseyOptions,
) -> Result<RamseyResult> {
    if k < 2 || m < k {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= m, got k={k}, m={m}")));
    }
    let mut witness = trivial_witness(k, m - 1)?;
    let mut lo = m;
    let mut examined = 0u64;
    let mut levels = Vec::new();
    let mut value = None;
    let mut stopped = None;
    for big_n in m.max(k)..=n_max {
        let edges = binom(big_n, k);
        if edges > opts.edge_cap as u128 {
            stopped = Some(format!("C({big_n}, {k}) = {edges} exceeds the edge cap {}", opts.edge_cap));
            break;
        }
        let sym = match EdgeSymmetry::new(big_n, k) {
            Ok(sym) => sym,
            Err(e) => {
                stopped = Some(e.to_string());
                break;
            }
        };
        let masks = sym.canonical_masks(opts.parallel);
        examined += masks.len() as u64;
        let avoiding = match first_avoiding(&sym, &masks, shape, m, &opts) {
            Ok(a) => a,
            Err(Error::BudgetExhausted(nodes)) => {
                stopped = Some(format!("copy search exhausted its budget ({nodes} nodes) at N = {big_n}"));
                break;
            }
            Err(e) => return Err(e),
        };
        levels.push(LevelReport {
            vertices: big_n,
            canonical_colorings: masks.len(),
            avoiding_found: avoiding.is_some(),
        });
        match avoiding {
            Some(g) => {
                witness = g;
                lo = big_n + 1;
            }
            None => {
                value = Some(big_n);
                break;
            }
        }
    }
    if value.is_none() && stopped.is_none() {
        stopped = Some(format!("reached N_max = {n_max}"));
    }
    if witness.n() >= m {
        let recheck = contains_mono_copy(&witness, shape, m, opts.search)?;
        if !matches!(recheck, SearchOutcome::Absent { .. }) {
            return Err(Error::InternalConsistency("extremal witness contains a copy".into()));
        }
    }
    Ok(RamseyResult {
        pattern: shape,
        k,
        m,
        value,
        bounds: (lo, value),
        witness_below: witness,
        examined,
        method: "exhaustive+canonical",
        levels,
        stopped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_path() {
        let r = ramsey_search(Shape::Path, 3, 3, 6, RamseyOptions::default()).unwrap();
        assert_eq!(r.value, Some(3));
        assert_eq!(r.witness_below.n(), 2);
    }

    #[test]
    fn four_vertex_path() {
        let r = ramsey_search(Shape::Path, 3, 4, 6, RamseyOptions::default()).unwrap();
        assert_eq!(r.value, Some(4));
        assert_eq!(r.bounds, (4, Some(4)));
        assert_eq!(r.witness_below.n(), 3);
        assert_eq!(r.levels.last().unwrap().canonical_colorings, 5);
    }
}
