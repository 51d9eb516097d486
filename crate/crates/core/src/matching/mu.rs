//! Exact minimum over 2-colourings of `K_n^(k)` of the largest fractional
//! matching confined to one monochromatic tight component, or to one red
//! and one blue component.

use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::fractional::FractionalMatching;
use super::lp::{max_fractional_confined, DEFAULT_LP_CAP};
use crate::combinatorics::{binom, factorial};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph};
use crate::rational::{int, ser_rational, Rational};
use crate::search::{code_greater, EdgeSymmetry, Mask};
use crate::tight::{mono_components, ComponentId, MonoComponents};

/// Default ceiling on `C(n, k)` for the enumeration.
pub const DEFAULT_MU_EDGE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuMode {
    /// One monochromatic tight component.
    Single,
    /// One red and one blue tight component.
    RedBlue,
}

#[derive(Debug, Clone, Copy)]
pub struct MuOptions {
    pub edge_cap: usize,
    pub parallel: bool,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions {
            edge_cap: DEFAULT_MU_EDGE_CAP,
            parallel: false,
        }
    }
}

/// Best confined fractional matching of one colouring.
#[derive(Debug, Clone)]
pub struct ColoringScore {
    pub value: Rational,
    pub components: Vec<ComponentId>,
    pub matching: FractionalMatching,
    /// The unrestricted LP optimum had a positive weight below `β`.
    pub floor_binds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuResult {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// `value / n`.
    #[serde(serialize_with = "ser_rational")]
    pub normalized: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    pub n: usize,
    pub k: usize,
    pub mode: MuMode,
    /// Canonical colouring attaining the minimum, least in code order.
    pub arg_min: ColoredHypergraph,
    #[serde(skip)]
    pub arg_min_mask: Mask,
    pub arg_min_components: Vec<ComponentId>,
    #[serde(serialize_with = "ser_matching")]
    pub arg_min_matching: FractionalMatching,
    pub colorings: usize,
    /// Colourings whose LP optimum violated the `β` floor and were re-solved
    /// on the edges meeting it.
    pub floor_binds: usize,
    /// Only complete colourings were enumerated.
    pub complete_only: bool,
}

fn ser_matching<S: serde::Serializer>(m: &FractionalMatching, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_json().serialize(s)
}

/// Confined LP optimum with the `β` floor: while some positive weight is
/// below `β`, those edges are dropped from the support and the LP re-solved.
/// The result is always feasible for the floor; it is optimal whenever the
/// first solve already respects it.
pub fn confined_with_floor(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    components: &[ComponentId],
    beta: &Rational,
) -> Result<(FractionalMatching, bool)> {
    let mut phi = max_fractional_confined(g, comps, components, DEFAULT_LP_CAP)?;
    let mut binds = false;
    let mut support: Vec<usize> = components.iter().flat_map(|&c| comps.edges(c).iter().copied()).collect();
    while phi.min_positive_weight().is_some_and(|w| w < beta) {
        binds = true;
        support.retain(|&id| {
            let w = phi.get(g.base().edge(id));
            w.is_zero() || &w >= beta
        });
        phi = super::lp::max_fractional_on(g.base(), &support, DEFAULT_LP_CAP)?;
    }
    Ok((phi, binds))
}

fn component_choices(comps: &MonoComponents, mode: MuMode) -> Vec<Vec<ComponentId>> {
    let red: Vec<ComponentId> = (0..comps.red.len()).map(|index| ComponentId { color: Color::Red, index }).collect();
    let blue: Vec<ComponentId> = (0..comps.blue.len()).map(|index| ComponentId { color: Color::Blue, index }).collect();
    match mode {
        MuMode::Single => red.iter().chain(&blue).map(|&c| vec![c]).collect(),
        MuMode::RedBlue => {
            let mut out = Vec::new();
            for r in red.iter().map(Some).chain([None]) {
                for b in blue.iter().map(Some).chain([None]) {
                    let choice: Vec<ComponentId> = r.into_iter().chain(b).copied().collect();
                    if !choice.is_empty() {
                        out.push(choice);
                    }
                }
            }
            out
        }
    }
}

/// The largest floor-respecting confined weight of one colouring.
pub fn score_coloring(g: &ColoredHypergraph, beta: &Rational, mode: MuMode) -> Result<ColoringScore> {
    let comps = mono_components(g);
    let mut best: Option<ColoringScore> = None;
    for choice in component_choices(&comps, mode) {
        let (matching, floor_binds) = confined_with_floor(g, &comps, &choice, beta)?;
        let value = matching.weight();
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(ColoringScore {
                value,
                components: choice,
                matching,
                floor_binds,
            });
        }
    }
    Ok(best.unwrap_or_else(|| ColoringScore {
        value: Rational::zero(),
        components: Vec::new(),
        matching: FractionalMatching::zero(g.k(), (0..g.n() as u32).collect()),
        floor_binds: false,
    }))
}

pub fn mu_exact(k: usize, n: usize, beta: &Rational, mode: MuMode, opts: MuOptions) -> Result<MuResult> {
    if k < 2 || n < k {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    let floor_cap = Rational::one() / int(factorial(k) as u128);
    if beta <= &Rational::zero() || beta > &floor_cap {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1/{}]", factorial(k))));
    }
    let edges = binom(n, k);
    if edges > opts.edge_cap as u128 {
        return Err(Error::EnumerationCap(format!(
            "C({n}, {k}) = {edges} exceeds the edge cap {}",
            opts.edge_cap
        )));
    }
    let sym = EdgeSymmetry::new(n, k)?;
    let masks = sym.canonical_masks(opts.parallel);
    let score = |&mask: &Mask| -> Result<(Mask, ColoringScore)> {
        Ok((mask, score_coloring(&sym.coloring(mask), beta, mode)?))
    };
    let scored: Vec<(Mask, ColoringScore)> = if opts.parallel {
        masks.par_iter().map(score).collect::<Result<_>>()?
    } else {
        masks.iter().map(score).collect::<Result<_>>()?
    };
    let floor_binds = scored.iter().filter(|(_, s)| s.floor_binds).count();
    let (mask, best) = scored
        .into_iter()
        .reduce(|a, b| {
            if b.1.value < a.1.value || (b.1.value == a.1.value && code_greater(a.0, b.0)) {
                b
            } else {
                a
            }
        })
        .expect("at least one colouring");
    Ok(MuResult {
        normalized: &best.value / int(n as u128),
        value: best.value,
        beta: beta.clone(),
        n,
        k,
        mode,
        arg_min: sym.coloring(mask),
        arg_min_mask: mask,
        arg_min_components: best.components,
        arg_min_matching: best.matching,
        colorings: masks.len(),
        floor_binds,
        complete_only: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::rational::ratio;

    #[test]
    fn four_vertex_triples() {
        let r = mu_exact(3, 4, &ratio(1, 6), MuMode::Single, MuOptions::default()).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.colorings, 5);
        assert_eq!(r.floor_binds, 0);
        // one red edge: both classes have fractional weight 1
        assert_eq!(r.arg_min.count(Color::Red), 1);
        let rb = mu_exact(3, 4, &ratio(1, 6), MuMode::RedBlue, MuOptions::default()).unwrap();
        assert!(rb.value >= r.value);
    }

    #[test]
    fn all_red_contributes_n_over_k() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 6).unwrap(), Color::Red);
        let s = score_coloring(&g, &ratio(1, 6), MuMode::Single).unwrap();
        assert_eq!(s.value, ratio(2, 1));
    }

    #[test]
    fn guards() {
        let opts = MuOptions::default();
        assert_eq!(mu_exact(3, 7, &ratio(1, 6), MuMode::Single, opts).unwrap_err().code(), "enumeration-cap");
        assert!(mu_exact(3, 4, &ratio(1, 2), MuMode::Single, opts).is_err());
        assert!(mu_exact(3, 2, &ratio(1, 6), MuMode::Single, opts).is_err());
    }

    #[test]
    fn parallel_agrees() {
        let opts = MuOptions { parallel: true, ..MuOptions::default() };
        for mode in [MuMode::Single, MuMode::RedBlue] {
            let a = mu_exact(3, 5, &ratio(1, 6), mode, MuOptions::default()).unwrap();
            let b = mu_exact(3, 5, &ratio(1, 6), mode, opts).unwrap();
            assert_eq!((a.value, a.arg_min_mask), (b.value, b.arg_min_mask));
        }
    }
}
