//! The starting point of the enlargement: a large tight component and a
//! maximal matching inside the largest monochromatic one.

use num::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binom, binom_real};
use crate::error::{Error, Result};
use crate::hypergraph::{is_dense, Color, ColoredHypergraph, Hypergraph};
use crate::matching::{maximal_matching_greedy, Matching};
use crate::rational::{int, ser_rational, Rational};
use crate::tight::{mono_components, tight_components, ComponentId, MonoComponents};

#[derive(Debug, Clone, Serialize)]
pub struct LargeComponent {
    pub index: usize,
    pub size: usize,
    /// `(α/5)^k · C(n, k)`.
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub bound_ok: bool,
}

/// `(α/5)^k · C(n, k)`.
pub fn large_component_bound(alpha: &Rational, n: usize, k: usize) -> Rational {
    let base = alpha / int(5);
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= &base;
    }
    acc * int(binom(n, k))
}

/// The largest tight component of `h`, with the check
/// `|T| >= (α/5)^k · C(n, k)`. Requires `|H| >= α · C(n, k)`.
pub fn large_tight_component(h: &Hypergraph, alpha: &Rational) -> Result<LargeComponent> {
    if *alpha <= Rational::zero() || *alpha > Rational::one() {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1]".into()));
    }
    let total = int(binom(h.n(), h.k()));
    if int(h.len() as u128) < alpha * &total {
        return Err(Error::DensityPrecondition(format!(
            "{} edges, fewer than alpha·C(n, k)",
            h.len()
        )));
    }
    let comps = tight_components(h);
    let index = comps.largest().expect("a graph with edges has a component");
    let size = comps.component(index).edges.len();
    let bound = large_component_bound(alpha, h.n(), h.k());
    Ok(LargeComponent {
        index,
        size,
        bound_ok: int(size as u128) >= bound,
        bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KkReport {
    /// Real `x >= k - 1` with `C(x, k) = |H|`, to within `2^-40`.
    pub x: f64,
    pub lhs: usize,
    pub shadow: usize,
    /// `C(x, k - 1)`.
    pub rhs: f64,
    pub rhs_ok: bool,
}

/// Shadow lower bound in Lovász's form: `|H| = C(x, k)` implies
/// `|∂H| >= C(x, k-1)`. The empty graph passes vacuously.
pub fn kk_bound_check(h: &Hypergraph) -> KkReport {
    let k = h.k();
    let target = h.len() as f64;
    let mut lo = (k - 1) as f64;
    let mut hi = (k as f64).max(lo + 1.0);
    while binom_real(hi, k) < target {
        hi *= 2.0;
    }
    while hi - lo > 1.0 / (1u64 << 40) as f64 {
        let mid = (lo + hi) / 2.0;
        if binom_real(mid, k) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let shadow = h.shadow().len();
    let rhs = binom_real(lo, k - 1);
    let slack = 1e-6 * rhs.max(1.0);
    KkReport {
        x: lo,
        lhs: h.len(),
        shadow,
        rhs,
        rhs_ok: h.is_empty() || shadow as f64 >= rhs - slack,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InitialMatching {
    pub matching: Matching,
    pub component: ComponentId,
    pub component_size: usize,
    /// Component size against `(α/5)^k C(n, k)` with `α` the measured
    /// density of the majority colour.
    pub bound_ok: bool,
    /// `|M| >= n / (k² 15^k)`, or `|M| >= 1` when that bound is below one.
    pub guarantee_met: bool,
}

/// Majority colour, its largest tight component and a seeded greedy
/// maximal matching inside it. `G` must be `(1-ε, ε)`-dense.
pub fn initial_component_matching(
    g: &ColoredHypergraph,
    eps: &Rational,
    seed: u64,
) -> Result<InitialMatching> {
    let report = is_dense(g.base(), &(Rational::one() - eps), eps);
    if !report.passes {
        return Err(Error::DensityPrecondition(format!(
            "graph is not ({}, {})-dense",
            Rational::one() - eps,
            eps
        )));
    }
    initial_in(g, &mono_components(g), seed)
}

pub(crate) fn initial_in(g: &ColoredHypergraph, comps: &MonoComponents, seed: u64) -> Result<InitialMatching> {
    let color = if g.count(Color::Red) >= g.count(Color::Blue) {
        Color::Red
    } else {
        Color::Blue
    };
    let index = comps
        .of(color)
        .largest()
        .ok_or_else(|| Error::DensityPrecondition("graph has no edges".into()))?;
    let component = ComponentId { color, index };
    let ids = comps.edges(component);
    let matching = maximal_matching_greedy(g.base(), Some(ids), seed);
    let (n, k) = (g.n(), g.k());
    let alpha = int(g.count(color) as u128) / int(binom(n, k));
    let bound_ok = int(ids.len() as u128) >= large_component_bound(&alpha, n, k);
    let target = int(n as u128) / (int((k * k) as u128) * int(15u128.pow(k as u32)));
    let guarantee_met = if target < Rational::one() {
        !matching.is_empty()
    } else {
        int(matching.len() as u128) >= target
    };
    Ok(InitialMatching {
        matching,
        component,
        component_size: ids.len(),
        bound_ok,
        guarantee_met,
    })
}
