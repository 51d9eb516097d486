//! r-blow-ups of coloured k-graphs: every base vertex `x` becomes the part
//! `V_x = {x·r, .., x·r + r - 1}` and every base edge the complete k-partite
//! k-graph on its parts, with the colour inherited.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    is_dense, Color, ColoredHypergraph, DensityReport, Edge, GraphDocument, Hypergraph, Vertex,
    DEFAULT_EDGE_CAP,
};
use crate::matching::FractionalMatching;
use crate::rational::{int, Rational};
use crate::tight::{mono_components, ComponentId, ComponentIndex, MonoComponents};

#[derive(Debug, Clone)]
pub struct Blowup {
    base: ColoredHypergraph,
    r: usize,
    blown: ColoredHypergraph,
}

/// Serialized form: the blown graph is rebuilt from the base.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupDocument {
    pub base: GraphDocument,
    pub r: usize,
}

/// Calls `f` with every transversal of the parts of `e`.
fn for_each_transversal(e: &Edge, r: usize, mut f: impl FnMut(Edge)) {
    let k = e.len();
    let mut offsets = vec![0usize; k];
    loop {
        f(Edge::from_sorted(
            &e.vertices()
                .iter()
                .zip(&offsets)
                .map(|(&x, &j)| x * r as Vertex + j as Vertex)
                .collect::<Vec<_>>(),
        ));
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            offsets[pos] += 1;
            if offsets[pos] < r {
                break;
            }
            offsets[pos] = 0;
        }
    }
}

impl Blowup {
    pub fn build(g: &ColoredHypergraph, r: usize) -> Result<Self> {
        Self::build_capped(g, r, DEFAULT_EDGE_CAP)
    }

    /// Fails unless `r^k·|E| <= cap`.
    pub fn build_capped(g: &ColoredHypergraph, r: usize, cap: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter("blow-up factor r must be at least 1".into()));
        }
        let edges = blown_edge_count(g.base().len(), g.k(), r);
        if edges > cap as u128 {
            return Err(Error::EdgeCapExceeded { edges, cap });
        }
        let n = g.n() * r;
        if n > Vertex::MAX as usize {
            return Err(Error::InvalidParameter(format!("{n} blown vertices do not fit")));
        }
        let mut pairs: Vec<(Edge, Color)> = Vec::with_capacity(edges as usize);
        for (id, e) in g.base().edges().iter().enumerate() {
            let c = g.color(id);
            for_each_transversal(e, r, |t| pairs.push((t, c)));
        }
        pairs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let (list, colors): (Vec<Edge>, Vec<Color>) = pairs.into_iter().unzip();
        let blown = ColoredHypergraph::new(Hypergraph::from_edges_unchecked(g.k(), n, list), colors)?;
        Ok(Blowup {
            base: g.clone(),
            r,
            blown,
        })
    }

    pub fn from_document(doc: &BlowupDocument) -> Result<Self> {
        Self::build(&doc.base.to_colored()?, doc.r)
    }

    pub fn document(&self) -> BlowupDocument {
        BlowupDocument {
            base: GraphDocument::from_colored(&self.base),
            r: self.r,
        }
    }

    pub fn base(&self) -> &ColoredHypergraph {
        &self.base
    }

    pub fn blown(&self) -> &ColoredHypergraph {
        &self.blown
    }

    pub fn into_blown(self) -> ColoredHypergraph {
        self.blown
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn part(&self, x: Vertex) -> std::ops::Range<Vertex> {
        let r = self.r as Vertex;
        x * r..x * r + r
    }

    pub fn project_vertex(&self, v: Vertex) -> Vertex {
        v / self.r as Vertex
    }

    /// `π(e)`; `None` if `e` meets some part twice.
    pub fn project(&self, e: &Edge) -> Option<Edge> {
        let image = Edge::new(e.vertices().iter().map(|&v| self.project_vertex(v)));
        image.has_distinct_vertices().then_some(image)
    }

    pub fn project_id(&self, blown_id: usize) -> usize {
        let image = self
            .project(self.blown.base().edge(blown_id))
            .expect("blown edges are transversals");
        self.base.base().edge_id(&image).expect("blown edges project into the base")
    }

    /// `π^{-1}(e)`.
    pub fn preimage(&self, e: &Edge) -> Vec<Edge> {
        let mut out = Vec::new();
        for_each_transversal(e, self.r, |t| out.push(t));
        out
    }

    /// Re-checks the defining properties edge by edge.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InternalConsistency(m));
        let expected = blown_edge_count(self.base.base().len(), self.base.k(), self.r);
        if self.blown.base().len() as u128 != expected {
            return fail(format!("{} blown edges, expected {expected}", self.blown.base().len()));
        }
        if self.blown.n() != self.base.n() * self.r {
            return fail("blown vertex count".into());
        }
        for (id, e) in self.blown.base().edges().iter().enumerate() {
            let Some(image) = self.project(e) else {
                return fail(format!("{e:?} is not a transversal"));
            };
            if self.base.color_of(&image) != Some(self.blown.color(id)) {
                return fail(format!("{e:?} does not inherit the colour of {image:?}"));
            }
        }
        Ok(())
    }
}

pub fn blown_edge_count(edges: usize, k: usize, r: usize) -> u128 {
    (r as u128).checked_pow(k as u32).map_or(u128::MAX, |p| p.saturating_mul(edges as u128))
}

/// The component map `T ↦ {π(e) : e ∈ T}` from blown to base
/// monochromatic tight components, checked to be a colour-preserving
/// bijection.
pub fn project_component(b: &Blowup) -> Result<BTreeMap<ComponentId, ComponentId>> {
    let blown_comps = mono_components(b.blown());
    let base_comps = mono_components(b.base());
    project_component_with(b, &blown_comps, &base_comps)
}

/// Monochromatic components of the blown graph read off the base ones:
/// clones of one base edge are always tightly connected, so each blown
/// component is the full preimage of a base component.
pub fn pulled_back_components(b: &Blowup, base_comps: &MonoComponents) -> MonoComponents {
    let images: Vec<ComponentId> = (0..b.blown().base().len())
        .map(|id| base_comps.id_of(b.base(), b.project_id(id)))
        .collect();
    let side = |color: Color| {
        ComponentIndex::from_labels(
            images.iter().map(|c| (c.color == color).then_some(c.index)),
            color.into(),
        )
    };
    MonoComponents {
        red: side(Color::Red),
        blue: side(Color::Blue),
    }
}

pub fn project_component_with(
    b: &Blowup,
    blown_comps: &MonoComponents,
    base_comps: &MonoComponents,
) -> Result<BTreeMap<ComponentId, ComponentId>> {
    let mut map = BTreeMap::new();
    let mut hit: HashMap<ComponentId, ComponentId> = HashMap::new();
    for id in blown_comps.all_ids() {
        let edges = blown_comps.edges(id);
        let images: BTreeSet<usize> = edges.iter().map(|&e| b.project_id(e)).collect();
        let first = *images.iter().next().expect("components are nonempty");
        let target = base_comps.id_of(b.base(), first);
        let bad = || Error::PiMtcNotBijective {
            blown: format!("{} component {}", id.color, id.index),
            base: format!("{} component {}", target.color, target.index),
        };
        if target.color != id.color
            || images.len() != base_comps.edges(target).len()
            || !images.iter().all(|&e| base_comps.contains(target, e))
        {
            return Err(bad());
        }
        if hit.insert(target, id).is_some() {
            return Err(bad());
        }
        map.insert(id, target);
    }
    if hit.len() != base_comps.all_ids().len() {
        let missing = base_comps
            .all_ids()
            .into_iter()
            .find(|c| !hit.contains_key(c))
            .expect("some base component is not hit");
        return Err(Error::PiMtcNotBijective {
            blown: "none".into(),
            base: format!("{} component {}", missing.color, missing.index),
        });
    }
    Ok(map)
}

/// `φ(e) = (1/r)·Σ_{f ∈ π^{-1}(e)} φ_*(f)`.
pub fn fractional_from_blowup_matching(
    b: &Blowup,
    phi_star: &FractionalMatching,
    rprime: u64,
) -> Result<FractionalMatching> {
    if !phi_star.is_r_fractional(rprime as i64)? {
        return Err(Error::NotFractional(rprime));
    }
    phi_star.validate_in(b.blown().base())?;
    let mut sums: BTreeMap<Edge, Rational> = BTreeMap::new();
    for (f, w) in phi_star.weights() {
        let e = b.project(f).expect("validated blown edge");
        *sums.entry(e).or_insert_with(Rational::zero) += w;
    }
    let r = int(b.r() as u128);
    FractionalMatching::new(
        b.base().k(),
        (0..b.base().n() as Vertex).collect(),
        sums.into_iter().map(|(e, s)| (e, s / &r)),
    )
}

/// A `1/r'`-fractional matching on the blown graph with weight `r` times
/// that of `φ`. Each edge's weight, in units of `1/(r·r')`, is dealt out
/// over transversal clones; every base vertex hands out its part's
/// vertices round-robin, so each blown vertex receives at most `r'` units.
pub fn blowup_matching_from_fractional(
    b: &Blowup,
    phi: &FractionalMatching,
    rprime: u64,
) -> Result<FractionalMatching> {
    if rprime < 1 {
        return Err(Error::InvalidParameter("r' must be at least 1".into()));
    }
    let rr = b.r() as u64 * rprime;
    if !phi.is_r_fractional(rr as i64)? {
        return Err(Error::NotFractional(rr));
    }
    phi.validate_in(b.base().base())?;
    let unit = Rational::one() / int(rprime as u128);
    let mut next: HashMap<Vertex, usize> = HashMap::new();
    let mut clones: BTreeMap<Edge, Rational> = BTreeMap::new();
    for (e, w) in phi.weights() {
        let units = (w * int(rr as u128)).to_integer().to_u64().expect("weight at most one");
        for _ in 0..units {
            let clone = Edge::from_sorted(
                &e.vertices()
                    .iter()
                    .map(|&x| {
                        let c = next.entry(x).or_insert(0);
                        let v = x * b.r() as Vertex + (*c % b.r()) as Vertex;
                        *c += 1;
                        v
                    })
                    .collect::<Vec<_>>(),
            );
            *clones.entry(clone).or_insert_with(Rational::zero) += &unit;
        }
    }
    FractionalMatching::new(
        b.blown().k(),
        (0..b.blown().n() as Vertex).collect(),
        clones,
    )
    .map_err(|e| Error::InternalConsistency(format!("round-robin lift infeasible: {e}")))
}

/// Census of the blown graph against `(1 - 2ε, 2α)`.
pub fn density_of_blowup(b: &Blowup, eps: &Rational, alpha: &Rational) -> DensityReport {
    let two = int(2);
    is_dense(b.blown().base(), &(Rational::one() - &two * eps), &(&two * alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::random_colored_complete;
    use crate::matching::Matching;
    use crate::rational::ratio;

    #[test]
    fn single_edge_blows_up_to_a_complete_tripartite_graph() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap(), Color::Red);
        let b = Blowup::build(&g, 2).unwrap();
        assert_eq!(b.blown().count(Color::Red), 8);
        assert_eq!(b.part(1), 2..4);
        b.check_invariants().unwrap();
        let preimage = b.preimage(&Edge::from([0, 1, 2]));
        assert_eq!(preimage.len(), 8);
        assert!(preimage.iter().all(|f| b.blown().base().contains(f)));
    }

    #[test]
    fn unit_factor_is_the_identity() {
        let g = random_colored_complete(3, 6, &ratio(1, 2), 4).unwrap();
        let b = Blowup::build(&g, 1).unwrap();
        assert_eq!(b.blown(), &g);
        let map = project_component(&b).unwrap();
        assert!(map.iter().all(|(a, c)| a == c));
    }

    #[test]
    fn cap_is_enforced() {
        let g = random_colored_complete(3, 6, &ratio(1, 2), 4).unwrap();
        assert_eq!(Blowup::build_capped(&g, 3, 100).unwrap_err().code(), "edge-cap-exceeded");
        assert!(Blowup::build(&g, 0).is_err());
    }

    #[test]
    fn component_correspondence() {
        // two red cliques on disjoint vertex sets and one blue clique
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        for vs in [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]] {
            crate::combinatorics::for_each_subset(&vs, 3, |s| edges.push(s.to_vec()));
        }
        let base = Hypergraph::new(3, 12, &edges).unwrap();
        let colors = base
            .edges()
            .iter()
            .map(|e| if e.vertices()[0] >= 8 { Color::Blue } else { Color::Red })
            .collect();
        let g = ColoredHypergraph::new(base, colors).unwrap();
        let b = Blowup::build(&g, 2).unwrap();
        let comps = mono_components(b.blown());
        assert_eq!((comps.red.len(), comps.blue.len()), (2, 1));
        let map = project_component(&b).unwrap();
        assert_eq!(map.len(), 3);
        assert!(map.iter().all(|(a, c)| a.color == c.color));
    }

    #[test]
    fn integral_transversal_matching_projects_to_weight_one() {
        let g = ColoredHypergraph::monochromatic(Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap(), Color::Red);
        let b = Blowup::build(&g, 2).unwrap();
        let m = Matching::new(3, vec![Edge::from([0, 2, 4]), Edge::from([1, 3, 5])]).unwrap();
        let phi = fractional_from_blowup_matching(&b, &FractionalMatching::induced(&m), 1).unwrap();
        assert_eq!(phi.get(&Edge::from([0, 1, 2])), ratio(1, 1));
        assert_eq!(phi.weight(), ratio(1, 1));
    }

    #[test]
    fn lifting_a_single_small_weight() {
        let g = random_colored_complete(3, 5, &ratio(1, 2), 1).unwrap();
        let b = Blowup::build(&g, 3).unwrap();
        let e = Edge::from([0, 2, 4]);
        let phi = FractionalMatching::new(3, (0..5).collect(), [(e.clone(), ratio(1, 6))]).unwrap();
        let star = blowup_matching_from_fractional(&b, &phi, 2).unwrap();
        assert_eq!(star.weight(), ratio(1, 2));
        assert_eq!(star.support_len(), 1);
        assert_eq!(fractional_from_blowup_matching(&b, &star, 2).unwrap(), phi);
        assert_eq!(blowup_matching_from_fractional(&b, &phi, 1).unwrap_err().code(), "not-r-fractional");
    }

    #[test]
    fn integral_lift_uses_r_disjoint_clones() {
        let g = random_colored_complete(3, 6, &ratio(1, 2), 2).unwrap();
        let b = Blowup::build(&g, 3).unwrap();
        let m = Matching::new(3, vec![Edge::from([0, 1, 2]), Edge::from([3, 4, 5])]).unwrap();
        let star = blowup_matching_from_fractional(&b, &FractionalMatching::induced(&m), 1).unwrap();
        assert_eq!(star.support_len(), 6);
        assert_eq!(star.weight(), ratio(6, 1));
        assert!(star.weights().values().all(|w| w == &ratio(1, 1)));
    }

    #[test]
    fn pulled_back_components_match_a_direct_computation() {
        for seed in 0..6 {
            let g = random_colored_complete(3, 5, &ratio(1, 2), seed).unwrap();
            let b = Blowup::build(&g, 2).unwrap();
            assert_eq!(pulled_back_components(&b, &mono_components(&g)), mono_components(b.blown()));
        }
    }
}
