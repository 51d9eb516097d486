//! First increment: enlarge a matching inside its component, or hand back
//! a partner matching of the other colour hugging it edge by edge.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{extends, k_subsets, shuffled, Archive, InconclusiveReason, PipelineConfig, Stage};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Edge, Hypergraph, Vertex};
use crate::matching::{FractionalMatching, Matching};
use crate::rational::{ceil_usize, desk_threshold, int, ser_rational, Rational};
use crate::tight::{
    check_structure_lemma_with, find_walk_in, vertex_sequence_windows, ComponentId,
    MonoComponents, PseudoWalk, Verdict,
};

/// Nodes a single connector-set search may visit.
const CONNECTOR_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimBranch {
    /// Some `x1` has every `f_{x1,x2}` meeting `f2`; `e1` keeps weight one.
    KeepFirst,
    /// `e2` keeps weight one.
    KeepSecond,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimMatching {
    pub phi: FractionalMatching,
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
    pub branch: ClaimBranch,
    /// The edges sharing weight `1/|E|`, including the lighter of `e1, e2`.
    pub family: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ClaimOutcome {
    Found(ClaimMatching),
    Violation {
        walk: PseudoWalk,
        pivot: usize,
        reversed: bool,
    },
}

/// Builds a fractional matching of weight at least `2 + 1/k` on
/// `e1 ∪ f1 ∪ e2 ∪ f2 ∪ W_F`, supported in `R`. `f1`, `f2` must be
/// disjoint edges of the other colour in different components, each
/// sharing `k - 1` vertices with its `e_j`, and `f_j ∪ W_F` must span
/// cliques.
#[allow(clippy::too_many_arguments)]
pub fn claim_two_plus(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    e1: &Edge,
    f1: &Edge,
    e2: &Edge,
    f2: &Edge,
    w_f: &[Vertex],
    r_id: ComponentId,
) -> Result<ClaimOutcome> {
    let h = g.base();
    let k = g.k();
    let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
    let (ie1, ie2, if1, if2) = (
        h.require_edge(e1)?,
        h.require_edge(e2)?,
        h.require_edge(f1)?,
        h.require_edge(f2)?,
    );
    if !comps.contains(r_id, ie1) || !comps.contains(r_id, ie2) {
        return bad("e1 and e2 must lie in R");
    }
    let other = r_id.color.other();
    if g.color(if1) != other || g.color(if2) != other || comps.of(other).same_component(if1, if2) {
        return bad("f1 and f2 must lie in different components of the other colour");
    }
    if !f1.is_disjoint(f2) {
        return bad("f1 and f2 must be disjoint");
    }
    if e1.intersection_len(f1) != k - 1 || e2.intersection_len(f2) != k - 1 {
        return bad("each e_j must share k - 1 vertices with f_j");
    }
    let distinct: BTreeSet<Vertex> = w_f.iter().copied().collect();
    if w_f.len() != k - 1 || distinct.len() != k - 1 || w_f.iter().any(|&w| f1.contains(w) || f2.contains(w)) {
        return bad("W_F must be k - 1 fresh vertices");
    }
    for f in [f1, f2] {
        let mut span = f.to_vec();
        span.extend_from_slice(w_f);
        if !h.is_clique(&span) {
            return bad("f_j ∪ W_F must span a clique");
        }
    }

    let p_star = find_walk_in(h, |id| comps.contains(r_id, id), ie2, ie1)
        .ok_or_else(|| Error::InternalConsistency("e1 and e2 are not joined inside R".into()))?;
    let reversed = r_id.color == Color::Blue;
    let mut table: Vec<Vec<Edge>> = Vec::with_capacity(k);
    for &x1 in f1.vertices() {
        let mut row = Vec::with_capacity(k);
        for &x2 in f2.vertices() {
            let mut seq = vec![x1];
            seq.extend_from_slice(f1.without(x1).vertices());
            seq.extend_from_slice(w_f);
            seq.extend_from_slice(f2.without(x2).vertices());
            seq.push(x2);
            let mut edges = vertex_sequence_windows(k, &seq)?;
            let pivot = edges.len() - 1;
            edges.extend(p_star.edges().iter().cloned());
            let q = PseudoWalk::from_edges_unchecked(edges);
            match check_structure_lemma_with(g, comps, &q, pivot, reversed)? {
                Verdict::Holds { first, .. } => {
                    let f = q.edges()[first].clone();
                    if !comps.contains(r_id, h.edge_id(&f).expect("walk edge")) {
                        return Err(Error::InternalConsistency("located edge is outside R".into()));
                    }
                    row.push(f);
                }
                Verdict::Violated => return Ok(ClaimOutcome::Violation { walk: q, pivot, reversed }),
                Verdict::PreconditionFailed { reason } => return Err(Error::InternalConsistency(reason)),
            }
        }
        table.push(row);
    }

    let dedup = |edges: Vec<Edge>| -> Vec<Edge> {
        let set: BTreeSet<Edge> = edges.into_iter().collect();
        set.into_iter().collect()
    };
    let (heavy, light, family, branch) = match table.iter().find(|row| row.iter().all(|f| !f.is_disjoint(f2))) {
        Some(row) => (e1, e2, dedup(row.clone()), ClaimBranch::KeepFirst),
        None => {
            let picks = table
                .iter()
                .map(|row| row.iter().find(|f| f.is_disjoint(f2)).expect("row has an edge missing f2").clone())
                .collect();
            (e2, e1, dedup(picks), ClaimBranch::KeepSecond)
        }
    };
    let share = Rational::one() / int(family.len() as u128);
    let mut weights: BTreeMap<Edge, Rational> = BTreeMap::new();
    *weights.entry(heavy.clone()).or_insert_with(Rational::zero) += Rational::one();
    for f in family.iter().chain([light]) {
        *weights.entry(f.clone()).or_insert_with(Rational::zero) += &share;
    }
    let domain: BTreeSet<Vertex> = [e1, f1, e2, f2]
        .iter()
        .flat_map(|e| e.vertices().iter().copied())
        .chain(w_f.iter().copied())
        .collect();
    let phi = FractionalMatching::new(k, domain, weights)
        .map_err(|e| Error::InternalConsistency(format!("claim matching: {e}")))?;
    let weight = phi.weight();
    if weight < int(2) + Rational::one() / int(k as u128) {
        return Err(Error::InternalConsistency(format!("claim matching weighs only {weight}")));
    }
    let mut family = family;
    family.push(light.clone());
    Ok(ClaimOutcome::Found(ClaimMatching {
        phi,
        weight,
        branch,
        family,
    }))
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum IncrementOutcome {
    /// A larger fractional matching inside `R`.
    M1 {
        phi: FractionalMatching,
        #[serde(serialize_with = "ser_rational")]
        weight: Rational,
    },
    /// A matching of the other colour inside one component; `f_map` pairs
    /// each of its edges `e` with the edge `f(e)` of `M` it meets.
    M2 {
        m_prime: Matching,
        f_map: Vec<(Edge, Edge)>,
        blue_component: ComponentId,
    },
    Inconclusive(Box<Archive>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneCase {
    /// Enough apex extensions are cliques of R's colour.
    ApexCliques,
    /// The auxiliary graph has a large matching.
    Pairs,
    /// Its unmatched vertices form the partner matching.
    Independent,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncrementOneReport {
    pub outcome: IncrementOutcome,
    /// `ηn <= |M| <= (1-η)n/k`.
    pub precondition_ok: bool,
    pub m_star: usize,
    pub m0: usize,
    pub aux_matching: usize,
    pub case: Option<OneCase>,
    pub claims: Vec<ClaimMatching>,
    pub skipped_pairs: usize,
    /// `|M'| >= min(|M|, |W|) - (3k+1)γn` when the outcome is `M2`.
    pub m_prime_target_met: bool,
}

impl IncrementOneReport {
    fn stop(outcome: IncrementOutcome, precondition_ok: bool, m_star: usize) -> Self {
        IncrementOneReport {
            outcome,
            precondition_ok,
            m_star,
            m0: 0,
            aux_matching: 0,
            case: None,
            claims: Vec::new(),
            skipped_pairs: 0,
            m_prime_target_met: false,
        }
    }
}

/// `k - 1` vertices of `candidates` that extend both `f1` and `f2` to
/// cliques, by depth-first search under a node budget.
fn connector_set(h: &Hypergraph, f1: &Edge, f2: &Edge, candidates: &[Vertex]) -> Option<Vec<Vertex>> {
    fn go(
        h: &Hypergraph,
        candidates: &[Vertex],
        start: usize,
        a: &mut Vec<Vertex>,
        b: &mut Vec<Vertex>,
        chosen: &mut Vec<Vertex>,
        budget: &mut usize,
    ) -> bool {
        if chosen.len() == h.k() - 1 {
            return true;
        }
        for idx in start..candidates.len() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let v = candidates[idx];
            if extends(h, a, v) && extends(h, b, v) {
                a.push(v);
                b.push(v);
                chosen.push(v);
                if go(h, candidates, idx + 1, a, b, chosen, budget) {
                    return true;
                }
                a.pop();
                b.pop();
                chosen.pop();
            }
        }
        false
    }
    let mut budget = CONNECTOR_BUDGET;
    let (mut a, mut b, mut chosen) = (f1.to_vec(), f2.to_vec(), Vec::new());
    go(h, candidates, 0, &mut a, &mut b, &mut chosen, &mut budget).then_some(chosen)
}

/// One increment step for a matching `M` inside the component `r_id`.
/// Selections of `M*`, apexes and connector sets follow a permutation
/// seeded by `seed`.
pub fn matching_increment_one(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    m: &Matching,
    r_id: ComponentId,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<IncrementOneReport> {
    let h = g.base();
    let (n, k) = (g.n(), g.k());
    if k < 3 {
        return Err(Error::InvalidParameter("increments need k >= 3".into()));
    }
    if m.is_empty() {
        return Err(Error::InvalidParameter("the matching is empty".into()));
    }
    for e in m.edges() {
        if !comps.contains(r_id, h.require_edge(e)?) {
            return Err(Error::InvalidParameter(format!("edge {e:?} is not in R")));
        }
    }
    let (nq, mq) = (int(n as u128), int(m.len() as u128));
    let precondition_ok =
        &cfg.eta * &nq <= mq && &mq * int(k as u128) <= (Rational::one() - &cfg.eta) * &nq;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let covered = m.covered();
    let free: Vec<Vertex> = (0..n as Vertex).filter(|v| !covered.contains(v)).collect();
    let target = m
        .len()
        .min(free.len())
        .saturating_sub(ceil_usize(&(&cfg.gamma * &nq)))
        .max(1);
    let order = shuffled(m.edges(), &mut rng);
    let w_order = shuffled(&free, &mut rng);
    let archive = |reason| Box::new(Archive::new(reason, Stage::IncrementOne, seed, m.edges(), r_id));

    let mut used: HashSet<Vertex> = HashSet::new();
    let mut apexes: Vec<(Edge, Vertex)> = Vec::new();
    for e in &order {
        if apexes.len() == target {
            break;
        }
        if let Some(&w) = w_order.iter().find(|&&w| !used.contains(&w) && extends(h, e.vertices(), w)) {
            used.insert(w);
            apexes.push((e.clone(), w));
        }
    }
    if apexes.is_empty() {
        let outcome = IncrementOutcome::Inconclusive(archive(InconclusiveReason::NoFreshApex));
        return Ok(IncrementOneReport::stop(outcome, precondition_ok, 0));
    }
    let m_star = apexes.len();

    let c = r_id.color;
    let (m0, rest): (Vec<_>, Vec<_>) = apexes
        .into_iter()
        .partition(|(e, w)| k_subsets(e.with(*w).vertices(), k).iter().all(|s| g.color_of(s) == Some(c)));
    let big = desk_threshold(&(int(k as u128) * &cfg.gamma), n);
    if m0.len() >= big {
        let lifted: HashSet<&Edge> = m0.iter().map(|(e, _)| e).collect();
        let share = Rational::one() / int(k as u128);
        let mut weights: Vec<(Edge, Rational)> = m
            .edges()
            .iter()
            .filter(|e| !lifted.contains(e))
            .map(|e| (e.clone(), Rational::one()))
            .collect();
        for (e, w) in &m0 {
            weights.extend(k_subsets(e.with(*w).vertices(), k).into_iter().map(|s| (s, share.clone())));
        }
        let phi = FractionalMatching::new(k, (0..n as Vertex).collect(), weights)
            .map_err(|e| Error::InternalConsistency(format!("apex spreading: {e}")))?;
        let weight = phi.weight();
        let mut report = IncrementOneReport::stop(IncrementOutcome::M1 { phi, weight }, precondition_ok, m_star);
        report.m0 = m0.len();
        report.case = Some(OneCase::ApexCliques);
        return Ok(report);
    }

    let other = c.other();
    let mut nodes: Vec<(Edge, Vertex, Edge, usize)> = Vec::with_capacity(rest.len());
    for (e, w) in rest {
        let full = e.with(w);
        let f = e
            .vertices()
            .iter()
            .map(|&u| full.without(u))
            .find(|s| g.color_of(s) == Some(other))
            .ok_or_else(|| Error::InternalConsistency("apex extension has no edge of the other colour".into()))?;
        let label = comps.of(other).component_of(h.edge_id(&f).expect("clique edge")).expect("indexed");
        nodes.push((e, w, f, label));
    }
    let mut paired = vec![false; nodes.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..nodes.len() {
        if paired[i] {
            continue;
        }
        if let Some(j) = (i + 1..nodes.len()).find(|&j| !paired[j] && nodes[j].3 != nodes[i].3) {
            paired[i] = true;
            paired[j] = true;
            pairs.push((i, j));
        }
    }

    let mut report = IncrementOneReport::stop(
        IncrementOutcome::Inconclusive(archive(InconclusiveReason::CaseSplitEmpty)),
        precondition_ok,
        m_star,
    );
    report.m0 = m0.len();
    report.aux_matching = pairs.len();

    // With nothing left over there is no partner matching; spend the pairs.
    let all_paired = pairs.len() * 2 == nodes.len();
    if pairs.len() >= big || (all_paired && !pairs.is_empty()) {
        report.case = Some(OneCase::Pairs);
        let mut blocked: HashSet<Vertex> = used;
        let mut removed: HashSet<Edge> = HashSet::new();
        let mut acc = FractionalMatching::zero(k, BTreeSet::new());
        for &(i, j) in &pairs {
            let (e1, _, f1, _) = &nodes[i];
            let (e2, _, f2, _) = &nodes[j];
            let candidates: Vec<Vertex> = w_order
                .iter()
                .copied()
                .filter(|v| !blocked.contains(v) && !f1.contains(*v) && !f2.contains(*v))
                .collect();
            let Some(w_f) = connector_set(h, f1, f2, &candidates) else {
                report.skipped_pairs += 1;
                continue;
            };
            match claim_two_plus(g, comps, e1, f1, e2, f2, &w_f, r_id)? {
                ClaimOutcome::Found(claim) => {
                    blocked.extend(w_f);
                    removed.insert(e1.clone());
                    removed.insert(e2.clone());
                    acc = acc.sum(&claim.phi)?;
                    report.claims.push(claim);
                }
                ClaimOutcome::Violation { walk, pivot, reversed } => {
                    let mut a = archive(InconclusiveReason::StructureViolation);
                    a.walk = Some(walk);
                    a.pivot = Some(pivot);
                    a.reversed = reversed;
                    report.outcome = IncrementOutcome::Inconclusive(a);
                    return Ok(report);
                }
            }
        }
        if report.claims.is_empty() {
            report.outcome = IncrementOutcome::Inconclusive(archive(InconclusiveReason::NoConnectorSet));
            return Ok(report);
        }
        let kept = Matching::new(k, m.edges().iter().filter(|e| !removed.contains(e)).cloned().collect())?;
        let phi = FractionalMatching::induced(&kept).sum(&acc)?.completion(h)?;
        let weight = phi.weight();
        report.outcome = IncrementOutcome::M1 { phi, weight };
        return Ok(report);
    }

    report.case = Some(OneCase::Independent);
    let lonely: Vec<&(Edge, Vertex, Edge, usize)> =
        nodes.iter().enumerate().filter(|(i, _)| !paired[*i]).map(|(_, x)| x).collect();
    let Some(first) = lonely.first() else {
        return Ok(report);
    };
    if lonely.iter().any(|x| x.3 != first.3) {
        return Err(Error::InternalConsistency("unpaired edges span two components".into()));
    }
    let m_prime = Matching::new(k, lonely.iter().map(|x| x.2.clone()).collect())?;
    let f_map = lonely.iter().map(|x| (x.2.clone(), x.0.clone())).collect();
    let slack = ceil_usize(&(int(3 * k as u128 + 1) * &cfg.gamma * &nq));
    report.m_prime_target_met = m_prime.len() + slack >= m.len().min(free.len());
    report.outcome = IncrementOutcome::M2 {
        m_prime,
        f_map,
        blue_component: ComponentId {
            color: other,
            index: first.3,
        },
    };
    Ok(report)
}
