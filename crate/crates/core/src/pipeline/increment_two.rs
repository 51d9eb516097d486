//! Second increment: given matchings in a red and a blue component that
//! hug each other edge by edge, enlarge one of them.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{extends, shuffled, Archive, InconclusiveReason, Partner, PipelineConfig, Stage};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, ColoredHypergraph, Edge, Vertex};
use crate::matching::{FractionalMatching, Matching};
use crate::rational::{desk_threshold, int, ser_rational, Rational};
use crate::tight::{
    check_structure_lemma_with, vertex_sequence_windows, ComponentId, MonoComponents, PseudoWalk,
    Verdict,
};

/// A walk from `gie` to `gfe` inside `gfe ∪ gie` whose interior edges
/// avoid `v`. With `u = gfe ∩ gie`, `x = gie \ gfe`, `y = gfe \ gie`:
/// `v ∈ u` walks `v x (u-v) y v`, `v ∈ x` walks `v (x-v) u y`, and
/// `v ∈ y` walks `x u (y-v) v`.
pub fn pv_walk(gfe: &Edge, gie: &Edge, v: Vertex) -> Result<PseudoWalk> {
    let k = gfe.len();
    if gie.len() != k || gfe == gie {
        return Err(Error::InvalidParameter("pv_walk needs two distinct edges of equal size".into()));
    }
    let u = gfe.intersection(gie);
    let x = gie.difference(gfe);
    let y = gfe.difference(gie);
    let drop = |side: &[Vertex]| side.iter().copied().filter(|&a| a != v).collect::<Vec<_>>();
    let mut seq = Vec::with_capacity(2 * k + 1);
    if u.contains(&v) {
        seq.push(v);
        seq.extend_from_slice(&x);
        seq.extend(drop(&u));
        seq.extend_from_slice(&y);
        seq.push(v);
    } else if x.contains(&v) {
        seq.push(v);
        seq.extend(drop(&x));
        seq.extend_from_slice(&u);
        seq.extend_from_slice(&y);
    } else if y.contains(&v) {
        seq.extend_from_slice(&x);
        seq.extend_from_slice(&u);
        seq.extend(drop(&y));
        seq.push(v);
    } else {
        return Err(Error::InvalidParameter(format!("vertex {v} lies in neither edge")));
    }
    let edges = vertex_sequence_windows(k, &seq)?;
    debug_assert!(edges.first() == Some(gie) && edges.last() == Some(gfe));
    Ok(PseudoWalk::from_edges_unchecked(edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoCase {
    /// Enough apex edges already lie in the component.
    Shortcut,
    /// Every first off-colour edge stays in the partner component.
    AllInPartner,
    /// Some first off-colour edge leaves the partner component.
    Escapes,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TwoOutcome {
    Enlarged {
        phi: FractionalMatching,
        component: ComponentId,
        #[serde(serialize_with = "ser_rational")]
        weight: Rational,
    },
    Inconclusive(Box<Archive>),
}

#[derive(Debug, Clone, Serialize)]
pub struct IncrementTwoReport {
    pub outcome: TwoOutcome,
    pub t: usize,
    pub m0: usize,
    pub m2: usize,
    pub m4: usize,
    pub case: Option<TwoCase>,
    /// The apex majority had the partner's colour, so the roles swapped.
    pub swapped: bool,
    /// `ηn <= t <= (1-η)n/(k+1)`.
    pub precondition_ok: bool,
    pub m4_target_met: bool,
}

struct Apex {
    e: Edge,
    /// Index into `pairs`.
    pair: usize,
}

/// `pairs` lists `(f, g(f))` with `f` in `r_id` and `g(f)` in `b_id`;
/// `others` is the rest of the matching in `r_id`, kept aside and added
/// back when the result lands in `r_id`.
#[allow(clippy::too_many_arguments)]
pub fn matching_increment_two(
    g: &ColoredHypergraph,
    comps: &MonoComponents,
    pairs: &[(Edge, Edge)],
    others: &Matching,
    r_id: ComponentId,
    b_id: ComponentId,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<IncrementTwoReport> {
    let h = g.base();
    let (n, k) = (g.n(), g.k());
    let bad = |m: String| Err(Error::InvalidParameter(m));
    if k < 3 {
        return bad("increments need k >= 3".into());
    }
    if pairs.is_empty() {
        return bad("no pairs given".into());
    }
    if r_id.color == b_id.color {
        return bad("the two components must have different colours".into());
    }
    let m = Matching::new(k, pairs.iter().map(|p| p.0.clone()).collect())?;
    let m_prime = Matching::new(k, pairs.iter().map(|p| p.1.clone()).collect())?;
    let partner_cover = m_prime.covered();
    for (f, gf) in pairs {
        if !comps.contains(r_id, h.require_edge(f)?) || !comps.contains(b_id, h.require_edge(gf)?) {
            return bad(format!("pair ({f:?}, {gf:?}) is not confined to (R, B)"));
        }
        if f.intersection_len(gf) != k - 1 || !h.is_clique(&f.union(gf).to_vec()) {
            return bad(format!("pair ({f:?}, {gf:?}) does not span a clique on k + 1 vertices"));
        }
        if f.vertices().iter().any(|v| partner_cover.contains(v) && !gf.contains(*v)) {
            return bad(format!("{f:?} meets the partner matching outside its partner"));
        }
    }
    let taken: BTreeSet<Vertex> = m.covered().union(&partner_cover).copied().collect();
    for e in others.edges() {
        if !comps.contains(r_id, h.require_edge(e)?) || e.vertices().iter().any(|v| taken.contains(v)) {
            return bad(format!("side edge {e:?} is outside R or overlaps the pairs"));
        }
    }
    let t = pairs.len();
    let nq = int(n as u128);
    let tq = int(t as u128);
    let precondition_ok =
        &cfg.eta * &nq <= tq && &tq * int(k as u128 + 1) <= (Rational::one() - &cfg.eta) * &nq;

    let blocked: BTreeSet<Vertex> = taken.union(&others.covered()).copied().collect();
    let free: Vec<Vertex> = (0..n as Vertex).filter(|v| !blocked.contains(v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order: Vec<usize> = shuffled(&(0..t).collect::<Vec<_>>(), &mut rng);
    let w_order = shuffled(&free, &mut rng);
    let archive = |reason| {
        let mut a = Archive::new(reason, Stage::IncrementTwo, seed, m.edges(), r_id);
        a.partner = Some(Partner {
            pairs: pairs.to_vec(),
            component: b_id,
        });
        a.others = others.edges().to_vec();
        Box::new(a)
    };
    let stop = |outcome, m0, case| IncrementTwoReport {
        outcome,
        t,
        m0,
        m2: 0,
        m4: 0,
        case,
        swapped: false,
        precondition_ok,
        m4_target_met: false,
    };

    let target0 = desk_threshold(&(int(8 * k as u128) * &cfg.delta), n);
    let mut used: HashSet<Vertex> = HashSet::new();
    let mut apexes: Vec<Apex> = Vec::new();
    for &pair in &order {
        if apexes.len() == target0 {
            break;
        }
        let (f, gf) = &pairs[pair];
        let mut clique = f.union(gf).to_vec();
        let mut picked = Vec::with_capacity(k);
        for &w in &w_order {
            if picked.len() == k {
                break;
            }
            if !used.contains(&w) && extends(h, &clique, w) {
                clique.push(w);
                picked.push(w);
            }
        }
        if picked.len() == k {
            used.extend(picked.iter().copied());
            apexes.push(Apex {
                e: Edge::new(picked),
                pair,
            });
        }
    }
    if apexes.is_empty() {
        return Ok(stop(TwoOutcome::Inconclusive(archive(InconclusiveReason::NoFreshApex)), 0, None));
    }
    let m0 = apexes.len();

    let in_r_colour = apexes.iter().filter(|a| g.color_of(&a.e) == Some(r_id.color)).count();
    let swapped = 2 * in_r_colour < m0;
    let (cur_r, cur_b) = if swapped { (b_id, r_id) } else { (r_id, b_id) };
    // (f(e), g(f(e))) from the point of view of the current roles.
    let sides = |pair: usize| -> (&Edge, &Edge) {
        let (f, gf) = &pairs[pair];
        if swapped {
            (gf, f)
        } else {
            (f, gf)
        }
    };
    let colour = cur_r.color;
    let m1: Vec<&Apex> = apexes.iter().filter(|a| g.color_of(&a.e) == Some(colour)).collect();
    let (m2, m3): (Vec<&Apex>, Vec<&Apex>) =
        m1.into_iter().partition(|a| comps.contains(cur_r, h.edge_id(&a.e).expect("clique edge")));

    let finish = |base: Vec<Edge>, extra: FractionalMatching, component: ComponentId| -> Result<TwoOutcome> {
        let mut phi = FractionalMatching::induced(&Matching::new(k, base)?).sum(&extra)?;
        if component == r_id {
            phi = phi.sum(&FractionalMatching::induced(others))?;
        }
        let phi = phi.completion(h)?;
        let weight = phi.weight();
        Ok(TwoOutcome::Enlarged { phi, component, weight })
    };
    let side_edges = |partner_side: bool, skip: &HashSet<usize>| -> Vec<Edge> {
        (0..t)
            .filter(|p| !skip.contains(p))
            .map(|p| {
                let (fe, gfe) = sides(p);
                if partner_side { gfe } else { fe }.clone()
            })
            .collect()
    };

    let mut report = stop(TwoOutcome::Inconclusive(archive(InconclusiveReason::CaseSplitEmpty)), m0, None);
    report.swapped = swapped;
    report.m2 = m2.len();
    if m2.len() >= desk_threshold(&(int(2 * k as u128) * &cfg.delta), n) || (m3.is_empty() && !m2.is_empty()) {
        let mut base = side_edges(false, &HashSet::new());
        base.extend(m2.iter().map(|a| a.e.clone()));
        report.case = Some(TwoCase::Shortcut);
        report.outcome = finish(base, FractionalMatching::zero(k, BTreeSet::new()), cur_r)?;
        return Ok(report);
    }

    struct Probe<'a> {
        apex: &'a Apex,
        walks: Vec<Vec<Edge>>,
        /// Position of the first off-colour edge on each walk.
        firsts: Vec<usize>,
        in_partner: bool,
    }
    let mut probes: Vec<Probe> = Vec::with_capacity(m3.len());
    for apex in m3 {
        let (fe, gfe) = sides(apex.pair);
        let z = fe.intersection(gfe);
        let x = fe.difference(gfe)[0];
        let mut walks = Vec::with_capacity(k - 1);
        let mut firsts = Vec::with_capacity(k - 1);
        for i in 0..k - 1 {
            let mut seq = vec![z[i], x];
            seq.extend(z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a));
            seq.extend_from_slice(apex.e.vertices());
            let walk = vertex_sequence_windows(k, &seq)?;
            let pos = walk.iter().position(|s| g.color_of(s) != Some(colour)).ok_or_else(|| {
                Error::InternalConsistency("walk between two components never changes colour".into())
            })?;
            walks.push(walk);
            firsts.push(pos);
        }
        let in_partner = walks
            .iter()
            .zip(&firsts)
            .all(|(w, &p)| comps.contains(cur_b, h.edge_id(&w[p]).expect("clique edge")));
        probes.push(Probe {
            apex,
            walks,
            firsts,
            in_partner,
        });
    }
    let (group_a, group_b): (Vec<Probe>, Vec<Probe>) = probes.into_iter().partition(|p| p.in_partner);
    let (m4, case) = if group_a.len() >= group_b.len() {
        (group_a, TwoCase::AllInPartner)
    } else {
        (group_b, TwoCase::Escapes)
    };
    report.case = Some(case);
    report.m4 = m4.len();
    report.m4_target_met = m4.len() >= desk_threshold(&(int(k as u128) * &cfg.delta), n);

    let mut weights: BTreeMap<Edge, Rational> = BTreeMap::new();
    let mut domain: BTreeSet<Vertex> = BTreeSet::new();
    let mut spread = |heavy: &Edge, family: BTreeSet<Edge>, span: [&Edge; 3]| {
        let share = Rational::one() / int(family.len() as u128);
        for f in family.into_iter().chain([heavy.clone()]) {
            *weights.entry(f).or_insert_with(Rational::zero) += &share;
        }
        domain.extend(span.iter().flat_map(|e| e.vertices().iter().copied()));
    };
    let touched: HashSet<usize> = m4.iter().map(|p| p.apex.pair).collect();
    let (base, component) = match case {
        TwoCase::AllInPartner => {
            for p in &m4 {
                let (fe, gfe) = sides(p.apex.pair);
                let family = p.walks.iter().zip(&p.firsts).map(|(w, &i)| w[i].clone()).collect();
                spread(gfe, family, [&p.apex.e, fe, gfe]);
            }
            (side_edges(true, &touched), cur_b)
        }
        _ => {
            let reversed = colour == Color::Blue;
            for p in &m4 {
                let (fe, gfe) = sides(p.apex.pair);
                let (walk, &pos) = p
                    .walks
                    .iter()
                    .zip(&p.firsts)
                    .find(|(w, &i)| !comps.contains(cur_b, h.edge_id(&w[i]).expect("clique edge")))
                    .expect("escaping probe");
                let gie = &walk[pos];
                let mut head = vec![gfe.clone()];
                head.extend(walk[..=pos].iter().cloned());
                let pivot = head.len() - 1;
                let mut family = BTreeSet::new();
                for &v in fe.vertices() {
                    let mut edges = head.clone();
                    edges.extend(pv_walk(gfe, gie, v)?.edges().iter().cloned());
                    let q = PseudoWalk::from_edges_unchecked(edges);
                    match check_structure_lemma_with(g, comps, &q, pivot, reversed)? {
                        Verdict::Holds { second, .. } => {
                            let fv = q.edges()[second].clone();
                            if fv.contains(v) || !comps.contains(cur_r, h.edge_id(&fv).expect("walk edge")) {
                                return Err(Error::InternalConsistency(format!(
                                    "located edge {fv:?} is outside R or contains {v}"
                                )));
                            }
                            family.insert(fv);
                        }
                        Verdict::Violated => {
                            let mut a = archive(InconclusiveReason::StructureViolation);
                            a.walk = Some(q);
                            a.pivot = Some(pivot);
                            a.reversed = reversed;
                            report.outcome = TwoOutcome::Inconclusive(a);
                            return Ok(report);
                        }
                        Verdict::PreconditionFailed { reason } => return Err(Error::InternalConsistency(reason)),
                    }
                }
                spread(fe, family, [&p.apex.e, fe, gfe]);
            }
            (side_edges(false, &touched), cur_r)
        }
    };
    let extra = FractionalMatching::new(k, domain, weights)
        .map_err(|e| Error::InternalConsistency(format!("spread weights: {e}")))?;
    report.outcome = finish(base, extra, component)?;
    Ok(report)
}
