//! The iterative driver: alternate the two increments with blow-ups and
//! project the best matchings found back onto the input graph.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::{One, Zero};
use serde::Serialize;

use super::increment_one::{matching_increment_one, IncrementOutcome};
use super::increment_two::{matching_increment_two, TwoOutcome};
use super::initial::initial_in;
use super::{k_subsets, Archive, InconclusiveReason, PipelineConfig, Stage};
use crate::blowup::{blowup_matching_from_fractional, blown_edge_count, pulled_back_components, Blowup};
use crate::error::{Error, Result};
use crate::hypergraph::{is_dense, Color, ColoredHypergraph, Edge, Vertex};
use crate::matching::{FractionalMatching, Matching};
use crate::rational::{format_rational, int, ser_rational, Rational};
use crate::tight::{check_structure_lemma_with, mono_components, ComponentId, MonoComponents, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStatus {
    /// The matching reached its target size.
    Completed,
    /// No further progress was possible within the configured limits.
    Stalled,
    /// A step stopped without a result; see the archive.
    Inconclusive,
}

/// One JSON-lines record per driver step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    #[serde(rename = "L")]
    pub level: usize,
    pub iteration: usize,
    pub outcome: String,
    pub matching_size: usize,
    pub vertices: usize,
    pub weights: BTreeMap<String, String>,
    pub flags: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Guarantees {
    /// `w(φ1) >= (1-3η)n/(k+1)`.
    pub phi1_target: bool,
    /// `w(φ2) >= (1-3η)n/k`.
    pub phi2_target: bool,
    pub beta_floor: bool,
    /// Every increment ran with its size precondition satisfied.
    pub preconditions: bool,
    pub initial: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineResult {
    pub status: PipelineStatus,
    pub stop_reason: String,
    pub phi1: FractionalMatching,
    #[serde(serialize_with = "ser_rational")]
    pub phi1_weight: Rational,
    pub phi2: FractionalMatching,
    #[serde(serialize_with = "ser_rational")]
    pub phi2_weight: Rational,
    /// The component holding the support of `φ1`.
    pub phi1_component: ComponentId,
    /// The red and blue components the two matchings are confined to.
    pub r_id: Option<ComponentId>,
    pub b_id: Option<ComponentId>,
    /// Final blow-up level.
    pub level: usize,
    pub guarantees: Guarantees,
    pub trace: Vec<TraceRecord>,
    #[serde(serialize_with = "ser_rationals")]
    pub claim_weights: Vec<Rational>,
    pub archive: Option<Archive>,
}

impl PipelineResult {
    /// Matching size over vertex count never decreases along the trace.
    pub fn trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| {
            (w[0].matching_size as u128) * (w[1].vertices as u128)
                <= (w[1].matching_size as u128) * (w[0].vertices as u128)
        })
    }

    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("trace records serialize") + "\n")
            .collect()
    }
}

struct Tracer {
    records: Vec<TraceRecord>,
}

impl Tracer {
    fn push(&mut self, level: usize, iteration: usize, outcome: &str, m: &Matching, vertices: usize) -> &mut TraceRecord {
        self.records.push(TraceRecord {
            level,
            iteration,
            outcome: outcome.into(),
            matching_size: m.len(),
            vertices,
            weights: BTreeMap::new(),
            flags: BTreeMap::new(),
        });
        self.records.last_mut().expect("just pushed")
    }
}

/// `φ(e) = r^{-L} Σ φ_L(f)` over the level-`L` clones `f` of `e`.
fn project_to_base(phi: &FractionalMatching, scale: usize, base: &ColoredHypergraph) -> Result<FractionalMatching> {
    let mut sums: BTreeMap<Edge, Rational> = BTreeMap::new();
    for (e, w) in phi.weights() {
        let image = Edge::new(e.vertices().iter().map(|&v| v / scale as Vertex));
        *sums.entry(image).or_insert_with(Rational::zero) += w;
    }
    let s = int(scale as u128);
    let projected = FractionalMatching::new(
        base.k(),
        (0..base.n() as Vertex).collect(),
        sums.into_iter().map(|(e, w)| (e, w / &s)),
    )
    .map_err(|e| Error::InternalConsistency(format!("projection: {e}")))?;
    projected.validate_in(base.base())?;
    Ok(projected)
}

fn components_of(phi: &FractionalMatching, g: &ColoredHypergraph, comps: &MonoComponents) -> BTreeSet<ComponentId> {
    phi.support()
        .map(|e| comps.id_of(g, g.base().edge_id(e).expect("validated support")))
        .collect()
}

/// Weight `1/k` on every `k`-subset of `e ∪ f(e)` for the partner edges
/// `e`, and one on the rest of `M`.
fn partner_spread(g: &ColoredHypergraph, m: &Matching, f_map: &[(Edge, Edge)]) -> Result<FractionalMatching> {
    let k = g.k();
    let share = Rational::one() / int(k as u128);
    let hugged: HashSet<&Edge> = f_map.iter().map(|(_, f)| f).collect();
    let mut weights: Vec<(Edge, Rational)> = m
        .edges()
        .iter()
        .filter(|e| !hugged.contains(e))
        .map(|e| (e.clone(), Rational::one()))
        .collect();
    for (e, f) in f_map {
        weights.extend(k_subsets(e.union(f).vertices(), k).into_iter().map(|s| (s, share.clone())));
    }
    FractionalMatching::new(k, (0..g.n() as Vertex).collect(), weights)
        .map_err(|e| Error::InternalConsistency(format!("partner spread: {e}")))
}

fn mix(seed: u64, iteration: usize) -> u64 {
    seed ^ (iteration as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the enlargement loop on a `(1-ε, ε)`-dense coloured graph.
pub fn run_pipeline(g: &ColoredHypergraph, cfg: &PipelineConfig) -> Result<PipelineResult> {
    cfg.validate()?;
    let k = g.k();
    if k < 3 {
        return Err(Error::InvalidParameter("the pipeline needs k >= 3".into()));
    }
    if !is_dense(g.base(), &(Rational::one() - &cfg.eps), &cfg.eps).passes {
        return Err(Error::DensityPrecondition(format!(
            "graph is not (1 - {0}, {0})-dense",
            format_rational(&cfg.eps)
        )));
    }
    let base_comps = mono_components(g);
    let init = initial_in(g, &base_comps, cfg.seed)?;
    drive(g, cfg, base_comps, init.matching, init.component, Some((init.guarantee_met, init.bound_ok)))
}

/// The driver loop from a given starting matching inside `component`.
/// No density check is made.
pub fn run_pipeline_from(
    g: &ColoredHypergraph,
    cfg: &PipelineConfig,
    start: &Matching,
    component: ComponentId,
) -> Result<PipelineResult> {
    cfg.validate()?;
    if g.k() < 3 {
        return Err(Error::InvalidParameter("the pipeline needs k >= 3".into()));
    }
    if start.is_empty() {
        return Err(Error::InvalidParameter("the starting matching is empty".into()));
    }
    start.validate_in(g.base())?;
    let base_comps = mono_components(g);
    for e in start.edges() {
        if !base_comps.contains(component, g.base().require_edge(e)?) {
            return Err(Error::InvalidParameter(format!("edge {e:?} lies outside the component")));
        }
    }
    drive(g, cfg, base_comps, start.clone(), component, None)
}

fn drive(
    g: &ColoredHypergraph,
    cfg: &PipelineConfig,
    base_comps: MonoComponents,
    start: Matching,
    component: ComponentId,
    initial: Option<(bool, bool)>,
) -> Result<PipelineResult> {
    let k = g.k();
    let kq = int(k as u128);
    let one_minus = |c: u128| Rational::one() - int(c) * &cfg.eta;

    let mut graph = g.clone();
    let mut comps = base_comps.clone();
    let mut m = start;
    let mut comp = component;
    let (mut level, mut scale, mut iteration) = (0usize, 1usize, 0usize);
    let mut tracer = Tracer { records: Vec::new() };
    let rec = tracer.push(0, 0, "initial", &m, g.n());
    if let Some((guarantee, bound)) = initial {
        rec.flags.insert("initial_guarantee".into(), guarantee);
        rec.flags.insert("component_bound".into(), bound);
    }

    let mut preconditions = true;
    let mut claim_weights = Vec::new();
    let mut archive: Option<Archive> = None;
    let mut stalled_candidate: Option<FractionalMatching> = None;
    let mut partner: Option<Vec<(Edge, Edge)>> = None;

    let (status, stop_reason) = loop {
        let nv = graph.n();
        let nvq = int(nv as u128);
        if int(m.len() as u128) * &kq >= one_minus(2) * &nvq {
            break (PipelineStatus::Completed, "matching reached (1-2η)n/k".to_string());
        }
        if iteration == cfg.l_max {
            break (PipelineStatus::Stalled, "iteration cap".to_string());
        }
        iteration += 1;
        let seed = mix(cfg.seed, iteration);
        let one = matching_increment_one(&graph, &comps, &m, comp, cfg, seed)?;
        preconditions &= one.precondition_ok;
        claim_weights.extend(one.claims.iter().map(|c| c.weight.clone()));
        let (phi, target) = match one.outcome {
            IncrementOutcome::M1 { phi, weight } => {
                let rec = tracer.push(level, iteration, "m1", &m, nv);
                rec.weights.insert("candidate".into(), format_rational(&weight));
                rec.flags.insert("precondition".into(), one.precondition_ok);
                (phi, comp)
            }
            IncrementOutcome::M2 {
                m_prime,
                f_map,
                blue_component,
            } => {
                partner = Some(f_map.clone());
                let rec = tracer.push(level, iteration, "m2", &m, nv);
                rec.weights.insert("partner".into(), m_prime.len().to_string());
                rec.flags.insert("precondition".into(), one.precondition_ok);
                rec.flags.insert("partner_target".into(), one.m_prime_target_met);
                if int(m.len() as u128) * (&kq + Rational::one()) > one_minus(2) * &nvq {
                    break (PipelineStatus::Completed, "partner matching closes the gap".to_string());
                }
                let pairs: Vec<(Edge, Edge)> = f_map.iter().map(|(e, f)| (f.clone(), e.clone())).collect();
                let hugged: HashSet<&Edge> = f_map.iter().map(|(_, f)| f).collect();
                let others = Matching::new(k, m.edges().iter().filter(|e| !hugged.contains(e)).cloned().collect())?;
                let two = matching_increment_two(&graph, &comps, &pairs, &others, comp, blue_component, cfg, seed)?;
                preconditions &= two.precondition_ok;
                match two.outcome {
                    TwoOutcome::Enlarged { phi, component, weight } => {
                        let rec = tracer.push(level, iteration, "enlarged", &m, nv);
                        rec.weights.insert("candidate".into(), format_rational(&weight));
                        rec.weights.insert("m4".into(), two.m4.to_string());
                        rec.flags.insert("precondition".into(), two.precondition_ok);
                        rec.flags.insert("m4_target".into(), two.m4_target_met);
                        (phi, component)
                    }
                    TwoOutcome::Inconclusive(mut a) => {
                        a.level = level;
                        tracer.push(level, iteration, "inconclusive", &m, nv);
                        let reason = a.reason.label().to_string();
                        archive = Some(*a);
                        break (PipelineStatus::Inconclusive, reason);
                    }
                }
            }
            IncrementOutcome::Inconclusive(mut a) => {
                a.level = level;
                tracer.push(level, iteration, "inconclusive", &m, nv);
                let reason = a.reason.label().to_string();
                archive = Some(*a);
                break (PipelineStatus::Inconclusive, reason);
            }
        };
        if phi.weight() <= int(m.len() as u128) {
            tracer.push(level, iteration, "stalled", &m, nv);
            break (PipelineStatus::Stalled, "no progress".to_string());
        }
        let next = scale * cfg.r;
        let fits = blown_edge_count(graph.base().len(), k, cfg.r) <= cfg.materialise_cap as u128
            && Rational::one() / int(next as u128) >= cfg.beta;
        if !fits {
            stalled_candidate = Some(phi);
            tracer.push(level, iteration, "stalled", &m, nv);
            break (PipelineStatus::Stalled, "no further blow-up fits".to_string());
        }
        let blow = Blowup::build_capped(&graph, cfg.r, cfg.materialise_cap)?;
        let lifted = blowup_matching_from_fractional(&blow, &phi, 1)?;
        let next_m = Matching::new(k, lifted.support().cloned().collect())?;
        let next_comps = pulled_back_components(&blow, &comps);
        let blown = blow.into_blown();
        let first = blown.base().edge_id(&next_m.edges()[0]).expect("lifted edge");
        let next_comp = next_comps.id_of(&blown, first);
        if next_m.edges().iter().any(|e| !next_comps.contains(next_comp, blown.base().edge_id(e).expect("lifted edge"))) {
            return Err(Error::InternalConsistency(format!(
                "lifted matching leaves the component of {target:?}"
            )));
        }
        graph = blown;
        comps = next_comps;
        m = next_m;
        comp = next_comp;
        level += 1;
        scale = next;
        partner = None;
        tracer.push(level, iteration, "lifted", &m, graph.n());
    };

    let floor_ok = |phi: &FractionalMatching| phi.min_positive_weight().is_none_or(|w| *w >= cfg.beta);
    let mut phi1 = project_to_base(&FractionalMatching::induced(&m).completion(graph.base())?, scale, g)?;
    if let Some(cand) = &stalled_candidate {
        let p = project_to_base(cand, scale, g)?;
        if floor_ok(&p) && p.weight() > phi1.weight() {
            phi1 = p;
        }
    }
    let mut phi2 = phi1.clone();
    if let Some(f_map) = &partner {
        let p = project_to_base(&partner_spread(&graph, &m, f_map)?, scale, g)?;
        if floor_ok(&p) && p.weight() > phi2.weight() {
            phi2 = p;
        }
    }

    let c1 = components_of(&phi1, g, &base_comps);
    let c2 = components_of(&phi2, g, &base_comps);
    if c1.len() != 1 {
        return Err(Error::InternalConsistency(format!("φ1 spans {} components", c1.len())));
    }
    let phi1_component = *c1.iter().next().expect("one component");
    let all: BTreeSet<ComponentId> = c1.union(&c2).copied().collect();
    let pick = |color: Color| -> Result<Option<ComponentId>> {
        let mut of: Vec<ComponentId> = all.iter().copied().filter(|c| c.color == color).collect();
        if of.len() > 1 {
            return Err(Error::InternalConsistency(format!("matchings span several {color} components")));
        }
        Ok(of.pop())
    };
    let (r_id, b_id) = (pick(Color::Red)?, pick(Color::Blue)?);

    let (n, w1, w2) = (int(g.n() as u128), phi1.weight(), phi2.weight());
    let guarantees = Guarantees {
        phi1_target: w1 * (&kq + Rational::one()) >= one_minus(3) * &n,
        phi2_target: w2 * &kq >= one_minus(3) * &n,
        beta_floor: floor_ok(&phi1) && floor_ok(&phi2),
        preconditions,
        initial: initial.is_none_or(|(guarantee, _)| guarantee),
    };
    Ok(PipelineResult {
        status,
        stop_reason,
        phi1_weight: phi1.weight(),
        phi2_weight: phi2.weight(),
        phi1,
        phi2,
        phi1_component,
        r_id,
        b_id,
        level,
        guarantees,
        trace: tracer.records,
        claim_weights,
        archive,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    /// The replay reproduced the archived outcome.
    pub consistent: bool,
    pub verdict: Option<Verdict>,
    pub reason: Option<InconclusiveReason>,
}

/// Rebuilds the archived level and either rechecks the stored walk or
/// reruns the stage with the stored seed.
pub fn replay_archive(g: &ColoredHypergraph, cfg: &PipelineConfig, archive: &Archive) -> Result<ReplayReport> {
    let base_comps = mono_components(g);
    let (host, comps) = if archive.level == 0 {
        (g.clone(), base_comps)
    } else {
        let factor = (0..archive.level).try_fold(1usize, |acc, _| acc.checked_mul(cfg.r));
        let factor = factor.ok_or_else(|| Error::InvalidParameter("archived level overflows".into()))?;
        let blow = Blowup::build_capped(g, factor, cfg.materialise_cap)?;
        let comps = pulled_back_components(&blow, &base_comps);
        (blow.into_blown(), comps)
    };
    if let (Some(walk), Some(pivot)) = (&archive.walk, archive.pivot) {
        let verdict = check_structure_lemma_with(&host, &comps, walk, pivot, archive.reversed)?;
        return Ok(ReplayReport {
            consistent: verdict == Verdict::Violated,
            verdict: Some(verdict),
            reason: None,
        });
    }
    let k = host.k();
    let m = Matching::new(k, archive.matching.clone())?;
    let reason = match archive.stage {
        Stage::IncrementOne => {
            match matching_increment_one(&host, &comps, &m, archive.component, cfg, archive.seed)?.outcome {
                IncrementOutcome::Inconclusive(a) => Some(a.reason),
                _ => None,
            }
        }
        Stage::IncrementTwo => {
            let partner = archive
                .partner
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("archive lacks its partner matching".into()))?;
            let others = Matching::new(k, archive.others.clone())?;
            let report = matching_increment_two(
                &host,
                &comps,
                &partner.pairs,
                &others,
                archive.component,
                partner.component,
                cfg,
                archive.seed,
            )?;
            match report.outcome {
                TwoOutcome::Inconclusive(a) => Some(a.reason),
                _ => None,
            }
        }
    };
    Ok(ReplayReport {
        consistent: reason == Some(archive.reason),
        verdict: None,
        reason,
    })
}
