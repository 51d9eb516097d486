//! The ten acceptance checks, each printed as one pass/fail line.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::{One, Zero};
use tightram_core::blowup::{
    blowup_matching_from_fractional, density_of_blowup, fractional_from_blowup_matching, project_component,
};
use tightram_core::combinatorics::for_each_subset;
use tightram_core::hypergraph::{is_dense, random_colored_complete, random_dense, random_hypergraph};
use tightram_core::matching::{
    max_fractional_confined, maximal_matching_greedy, mu_exact, MuMode, MuOptions, DEFAULT_LP_CAP,
};
use tightram_core::pipeline::*;
use tightram_core::rational::{int, ratio};
use tightram_core::search::{
    contains_mono_copy, extremal_coloring, ramsey_search, verify_extremal, RamseyOptions,
};
use tightram_core::tight::{
    mono_components, sample_structure_case, ComponentId, MonoComponents, SearchOptions, SearchOutcome, Shape,
    Verdict,
};
use tightram_core::{Blowup, Color, ColoredHypergraph, Edge, FractionalMatching, Hypergraph, Matching, Rational, Vertex};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn component_of(g: &ColoredHypergraph, comps: &MonoComponents, e: &Edge) -> ComponentId {
    comps.id_of(g, g.base().edge_id(e).unwrap())
}

/// Supports map through the blown-to-base component bijection.
fn supports_follow_components(b: &Blowup, phi: &FractionalMatching, phi_star: &FractionalMatching) -> Result<(), String> {
    let map = project_component(b).map_err(|e| e.to_string())?;
    let blown_comps = mono_components(b.blown());
    let base_comps = mono_components(b.base());
    for f in phi_star.support() {
        let e = b.project(f).ok_or("support edge without projection")?;
        ensure(phi.get(&e) > Rational::zero(), || format!("{e:?} missing from the base support"))?;
        let from = component_of(b.blown(), &blown_comps, f);
        let to = component_of(b.base(), &base_comps, &e);
        ensure(map[&from] == to, || format!("{f:?} lands in the wrong component"))?;
    }
    Ok(())
}

/// A third on every triple of a random 4-set, plus a greedy matching on the rest.
fn spread_matching(g: &ColoredHypergraph, seed: u64) -> FractionalMatching {
    let n = g.n() as Vertex;
    let quad: Vec<Vertex> = (0..4).map(|i| (seed as Vertex + i) % n).collect();
    let mut weights = BTreeMap::new();
    for_each_subset(&quad, 3, |s| {
        weights.insert(Edge::from(s), ratio(1, 3));
    });
    let rest: Vec<usize> = (0..g.base().len()).filter(|&id| g.base().edge(id).vertices().iter().all(|v| !quad.contains(v))).collect();
    for e in maximal_matching_greedy(g.base(), Some(&rest), seed).edges() {
        weights.insert(e.clone(), Rational::one());
    }
    FractionalMatching::new(3, (0..n).collect(), weights).unwrap()
}

fn blowup_round_trip() -> Check {
    let mut checked = 0;
    for seed in 0..50u64 {
        let n = 4 + (seed % 5) as usize;
        let g = random_colored_complete(3, n, &ratio(1, 2), seed).unwrap();
        let phi = spread_matching(&g, seed);
        for r in [2usize, 3] {
            let b = Blowup::build(&g, r).unwrap();
            let rr = int(r as u128);
            let phi_star = blowup_matching_from_fractional(&b, &phi, 3).map_err(|e| e.to_string())?;
            ensure(phi_star.weight() == &rr * phi.weight(), || format!("lift weight, seed {seed}, r {r}"))?;
            ensure(phi.is_r_fractional(3 * r as i64).unwrap() && phi_star.is_r_fractional(3).unwrap(), || {
                format!("lift fractionality, seed {seed}, r {r}")
            })?;
            phi_star.validate_in(b.blown().base()).map_err(|e| e.to_string())?;
            supports_follow_components(&b, &phi, &phi_star)?;
            let back = fractional_from_blowup_matching(&b, &phi_star, 3).map_err(|e| e.to_string())?;
            ensure(back.weights() == phi.weights(), || format!("round trip differs, seed {seed}, r {r}"))?;

            let m_star = maximal_matching_greedy(b.blown().base(), None, seed);
            let star = FractionalMatching::induced(&m_star);
            let down = fractional_from_blowup_matching(&b, &star, 1).map_err(|e| e.to_string())?;
            ensure(star.weight() == &rr * down.weight(), || format!("projection weight, seed {seed}, r {r}"))?;
            ensure(down.is_r_fractional(r as i64).unwrap(), || format!("projection fractionality, seed {seed}"))?;
            down.validate_in(g.base()).map_err(|e| e.to_string())?;
            supports_follow_components(&b, &down, &star)?;
            checked += 1;
        }
    }
    Ok(format!("{checked} instance pairs, both directions exact"))
}

fn blowup_density() -> Check {
    let eps = ratio(1, 10);
    let mut passed = 0;
    for seed in 0..20 {
        let h = random_dense(3, 12, &eps, seed).map_err(|e| e.to_string())?;
        ensure(is_dense(&h, &(Rational::one() - &eps), &eps).passes, || format!("base {seed} not dense"))?;
        let g = ColoredHypergraph::monochromatic(h, Color::Red);
        let b = Blowup::build(&g, 2).unwrap();
        let report = density_of_blowup(&b, &eps, &eps);
        ensure(report.passes, || format!("seed {seed}: {:?}", report.per_level))?;
        passed += 1;
    }
    Ok(format!("{passed}/20 blow-ups dense at (4/5, 1/5)"))
}

fn kruskal_katona_census() -> Check {
    for seed in 0..10_000u64 {
        let p = ratio((seed % 20) as i64 + 1, 21);
        let h = random_hypergraph(3, 7, &p, seed).unwrap();
        let report = kk_bound_check(&h);
        ensure(report.rhs_ok, || format!("seed {seed}: {report:?}"))?;
    }
    Ok("10000 graphs, zero failures".into())
}

fn large_component_census() -> Check {
    let mut tested = 0;
    let mut seed = 0u64;
    while tested < 1000 {
        let p = ratio((seed % 25) as i64 + 1, 26);
        let h = random_hypergraph(3, 15, &p, seed).unwrap();
        seed += 1;
        if h.is_empty() {
            continue;
        }
        let alpha = int(h.len() as u128) / int(455);
        let found = large_tight_component(&h, &alpha).map_err(|e| e.to_string())?;
        ensure(found.bound_ok, || format!("seed {}: {found:?}", seed - 1))?;
        tested += 1;
    }
    Ok(format!("{tested} graphs, zero failures"))
}

fn initial_matching_behaviour() -> Check {
    let eps = ratio(1, 100);
    let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 9).unwrap(), Color::Red);
    let init = initial_component_matching(&g, &eps, 0).map_err(|e| e.to_string())?;
    ensure(init.matching.len() == 3, || format!("size {} on K_9", init.matching.len()))?;
    ensure(init.component == ComponentId { color: Color::Red, index: 0 }, || "not the red component".into())?;
    for seed in 0..100 {
        let g = random_colored_complete(3, 12, &ratio(1, 2), seed).unwrap();
        let comps = mono_components(&g);
        let init = initial_component_matching(&g, &eps, seed).map_err(|e| e.to_string())?;
        init.matching.validate_in(g.base()).map_err(|e| format!("seed {seed}: {e}"))?;
        let phi = FractionalMatching::induced(&init.matching);
        ensure(phi.is_confined(g.base(), &comps, &[init.component]), || format!("seed {seed} not confined"))?;
    }
    Ok("K_9 size 3; 100 colourings of K_12 revalidated".into())
}

fn extremal_verification() -> Check {
    let mut parts = Vec::new();
    for (i, vertices, length) in [(0usize, 6usize, 6usize), (1, 10, 7)] {
        let inst = extremal_coloring(3, 2, i).unwrap();
        ensure(inst.vertex_count == vertices && inst.cycle_length() == length, || format!("shape of instance {i}"))?;
        let start = Instant::now();
        let report = verify_extremal(&inst, SearchOptions::default()).map_err(|e| e.to_string())?;
        ensure(report.mono_cycle.is_none(), || format!("C_{length} found: {:?}", report.mono_cycle))?;
        ensure(report.parity_rule_holds, || "parity rule broken".into())?;
        if i == 0 {
            ensure(start.elapsed() < Duration::from_secs(1), || "exhaustive search over 1 s".into())?;
        }
        parts.push(format!("no C_{length} on {vertices} vertices ({} nodes)", report.nodes));
    }
    Ok(parts.join(", "))
}

fn ramsey_values() -> Check {
    let mut parts = Vec::new();
    for m in [3usize, 4] {
        let result = ramsey_search(Shape::Path, 3, m, 6, RamseyOptions::default()).map_err(|e| e.to_string())?;
        ensure(result.value == Some(m), || format!("r(P_{m}) reported as {:?}", result.value))?;
        let w = &result.witness_below;
        ensure(w.n() == m - 1, || format!("witness on {} vertices", w.n()))?;
        let outcome = contains_mono_copy(w, Shape::Path, m, SearchOptions::default()).unwrap();
        ensure(matches!(outcome, SearchOutcome::Absent { .. }), || "witness contains a copy".into())?;
        parts.push(format!("r(P_{m}) = {m}"));
    }
    Ok(parts.join(", "))
}

/// Every colouring of `K_4^(3)`, no symmetry reduction: the minimum over
/// colourings of the best single-component LP optimum.
fn naive_mu() -> Rational {
    let base = Hypergraph::complete(3, 4).unwrap();
    let mut best: Option<Rational> = None;
    for mask in 0..(1u32 << base.len()) {
        let colors = (0..base.len()).map(|i| if mask >> i & 1 == 1 { Color::Red } else { Color::Blue }).collect();
        let g = ColoredHypergraph::new(base.clone(), colors).unwrap();
        let comps = mono_components(&g);
        let value = comps
            .all_ids()
            .into_iter()
            .map(|c| max_fractional_confined(&g, &comps, &[c], DEFAULT_LP_CAP).unwrap().weight())
            .max()
            .unwrap();
        best = Some(best.map_or(value.clone(), |b: Rational| b.min(value)));
    }
    best.unwrap()
}

fn mu_sanity() -> Check {
    let result = mu_exact(3, 4, &ratio(1, 6), MuMode::Single, MuOptions::default()).map_err(|e| e.to_string())?;
    let oracle = naive_mu();
    ensure(result.value == oracle, || format!("mu {} against oracle {oracle}", result.value))?;
    let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 6).unwrap(), Color::Red);
    let comps = mono_components(&g);
    let red = ComponentId { color: Color::Red, index: 0 };
    let phi = max_fractional_confined(&g, &comps, &[red], DEFAULT_LP_CAP).map_err(|e| e.to_string())?;
    ensure(phi.weight() == int(2), || format!("K_6 optimum {}", phi.weight()))?;
    Ok(format!("mu(3, 4) = {} matches the oracle; K_6 optimum 2", result.value))
}

fn revalidate(g: &ColoredHypergraph, cfg: &PipelineConfig, result: &PipelineResult, claims: &mut Vec<Rational>) -> Result<(), String> {
    let comps = mono_components(g);
    let allowed: Vec<ComponentId> = result.r_id.into_iter().chain(result.b_id).collect();
    for phi in [&result.phi1, &result.phi2] {
        phi.validate_in(g.base()).map_err(|e| e.to_string())?;
        ensure(phi.is_confined(g.base(), &comps, &allowed), || "not confined".into())?;
        if let Some(w) = phi.min_positive_weight() {
            ensure(w >= &cfg.beta, || format!("weight {w} under the floor"))?;
        }
    }
    if result.status == PipelineStatus::Inconclusive {
        let archive = result.archive.as_ref().ok_or("inconclusive without an archive")?;
        let replay = replay_archive(g, cfg, archive).map_err(|e| e.to_string())?;
        ensure(replay.consistent, || format!("archive does not replay: {archive:?}"))?;
    }
    claims.extend(result.claim_weights.iter().cloned());
    Ok(())
}

fn parity(n: usize, x: u32) -> ColoredHypergraph {
    ColoredHypergraph::from_rule(Hypergraph::complete(3, n).unwrap(), |e| {
        if e.vertices().iter().filter(|&&v| v < x).count() % 2 == 0 {
            Color::Red
        } else {
            Color::Blue
        }
    })
}

fn pipeline_suite() -> Check {
    let cfg = PipelineConfig::defaults(3);
    let g = ColoredHypergraph::monochromatic(Hypergraph::complete(3, 30).unwrap(), Color::Red);
    let result = run_pipeline(&g, &cfg).map_err(|e| e.to_string())?;
    let red = ComponentId { color: Color::Red, index: 0 };
    let comps = mono_components(&g);
    ensure(result.phi1 == result.phi2 && result.phi1_weight == int(10), || "all-red weights".into())?;
    ensure(result.phi1.is_confined(g.base(), &comps, &[red]), || "all-red confinement".into())?;
    ensure(result.guarantees.phi1_target && result.guarantees.phi2_target, || "all-red guarantees".into())?;

    let mut claims = Vec::new();
    let mut statuses: BTreeMap<String, usize> = BTreeMap::new();
    for seed in 0..50 {
        let g = random_colored_complete(3, 40, &ratio(1, 2), seed).unwrap();
        let cfg = PipelineConfig { seed, ..cfg.clone() };
        let result = run_pipeline(&g, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        revalidate(&g, &cfg, &result, &mut claims).map_err(|e| format!("seed {seed}: {e}"))?;
        *statuses.entry(format!("{:?}", result.status)).or_default() += 1;
    }
    // Random colourings finish at the initial matching; these starts drive every increment.
    for (n, x) in [(30usize, 15u32), (40, 20)] {
        let g = parity(n, x);
        let comps = mono_components(&g);
        for size in 1..(x / 2) {
            let m = Matching::new(3, (0..size).map(|i| Edge::from([2 * i, 2 * i + 1, x + i])).collect()).unwrap();
            let r = component_of(&g, &comps, &m.edges()[0]);
            let result = run_pipeline_from(&g, &cfg, &m, r).map_err(|e| e.to_string())?;
            revalidate(&g, &cfg, &result, &mut claims)?;
        }
    }
    let floor = int(2) + ratio(1, 3);
    ensure(claims.iter().all(|w| w >= &floor), || "claim below 2 + 1/3".into())?;
    ensure(!claims.is_empty(), || "no claim was exercised".into())?;
    Ok(format!("K_30 weight 10; random K_40 statuses {statuses:?}; {} claims all >= 7/3", claims.len()))
}

fn structure_census() -> Check {
    let mut verdicts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut archive = Vec::new();
    for seed in 0..100u64 {
        let reversed = seed % 2 == 1;
        let p = if reversed { ratio(1, 50) } else { ratio(49, 50) };
        let g = random_colored_complete(3, 20, &p, seed).unwrap();
        let comps = mono_components(&g);
        let mut sampled = 0;
        let mut draw = 0u64;
        while sampled < 10 && draw < 100 {
            let case_seed = seed * 1000 + draw;
            draw += 1;
            let Some(case) = sample_structure_case(&g, &comps, reversed, 6, case_seed) else {
                continue;
            };
            let verdict = case.check(&g, &comps).map_err(|e| e.to_string())?;
            if let Verdict::PreconditionFailed { .. } = verdict {
                continue;
            }
            *verdicts.entry(verdict.label()).or_default() += 1;
            if verdict == Verdict::Violated {
                archive.push((seed, serde_json::to_string(&case).unwrap()));
            }
            sampled += 1;
        }
        ensure(sampled == 10, || format!("colouring {seed}: only {sampled} valid cases"))?;
    }
    for (seed, stored) in &archive {
        let reversed = seed % 2 == 1;
        let p = if reversed { ratio(1, 50) } else { ratio(49, 50) };
        let g = random_colored_complete(3, 20, &p, *seed).unwrap();
        let case: tightram_core::tight::StructureCase = serde_json::from_str(stored).unwrap();
        let again = case.check(&g, &mono_components(&g)).map_err(|e| e.to_string())?;
        ensure(again == Verdict::Violated, || format!("colouring {seed} does not replay"))?;
    }
    let total: usize = verdicts.values().sum();
    let holds = verdicts.get("holds").copied().unwrap_or(0);
    Ok(format!(
        "{verdicts:?}, holds rate {:.3}, {} violations replayed",
        holds as f64 / total as f64,
        archive.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("blow-up round trip", blowup_round_trip, 60),
        ("blow-up density", blowup_density, 60),
        ("shadow census", kruskal_katona_census, 30),
        ("large component census", large_component_census, 60),
        ("initial matching", initial_matching_behaviour, 30),
        ("extremal colourings", extremal_verification, 60),
        ("exact Ramsey values", ramsey_values, 60),
        ("mu sanity", mu_sanity, 60),
        ("pipeline suite", pipeline_suite, 600),
        ("structure census", structure_census, 300),
    ];
    let mut failed = Vec::new();
    for (number, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => Err(format!("{detail}; over the {limit} s limit")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("[PASS] {:>2} {name} ({:.2?}): {detail}", number + 1, elapsed),
            Err(why) => {
                println!("[FAIL] {:>2} {name} ({:.2?}): {why}", number + 1, elapsed);
                failed.push(number + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
