use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tightram_core::blowup::blowup_matching_from_fractional;
use tightram_core::hypergraph::random_colored_complete;
use tightram_core::matching::{max_fractional_value, maximal_matching_greedy, mu_exact, MuMode, MuOptions};
use tightram_core::pipeline::{run_pipeline, PipelineConfig};
use tightram_core::rational::ratio;
use tightram_core::search::{extremal_coloring, ramsey_search, verify_extremal, RamseyOptions};
use tightram_core::tight::{mono_components, sample_structure_case, SearchOptions, Shape};
use tightram_core::{Blowup, FractionalMatching};

fn components(c: &mut Criterion) {
    let mut group = c.benchmark_group("mono_components");
    for n in [12usize, 20, 30] {
        let g = random_colored_complete(3, n, &ratio(1, 2), 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| mono_components(black_box(g))));
    }
    group.finish();
}

fn blowups(c: &mut Criterion) {
    let g = random_colored_complete(3, 10, &ratio(1, 2), 2).unwrap();
    c.bench_function("blowup_build_k10_r3", |b| b.iter(|| Blowup::build(black_box(&g), 3).unwrap()));
    let blown = Blowup::build(&g, 3).unwrap();
    let phi = FractionalMatching::induced(&maximal_matching_greedy(g.base(), None, 0));
    c.bench_function("blowup_lift_matching", |b| {
        b.iter(|| blowup_matching_from_fractional(&blown, black_box(&phi), 1).unwrap())
    });
}

fn linear_programs(c: &mut Criterion) {
    let g = random_colored_complete(3, 8, &ratio(1, 2), 3).unwrap();
    c.bench_function("fractional_matching_k8", |b| b.iter(|| max_fractional_value(black_box(g.base())).unwrap()));
    c.bench_function("mu_exact_k3_n5", |b| {
        b.iter(|| mu_exact(3, 5, &ratio(1, 6), MuMode::Single, MuOptions::default()).unwrap())
    });
}

fn searches(c: &mut Criterion) {
    let inst = extremal_coloring(3, 2, 1).unwrap();
    c.bench_function("extremal_no_c7", |b| b.iter(|| verify_extremal(black_box(&inst), SearchOptions::default()).unwrap()));
    c.bench_function("ramsey_p4", |b| {
        b.iter(|| ramsey_search(Shape::Path, 3, 4, 6, RamseyOptions::default()).unwrap())
    });
}

fn structure(c: &mut Criterion) {
    let g = random_colored_complete(3, 20, &ratio(49, 50), 0).unwrap();
    let comps = mono_components(&g);
    let case = sample_structure_case(&g, &comps, false, 6, 0).unwrap();
    c.bench_function("structure_check_k20", |b| b.iter(|| case.check(black_box(&g), &comps).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_pipeline");
    group.sample_size(10);
    for n in [20usize, 30] {
        let g = random_colored_complete(3, n, &ratio(1, 2), 4).unwrap();
        let cfg = PipelineConfig::defaults(3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| run_pipeline(g, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, components, blowups, linear_programs, searches, structure, pipeline);
criterion_main!(benches);
