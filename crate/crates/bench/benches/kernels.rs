use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use rispace::mazya::{model_profile, omega_volume, thm31_sandwich, MazyaParams};
use rispace::operators::copson_steps;
use rispace::optimality::thm38_pipeline;
use rispace::rearrange::rearrange_steps;
use rispace::spaces::{luxemburg_steps, norm_star};
use rispace::{Func, FundamentalFn, PowLogFn, SpaceSpec, YoungFn};
use rispace_bench::{grid, scrambled};

fn rearrangement(c: &mut Criterion) {
    let mut g = c.benchmark_group("rearrange");
    for cells in [64, 1024, 16384] {
        let f = scrambled(cells);
        g.bench_with_input(BenchmarkId::from_parameter(cells), &f, |b, f| b.iter(|| rearrange_steps(black_box(f))));
    }
    g.finish();
}

fn norms(c: &mut Criterion) {
    let grid = grid(64);
    let f = scrambled(1024);
    let star = Func::Step(f.clone()).star(&grid);
    let a = YoungFn::exponential(2.0).unwrap();
    c.bench_function("luxemburg/expL", |b| b.iter(|| luxemburg_steps(&a, black_box(&f))));
    let lz = SpaceSpec::LorentzZygmund { p: f64::INFINITY, q: 2.0, zeta: -1.0 };
    c.bench_function("norm/LZ", |b| b.iter(|| norm_star(&lz, black_box(&star), &grid)));
}

fn operators(c: &mut Criterion) {
    let grid = grid(64);
    let f = scrambled(1024).rearranged();
    c.bench_function("copson/steps", |b| b.iter(|| copson_steps(0.5, black_box(&f), &grid)));
}

fn geometry(c: &mut Criterion) {
    let p = MazyaParams::new(3, 0.75, 1).unwrap();
    c.bench_function("omega_volume", |b| b.iter(|| omega_volume(black_box(&p))));
    let grid = grid(32);
    let phi = FundamentalFn::from_powlog(PowLogFn::atom(1.0, 0.0, -0.5)).unwrap();
    let iso = model_profile(0.5).unwrap();
    c.bench_function("sandwich", |b| b.iter(|| thm31_sandwich(&phi, &iso, black_box(&grid)).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    g.sample_size(10);
    g.bench_function("m1_alpha_half", |b| b.iter(|| thm38_pipeline(1, 0.5, 2.0, None, 16).unwrap()));
    g.finish();
}

criterion_group!(benches, rearrangement, norms, operators, geometry, pipeline);
criterion_main!(benches);
