use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use echcomb::chain_map::{canonical_companion, verify_with};
use echcomb::complex::Context;
use echcomb::lattice::int;
use echcomb::par::Exec;
use echcomb::random::{self, fixtures};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn generators(c: &mut Criterion) {
    let ctx = Context::new(fixtures::s3_convex_domain(int(80))).unwrap();
    let mut g = c.benchmark_group("generators/s3-80");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| ctx.generators_with(exec, ctx.zero_class(), ctx.profile.bound))
        });
    }
    g.finish();
}

fn boundary_matrix(c: &mut Criterion) {
    let lens = Context::new(fixtures::s3_convex_domain(int(80))).unwrap();
    let lens_gens = lens.generators(lens.zero_class(), lens.profile.bound);
    let mut rng = random::rng(3);
    let circle = Context::new(random::circle_profile(&mut rng, 1, 8)).unwrap();
    let circle_gens = circle
        .generators_by_class(circle.profile.bound)
        .into_values()
        .max_by_key(Vec::len)
        .unwrap_or_default();
    for (label, ctx, gens) in [("s3-80", &lens, &lens_gens), ("circle", &circle, &circle_gens)] {
        let mut g = c.benchmark_group(format!("boundary_matrix/{label}"));
        g.sample_size(10);
        for (name, exec) in MODES {
            g.bench_function(BenchmarkId::from_parameter(name), |b| {
                b.iter(|| ctx.boundary_matrix_with(exec, black_box(gens)).unwrap())
            });
        }
        g.finish();
    }
}

fn chain_map(c: &mut Criterion) {
    let cp = canonical_companion(&fixtures::s3_convex_domain(int(80))).unwrap();
    let mut g = c.benchmark_group("chain_map/s3-80");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_with(&cp, int(80), exec, false).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, generators, boundary_matrix, chain_map);
criterion_main!(benches);
