use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pacircle::ergostat::{product_birkhoff_batch, OrbitBudget, ProductFunction};
use pacircle::perturb::{sample_certified_map, SampleConfig};
use pacircle::rational::ratio;
use pacircle::rotor::{growth_check, random_arc, rotation_periodic_set};
use pacircle::{examples, par, Arc, CirclePoint, Strategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [Strategy; 2] = [Strategy::Sequential, Strategy::Parallel];

fn label(s: Strategy) -> &'static str {
    match s {
        Strategy::Sequential => "sequential",
        Strategy::Parallel => "parallel",
    }
}

fn rotation_set(c: &mut Criterion) {
    let f = examples::inv3();
    let mut g = c.benchmark_group("rotation_periodic_set");
    for s in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(label(s)), &s, |b, &s| {
            b.iter(|| rotation_periodic_set(black_box(&f), 8, s).unwrap())
        });
    }
    g.finish();
}

fn product_batch(c: &mut Criterion) {
    let f = examples::slope_five();
    let h: ProductFunction = "cos1*cos1".parse().unwrap();
    let starts: Vec<_> = (1..=32)
        .map(|k| {
            (
                CirclePoint::new(ratio(k, 97)),
                CirclePoint::new(ratio(k, 89)),
            )
        })
        .collect();
    let mut g = c.benchmark_group("product_birkhoff_batch");
    for s in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(label(s)), &s, |b, &s| {
            b.iter(|| {
                product_birkhoff_batch(
                    &f,
                    &h,
                    black_box(&starts),
                    10_000,
                    OrbitBudget::default(),
                    s,
                )
            })
        });
    }
    g.finish();
}

fn growth_sweep(c: &mut Criterion) {
    let h = sample_certified_map(11, 3, &SampleConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let arcs: Vec<Arc> = (0..256).map(|_| random_arc(&mut rng)).collect();
    let mut g = c.benchmark_group("growth_sweep");
    g.sample_size(20);
    for s in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(label(s)), &s, |b, &s| {
            b.iter(|| par::map(s, black_box(&arcs), |a| growth_check(&h, a)))
        });
    }
    g.finish();
}

criterion_group!(benches, rotation_set, product_batch, growth_sweep);
criterion_main!(benches);
