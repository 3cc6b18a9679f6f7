use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wrsp_core::series::{random_element, series};
use wrsp_core::{GroupContext, SeriesKind, Subgroup};

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiply");
    for k in 1..=4 {
        let ctx = GroupContext::new(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        group.bench_function(format!("k{k}"), |b| {
            b.iter_batched(
                || (random_element(&ctx, &mut rng), random_element(&ctx, &mut rng)),
                |(g, h)| black_box(ctx.mul(&g, &h)),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    for k in 1..=3 {
        let ctx = GroupContext::new(k).unwrap();
        let gens = [ctx.x(), ctx.y()];
        group.bench_function(format!("whole_group_k{k}"), |b| b.iter(|| Subgroup::close(&ctx, black_box(&gens))));
    }
    group.finish();
}

fn series_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    group.sample_size(10);
    for k in 2..=3 {
        let ctx = GroupContext::new(k).unwrap();
        for kind in [SeriesKind::Gamma, SeriesKind::LowerP, SeriesKind::Dimension, SeriesKind::MSeries] {
            group.bench_function(format!("{kind}_k{k}"), |b| b.iter(|| series(kind, &ctx).unwrap()));
        }
    }
    group.finish();
}

criterion_group!(benches, multiply, closure, series_bench);
criterion_main!(benches);
