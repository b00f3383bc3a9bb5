use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use roughlim_core::density::{density_estimate, estimate_family, is_perfect_square, prefix_count, DEFAULT_BUDGET};
use roughlim_core::{DensityConfig, PrefixSchedule};
use std::hint::black_box;

fn prefix_counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("prefix_count");
    for n in [128u64, 256, 512] {
        g.bench_with_input(BenchmarkId::new("square_pairs", n), &n, |b, &n| {
            b.iter(|| prefix_count(|i, j| is_perfect_square(i) && is_perfect_square(j), black_box(n), n, DEFAULT_BUDGET))
        });
    }
    g.finish();
}

fn schedules(c: &mut Criterion) {
    let schedule = PrefixSchedule::default();
    let cfg = DensityConfig::default();
    c.bench_function("density_estimate/parity", |b| {
        b.iter(|| density_estimate(|i, j| (i + j) % 2 == 0, black_box(&schedule), &cfg))
    });
    c.bench_function("estimate_family/15_sets", |b| {
        b.iter(|| {
            estimate_family(black_box(&schedule), &cfg, 15, |i, j, hits| {
                let d = ((i * 31 + j * 17) % 100) as usize;
                for (k, h) in hits.iter_mut().enumerate() {
                    *h = d < 5 * (k + 1);
                }
            })
        })
    });
}

criterion_group!(benches, prefix_counting, schedules);
criterion_main!(benches);
