use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ellentuck::ramsey::{ar_n, canonize_arn, induced_relation, pigeonhole, ProjVector};
use ellentuck::{build_w, one_extensions, rank_of, seq_at_rank, Budget, Coloring, FiniteApprox, Rank};

fn wellorder(c: &mut Criterion) {
    let mut g = c.benchmark_group("wellorder");
    for k in [2usize, 3, 4] {
        g.bench_with_input(BenchmarkId::new("rank_round_trip", k), &k, |b, &k| {
            b.iter(|| {
                for r in (0..10_000u64).step_by(97) {
                    let s = seq_at_rank(k, Rank(r));
                    black_box(rank_of(k, &s).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn space(c: &mut Criterion) {
    let mut g = c.benchmark_group("space");
    for n in [100usize, 1000] {
        g.bench_with_input(BenchmarkId::new("build_w3", n), &n, |b, &n| b.iter(|| black_box(build_w(3, n))));
        let w = build_w(3, n);
        g.bench_with_input(BenchmarkId::new("validate_w3", n), &w, |b, w| b.iter(|| black_box(w.approx.validate())));
    }
    g.finish();
}

fn ramsey(c: &mut Criterion) {
    let mut g = c.benchmark_group("ramsey");
    g.sample_size(20);
    let w = build_w(2, 300);
    let a = FiniteApprox::empty(2);
    let parity = Coloring::from_fn(one_extensions(&a, &w), |b| b.nodes()[0].max_index().unwrap() % 2);
    g.bench_function("pigeonhole_w2_len8", |b| {
        b.iter(|| black_box(pigeonhole(&a, &w, &parity, 8, &mut Budget::default()).unwrap()))
    });
    let w3 = build_w(3, 200);
    let domain = ar_n(&w3, 2, &mut Budget::default()).unwrap();
    let r = induced_relation(&ProjVector(vec![2, 3]), &domain);
    g.bench_function("canonize_arn_k3_n2", |b| {
        b.iter(|| black_box(canonize_arn(&r, 3, 2, &w3, 12, &mut Budget::default()).unwrap()))
    });
    g.finish();
}

criterion_group!(benches, wellorder, space, ramsey);
criterion_main!(benches);
