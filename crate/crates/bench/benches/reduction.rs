use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gmdisc::gmengine::{run, StepBudget};
use gmdisc_bench::{chain, to_oracle};
use std::hint::black_box;

fn chains(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduction/chain");
    for k in [1u32, 4, 16, 32] {
        let (a, b) = chain(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |bench, _| {
            bench.iter(|| run(black_box(&a), black_box(&b), StepBudget::default()).unwrap())
        });
    }
    group.finish();
}

fn interval(c: &mut Criterion) {
    let (a, b) = chain(4);
    let (a, b) = (to_oracle(&a), to_oracle(&b));
    c.bench_function("reduction/interval chain 4", |bench| {
        bench.iter(|| run(black_box(&a), black_box(&b), StepBudget::default()).unwrap())
    });
}

criterion_group!(benches, chains, interval);
criterion_main!(benches);
