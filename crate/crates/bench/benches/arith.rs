use criterion::{criterion_group, criterion_main, Criterion};
use gmdisc::exactnum::{DyadicOracle, Scalar};
use gmdisc_bench::{chain, sqrt2_number};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::hint::black_box;

fn rational(c: &mut Criterion) {
    let x = Scalar::Rational(BigRational::new(BigInt::from(355), BigInt::from(113)));
    let y = Scalar::Rational(BigRational::new(BigInt::from(-22), BigInt::from(7)));
    c.bench_function("rational mul+add", |b| b.iter(|| black_box(&x).mul(&y).unwrap().add(&x).unwrap()));

    let (a, m) = chain(8);
    c.bench_function("mat2 mul (chain 8)", |b| b.iter(|| black_box(&a).mul(&m).unwrap()));
    c.bench_function("mat2 seminorm (chain 8)", |b| b.iter(|| black_box(&a).seminorm()));
}

fn algebraic(c: &mut Criterion) {
    let x = sqrt2_number(3, 2);
    let y = sqrt2_number(-1, 5);
    c.bench_function("Q(sqrt2) mul", |b| b.iter(|| black_box(&x).mul(&y).unwrap()));
    c.bench_function("Q(sqrt2) div", |b| b.iter(|| black_box(&x).div(&y).unwrap()));
    let z = x.sub(&y).unwrap();
    c.bench_function("Q(sqrt2) sign", |b| b.iter(|| black_box(&z).cmp_zero().unwrap()));
}

fn oracle(c: &mut Criterion) {
    let tiny = DyadicOracle::from_rational(BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40)));
    c.bench_function("oracle sign of 2^-40", |b| b.iter(|| black_box(&tiny).sign_at_precision(64)));
    let zero = DyadicOracle::from_rational(BigRational::from_integer(BigInt::from(0)));
    c.bench_function("oracle zero to 256", |b| b.iter(|| black_box(&zero).sign_at_precision(256)));
}

criterion_group!(benches, rational, algebraic, oracle);
criterion_main!(benches);
