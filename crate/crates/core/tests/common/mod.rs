//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use gmdisc::exactnum::Scalar;
use gmdisc::moebius::{maximal_initial_trace, Mat2};
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::rational(n, d)
}

/// `C diag(μ, 1/μ) C⁻¹` with `C = [[x, y], [1, 1]]`: a hyperbolic with
/// fixed points `x` and `y`, attracting at `x` when `μ > 1`.
pub fn hyperbolic_with_fixed_points(x: &Scalar, y: &Scalar, mu: &Scalar) -> Mat2 {
    let one = x.embed_int(1);
    Mat2::diagonal(mu.clone()).unwrap().conjugate([x, y, &one, &one]).unwrap()
}

pub fn small_rational<R: Rng>(r: &mut R, num: i64, den: i64) -> Scalar {
    let n = r.gen_range(-num..=num);
    let d = r.gen_range(1..=den);
    q(n, d)
}

/// Multiplier `μ > 1` with small height.
pub fn multiplier<R: Rng>(r: &mut R) -> Scalar {
    let d = r.gen_range(1..=4);
    let n = r.gen_range(d + 1..=4 * d + 3);
    q(n, d)
}

/// Four distinct rationals, sorted.
fn four_points<R: Rng>(r: &mut R) -> [BigRational; 4] {
    loop {
        let mut v: Vec<BigRational> = (0..4)
            .map(|_| small_rational(r, 12, 3).as_rational().unwrap())
            .collect();
        v.sort();
        v.dedup();
        if v.len() == 4 {
            return [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
        }
    }
}

/// A hyperbolic pair with disjoint axes and random orientations.
pub fn disjoint_pair<R: Rng>(r: &mut R) -> (Mat2, Mat2) {
    let p = four_points(r);
    // Either side by side (p0 p1)(p2 p3) or nested (p0 p3)(p1 p2).
    let (e1, e2) = if r.gen_bool(0.5) {
        ((0, 1), (2, 3))
    } else {
        ((0, 3), (1, 2))
    };
    let s = |i: usize| Scalar::Rational(p[i].clone());
    let mut ends = [(s(e1.0), s(e1.1)), (s(e2.0), s(e2.1))];
    for e in ends.iter_mut() {
        if r.gen_bool(0.5) {
            std::mem::swap(&mut e.0, &mut e.1);
        }
    }
    let a = hyperbolic_with_fixed_points(&ends[0].0, &ends[0].1, &multiplier(r));
    let b = hyperbolic_with_fixed_points(&ends[1].0, &ends[1].1, &multiplier(r));
    (a, b)
}

/// A random determinant-one rational matrix.
pub fn random_sl2<R: Rng>(r: &mut R) -> Mat2 {
    loop {
        let a = small_rational(r, 6, 3);
        let b = small_rational(r, 6, 3);
        let c = small_rational(r, 6, 3);
        if a.is_zero().unwrap() {
            continue;
        }
        // d = (1 + bc) / a
        let d = q(1, 1).add(&b.mul(&c).unwrap()).unwrap().div(&a).unwrap();
        return Mat2::new(a, b, c, d).unwrap();
    }
}

pub fn trace_at_most(a: &Mat2, b: &Mat2, bound: i64) -> bool {
    let t = maximal_initial_trace(a, b).unwrap();
    t.compare(&q(bound, 1)).unwrap() != std::cmp::Ordering::Greater
}

/// Runs Nielsen moves backwards from a coherently oriented disjoint pair:
/// `(X, Y) -> (XY, Y)` or `(YX, X)`, `k` times. The result reduces back
/// through about `k` forward steps.
pub fn reverse_constructed<R: Rng>(r: &mut R, k: usize) -> (Mat2, Mat2) {
    loop {
        let (x, y) = disjoint_pair(r);
        let Ok(o) = gmdisc::moebius::coherently_orient(&x, &y) else {
            continue;
        };
        let (mut a, mut b) = (o.first, o.second);
        for _ in 0..k {
            if r.gen_bool(0.5) {
                a = a.mul(&b).unwrap().normalized().unwrap();
            } else {
                let next = b.mul(&a).unwrap().normalized().unwrap();
                b = std::mem::replace(&mut a, next);
            }
        }
        return (a, b);
    }
}

pub fn to_array(m: &Mat2) -> oracle::M {
    m.entries().map(|e| e.as_rational().expect("rational entry"))
}

/// `[[a,b],[c,d]]` with rational entries.
pub fn literal(m: &Mat2) -> String {
    let e = m.entries();
    format!("[[{},{}],[{},{}]]", e[0], e[1], e[2], e[3])
}

pub fn parse_literal(s: &str) -> Mat2 {
    let inner: String = s.chars().filter(|c| !matches!(c, '[' | ']' | ' ')).collect();
    let v: Vec<Scalar> = inner
        .split(',')
        .map(|t| Scalar::Rational(gmdisc::exactnum::parse_rational(t).expect("rational literal")))
        .collect();
    let [a, b, c, d]: [Scalar; 4] = v.try_into().expect("four entries");
    Mat2::new(a, b, c, d).unwrap()
}
