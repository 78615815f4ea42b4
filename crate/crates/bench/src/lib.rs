//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use gmdisc::exactnum::{AlgebraicNumber, DyadicOracle, Interval, NumberField, Poly, Scalar};
use gmdisc::moebius::Mat2;
use num_rational::BigRational;

/// `C diag(μ, 1/μ) C⁻¹` with `C = [[x, y], [1, 1]]`.
pub fn hyperbolic(x: &Scalar, y: &Scalar, mu: &Scalar) -> Mat2 {
    let one = x.embed_int(1);
    Mat2::diagonal(mu.clone()).unwrap().conjugate([x, y, &one, &one]).unwrap()
}

/// A free pair with side-by-side axes and no reduction steps.
pub fn base_pair() -> (Mat2, Mat2) {
    let q = Scalar::rational;
    (hyperbolic(&q(-3, 1), &q(-1, 1), &q(3, 1)), hyperbolic(&q(4, 1), &q(1, 1), &q(2, 1)))
}

/// `(X Yᵏ, Y)` from the base pair: undoing it takes `k` linear steps.
pub fn chain(k: u32) -> (Mat2, Mat2) {
    let (x, y) = base_pair();
    let mut a = x;
    for _ in 0..k {
        a = a.mul(&y).unwrap();
    }
    (a, y)
}

/// `Q(√2)` with the generator isolated in `[1, 3/2]`.
pub fn sqrt2_field() -> Arc<NumberField> {
    let iv = Interval::new(BigRational::new(1.into(), 1.into()), BigRational::new(3.into(), 2.into()));
    Arc::new(NumberField::new(Poly::from_ints(&[-2, 0, 1]), iv).unwrap())
}

/// `a + b√2`.
pub fn sqrt2_number(a: i64, b: i64) -> Scalar {
    let f = sqrt2_field();
    let r = |n: i64| BigRational::from_integer(n.into());
    Scalar::Algebraic(AlgebraicNumber::new(f, Poly::new(vec![r(a), r(b)])))
}

/// Rational matrix moved into the interval backend.
pub fn to_oracle(m: &Mat2) -> Mat2 {
    let [a, b, c, d] = m
        .entries()
        .map(|s| Scalar::Oracle(DyadicOracle::from_rational(s.as_rational().expect("rational entry"))));
    Mat2::new(a, b, c, d).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use gmdisc::gmengine::{run, StepBudget, Verdict};

    #[test]
    fn chain_lengths() {
        for k in [0, 1, 4, 16] {
            let (a, b) = chain(k);
            let res = run(&a, &b, StepBudget::default()).unwrap();
            assert!(matches!(res.verdict, Verdict::DiscreteFree), "k = {k}: {}", res.verdict);
            assert!(res.state.step_index as u32 >= k, "k = {k}: {} steps", res.state.step_index);
        }
    }
}
