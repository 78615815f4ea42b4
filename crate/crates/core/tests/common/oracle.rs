//! A reference reduction written directly on rational 2×2 arrays. It shares
//! no code with the library beyond `BigRational`, and serves as the oracle
//! the regression corpus was frozen from.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type M = [BigRational; 4];

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn mul(x: &M, y: &M) -> M {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

pub fn inv(x: &M) -> M {
    [x[3].clone(), -&x[1], -&x[2], x[0].clone()]
}

pub fn tr(x: &M) -> BigRational {
    &x[0] + &x[3]
}

fn pos(x: M) -> M {
    if tr(&x).is_negative() {
        x.map(|e| -e)
    } else {
        x
    }
}

fn comm_tr(x: &M, y: &M) -> BigRational {
    tr(&mul(&mul(x, y), &mul(&inv(x), &inv(y))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    DiscreteFree,
    Jorgensen,
    InfiniteElliptic,
    Parabolic,
    FiniteElliptic,
    Elementary,
    Crossing,
    NonHyperbolic,
}

impl Expected {
    pub fn name(&self) -> &'static str {
        match self {
            Expected::DiscreteFree => "discrete-free",
            Expected::Jorgensen => "jorgensen",
            Expected::InfiniteElliptic => "infinite-elliptic",
            Expected::Parabolic => "parabolic",
            Expected::FiniteElliptic => "finite-elliptic",
            Expected::Elementary => "elementary",
            Expected::Crossing => "crossing",
            Expected::NonHyperbolic => "non-hyperbolic",
        }
    }

    pub fn from_name(s: &str) -> Option<Expected> {
        [
            Expected::DiscreteFree,
            Expected::Jorgensen,
            Expected::InfiniteElliptic,
            Expected::Parabolic,
            Expected::FiniteElliptic,
            Expected::Elementary,
            Expected::Crossing,
            Expected::NonHyperbolic,
        ]
        .into_iter()
        .find(|e| e.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub expected: Expected,
    /// `L` / `F` per step.
    pub kinds: String,
}

fn jorgensen(x: &M, y: &M) -> bool {
    let a = (tr(x) * tr(x) - r(4)).abs();
    let b = (comm_tr(x, y) - r(2)).abs();
    a + b < r(1)
}

/// Reference verdict for a hyperbolic-or-not rational pair.
pub fn reduce(a: &M, b: &M, max_steps: usize) -> Outcome {
    let hyperbolic = |m: &M| tr(m).abs() > r(2);
    let done = |e: Expected, kinds: String| Outcome { expected: e, kinds };
    if comm_tr(a, b) == r(2) {
        return done(Expected::Elementary, String::new());
    }
    if !hyperbolic(a) || !hyperbolic(b) {
        return done(Expected::NonHyperbolic, String::new());
    }
    if comm_tr(a, b) < r(2) {
        return done(Expected::Crossing, String::new());
    }
    let (mut x, mut y) = (pos(a.clone()), pos(b.clone()));
    if tr(&x) < tr(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    if tr(&mul(&x, &inv(&y))) > tr(&mul(&x, &y)) {
        y = inv(&y);
    }
    let mut kinds = String::new();
    for _ in 0..max_steps {
        if jorgensen(&x, &y) || jorgensen(&y, &x) {
            return done(Expected::Jorgensen, kinds);
        }
        let c = pos(mul(&x, &inv(&y)));
        let t = tr(&mul(&x, &inv(&y)));
        if t <= r(-2) {
            return done(Expected::DiscreteFree, kinds);
        }
        if t == r(2) {
            return done(Expected::Parabolic, kinds);
        }
        if t.abs() < r(2) {
            let finite = t.is_zero() || t.abs().is_one();
            let e = if finite { Expected::FiniteElliptic } else { Expected::InfiniteElliptic };
            return done(e, kinds);
        }
        if tr(&c) >= tr(&y) {
            kinds.push('L');
            x = c;
        } else {
            kinds.push('F');
            x = std::mem::replace(&mut y, c);
        }
    }
    panic!("reference reduction did not finish in {max_steps} steps");
}
