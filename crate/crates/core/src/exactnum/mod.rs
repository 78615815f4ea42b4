//! Scalars for the three computation models: exact rationals, real algebraic
//! numbers in a fixed number field, and dyadic oracles.
//!
//! A computation picks one backend and stays in it; the exact backends decide
//! every sign, the oracle backend can only escalate precision and may come
//! back with [`Sign::Indeterminate`].

mod field;
mod interval;
mod oracle;
mod poly;
mod seminorm;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use field::{AlgebraicNumber, NumberField};
pub use interval::Interval;
pub use oracle::{DemoConstant, Dyadic, DyadicOracle, Escalation, EscalationRow, DEFAULT_MAX_PRECISION};
pub use poly::Poly;
pub use seminorm::{log_measure, rational_seminorm, seminorm};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),
    #[error("algebraic operands live in different number fields")]
    FieldMismatch,
    #[error("comparison unresolved at precision 2^-{precision}")]
    Indeterminate { precision: u32 },
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("refinement width must be positive")]
    NonPositiveWidth,
    #[error("seminorm must be at least 1")]
    ZeroSeminorm,
    #[error("operation requires an exact backend")]
    ExactBackendRequired,
    #[error("square root of a negative number")]
    NegativeRadicand,
}

/// Sign of a scalar. Exact backends never produce `Indeterminate`; the
/// oracle backend never produces `Zero`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    /// No certificate up to the given precision index.
    Indeterminate(u32),
}

impl Sign {
    fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    /// Turns an indeterminate sign into an unresolved-comparison error.
    pub fn resolved(self) -> Result<Ordering, NumError> {
        match self {
            Sign::Negative => Ok(Ordering::Less),
            Sign::Zero => Ok(Ordering::Equal),
            Sign::Positive => Ok(Ordering::Greater),
            Sign::Indeterminate(precision) => Err(NumError::Indeterminate { precision }),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            s => s,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Negative => write!(f, "negative"),
            Sign::Zero => write!(f, "zero"),
            Sign::Positive => write!(f, "positive"),
            Sign::Indeterminate(p) => write!(f, "indeterminate@{p}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Backend {
    Rational,
    Algebraic,
    Interval,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        self != Backend::Interval
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Algebraic => "algebraic",
            Backend::Interval => "interval",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Backend::Rational),
            "algebraic" => Ok(Backend::Algebraic),
            "interval" | "oracle" => Ok(Backend::Interval),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
    Oracle(DyadicOracle),
}

macro_rules! binary_op {
    ($name:ident, $exact:ident, $oracle:ident) => {
        pub fn $name(&self, other: &Scalar) -> Result<Scalar, NumError> {
            match (self, other) {
                (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.$exact(b))),
                (Scalar::Algebraic(a), Scalar::Algebraic(b)) => Ok(Scalar::Algebraic(a.$name(b)?)),
                (Scalar::Oracle(a), Scalar::Oracle(b)) => Ok(Scalar::Oracle(a.$oracle(b))),
                (a, b) => Err(NumError::BackendMismatch(a.backend(), b.backend())),
            }
        }
    };
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::rational(n, 1)
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Algebraic(_) => Backend::Algebraic,
            Scalar::Oracle(_) => Backend::Interval,
        }
    }

    /// Embeds a rational into this scalar's backend (same field or precision
    /// ceiling).
    pub fn embed(&self, r: BigRational) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(r),
            Scalar::Algebraic(a) => Scalar::Algebraic(AlgebraicNumber::from_rational(a.field().clone(), r)),
            Scalar::Oracle(o) => Scalar::Oracle(DyadicOracle::from_rational(r).with_max_precision(o.max_precision())),
        }
    }

    pub fn embed_int(&self, n: i64) -> Scalar {
        self.embed(BigRational::from_integer(BigInt::from(n)))
    }

    binary_op!(add, add, add);
    binary_op!(sub, sub, sub);
    binary_op!(mul, mul, mul);

    pub fn div(&self, other: &Scalar) -> Result<Scalar, NumError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                if b.is_zero() {
                    Err(NumError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(a / b))
                }
            }
            (Scalar::Algebraic(a), Scalar::Algebraic(b)) => Ok(Scalar::Algebraic(a.div(b)?)),
            (Scalar::Oracle(a), Scalar::Oracle(b)) => Ok(Scalar::Oracle(a.div(b)?)),
            (a, b) => Err(NumError::BackendMismatch(a.backend(), b.backend())),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Algebraic(a) => Scalar::Algebraic(a.neg()),
            Scalar::Oracle(a) => Scalar::Oracle(a.neg()),
        }
    }

    pub fn square(&self) -> Scalar {
        self.mul(self).expect("same backend")
    }

    /// Sign. Oracle scalars escalate up to their own precision ceiling.
    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Rational(a) => Sign::of_ordering(a.cmp(&BigRational::zero())),
            Scalar::Algebraic(a) => a.sign(),
            Scalar::Oracle(o) => o.sign(),
        }
    }

    /// Exact sign or an unresolved-comparison error.
    pub fn cmp_zero(&self) -> Result<Ordering, NumError> {
        self.sign().resolved()
    }

    pub fn compare(&self, other: &Scalar) -> Result<Ordering, NumError> {
        self.sub(other)?.cmp_zero()
    }

    pub fn is_zero(&self) -> Result<bool, NumError> {
        Ok(self.cmp_zero()? == Ordering::Equal)
    }

    pub fn abs(&self) -> Result<Scalar, NumError> {
        Ok(match self.cmp_zero()? {
            Ordering::Less => self.neg(),
            _ => self.clone(),
        })
    }

    /// The rational value when it is known symbolically.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(a) => Some(a.clone()),
            Scalar::Algebraic(a) => a.as_rational(),
            Scalar::Oracle(_) => None,
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            Scalar::Rational(a) => a.to_f64().unwrap_or(f64::NAN),
            Scalar::Algebraic(a) => a.approx_f64(),
            Scalar::Oracle(o) => o.approx_f64(),
        }
    }

    /// A rational `u >= self`, tight for rationals.
    pub fn upper_bound(&self) -> BigRational {
        match self {
            Scalar::Rational(a) => a.clone(),
            Scalar::Algebraic(a) => {
                let w = BigRational::new(1.into(), 1024.into());
                a.refine(&w).expect("positive width").isolating_interval().hi().clone()
            }
            Scalar::Oracle(o) => o.upper_bound(),
        }
    }

    /// Degree of the ambient number field (1 for rationals and oracles).
    pub fn field_degree(&self) -> usize {
        match self {
            Scalar::Algebraic(a) => a.field().degree(),
            _ => 1,
        }
    }

    /// Seminorm of the value's representation: `|p| + q` for a rational
    /// `p/q`, the polynomial seminorm for an algebraic representation.
    pub fn seminorm(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(a) => Some(rational_seminorm(a)),
            Scalar::Algebraic(a) => Some(seminorm(a.representation())),
            Scalar::Oracle(_) => None,
        }
    }

    /// Structural equality (same backend, same representation). Value
    /// equality goes through `compare`.
    pub fn same_repr(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Algebraic(a), Scalar::Algebraic(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Algebraic(a) => write!(f, "{a}"),
            Scalar::Oracle(o) => write!(f, "{o}"),
        }
    }
}

/// Parses `n`, `p/q` or a plain decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().ok()?,
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let num = int_part * &den + frac.parse::<BigInt>().ok()?;
        let r = BigRational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Formats a rational as `p/q` (or `n`), the inverse of `parse_rational`.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_sum() {
        let s = Scalar::rational(1, 3).add(&Scalar::rational(1, 6)).unwrap();
        assert!(s.same_repr(&Scalar::rational(1, 2)));
        assert_eq!(Scalar::rational(-7, 2).sign(), Sign::Negative);
    }

    #[test]
    fn mismatch_and_zero_division() {
        let o = Scalar::Oracle(DyadicOracle::from_rational(r(1, 2)));
        assert!(matches!(
            Scalar::integer(1).add(&o),
            Err(NumError::BackendMismatch(Backend::Rational, Backend::Interval))
        ));
        assert_eq!(Scalar::integer(1).div(&Scalar::integer(0)).unwrap_err(), NumError::DivisionByZero);
    }

    #[test]
    fn algebraic_signs() {
        let k = Arc::new(NumberField::new(Poly::from_ints(&[-2, 0, 1]), Interval::new(r(1, 1), r(3, 2))).unwrap());
        let g = Scalar::Algebraic(AlgebraicNumber::generator(k));
        assert_eq!(g.square().sub(&g.embed_int(2)).unwrap().sign(), Sign::Zero);
        assert_eq!(g.sub(&g.embed_int(1)).unwrap().sign(), Sign::Positive);
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("3/6"), Some(r(1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(r(-5, 4)));
        assert_eq!(parse_rational("-0.5"), Some(r(-1, 2)));
        assert_eq!(parse_rational("12"), Some(r(12, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }
}
