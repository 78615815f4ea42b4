//! Dyadic oracles: a real `x` is presented only through queries `φ(m)`
//! returning dyadic rationals with `|φ(m) - x| < 2^-m`.
//!
//! Arithmetic builds a DAG of derived oracles. Each node queries its children
//! at an inflated precision chosen so the result keeps the `2^-m` contract,
//! and caches its finest answer so shared subexpressions are evaluated once
//! per precision level.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{NumError, Sign};

pub const DEFAULT_MAX_PRECISION: u32 = 256;

/// `mantissa · 2^-scale`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dyadic {
    mantissa: BigInt,
    scale: u32,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Dyadic { mantissa, scale }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.scale as usize)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn at_scale(&self, scale: u32) -> BigInt {
        if scale >= self.scale {
            &self.mantissa << (scale - self.scale) as usize
        } else {
            let k = (self.scale - scale) as usize;
            let half = BigInt::one() << (k - 1);
            (&self.mantissa + half).div_floor(&(BigInt::one() << k))
        }
    }

    /// Nearest dyadic at `scale` (error at most `2^-(scale+1)`).
    pub fn round_to(&self, scale: u32) -> Dyadic {
        Dyadic::new(self.at_scale(scale), scale)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let s = self.scale.max(other.scale);
        Dyadic::new(self.at_scale(s) + other.at_scale(s), s)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.scale + other.scale)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mantissa, self.scale)
    }

    /// Compares `|self|` against `2^-m`.
    pub fn cmp_abs_pow2(&self, m: u32) -> Ordering {
        let lhs = self.mantissa.abs() << m as usize;
        let rhs = BigInt::one() << self.scale as usize;
        lhs.cmp(&rhs)
    }

    /// Smallest integer strictly greater than `|self|`.
    fn magnitude_ceiling(&self) -> BigInt {
        let q = self.mantissa.abs() >> self.scale as usize;
        q + 1
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 || self.mantissa.is_zero() {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.scale)
        }
    }
}

/// Built-in oracles that do not come from an exact value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DemoConstant {
    /// `√2` by integer square roots.
    Sqrt2,
    /// An oracle for 0 whose answers are never 0: `φ(m) = (-1)^m 2^-(m+1)`.
    WobblingZero,
}

impl DemoConstant {
    pub fn name(self) -> &'static str {
        match self {
            DemoConstant::Sqrt2 => "sqrt2",
            DemoConstant::WobblingZero => "wobbling-zero",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sqrt2" => Some(DemoConstant::Sqrt2),
            "wobbling-zero" => Some(DemoConstant::WobblingZero),
            _ => None,
        }
    }
}

#[derive(Debug)]
enum Node {
    Exact(BigRational),
    Demo(DemoConstant),
    Neg(Arc<OracleNode>),
    Add(Arc<OracleNode>, Arc<OracleNode>),
    Mul(Arc<OracleNode>, Arc<OracleNode>),
    /// Reciprocal of a value known to satisfy `|x| >= 2^-lower_exp`.
    Inv(Arc<OracleNode>, u32),
}

#[derive(Debug)]
struct OracleNode {
    node: Node,
    cache: Mutex<Option<(u32, Dyadic)>>,
}

/// Derived nodes compute in chunks of this many bits so an escalating caller
/// does not re-walk the whole DAG on every precision step.
const CHUNK: u32 = 16;

impl OracleNode {
    fn new(node: Node) -> Arc<Self> {
        Arc::new(OracleNode {
            node,
            cache: Mutex::new(None),
        })
    }

    fn query(&self, m: u32) -> Dyadic {
        if let Some((p, v)) = self.cache.lock().unwrap().as_ref() {
            if *p >= m {
                return v.clone();
            }
        }
        let (p, v) = match &self.node {
            Node::Exact(x) => (m, exact_query(x, m)),
            Node::Demo(c) => (m, demo_query(*c, m)),
            Node::Neg(a) => (m, a.query(m).neg()),
            Node::Add(a, b) => {
                let p = chunked(m);
                (p, a.query(p + 2).add(&b.query(p + 2)).round_to(p + 2))
            }
            Node::Mul(a, b) => {
                let p = chunked(m);
                // |a| <= ceil_a + 1 and |a'| <= |a| + 1, so |a'||b'-b| + |b||a'-a|
                // stays below (ceil_a + ceil_b + 3) 2^-k.
                let bound = a.query(0).magnitude_ceiling() + b.query(0).magnitude_ceiling() + BigInt::from(3);
                let k = p + 1 + bound.bits() as u32;
                (p, a.query(k).mul(&b.query(k)).round_to(p + 2))
            }
            Node::Inv(a, l) => {
                let p = chunked(m);
                let k = p + 2 * l + 2;
                let x = a.query(k);
                // 1/x' = 2^s / n, rounded to scale p+2.
                let num = BigInt::one() << (x.scale + p + 2) as usize;
                let twice = (&num << 1usize).div_floor(&x.mantissa);
                let rounded = (twice + BigInt::one()).div_floor(&BigInt::from(2));
                (p, Dyadic::new(rounded, p + 2))
            }
        };
        *self.cache.lock().unwrap() = Some((p, v.clone()));
        v
    }
}

fn chunked(m: u32) -> u32 {
    (m / CHUNK + 1) * CHUNK
}

fn exact_query(x: &BigRational, m: u32) -> Dyadic {
    let scale = m + 1;
    let scaled = x * BigRational::from_integer(BigInt::one() << scale as usize);
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor();
    Dyadic::new(rounded.to_integer(), scale)
}

fn demo_query(c: DemoConstant, m: u32) -> Dyadic {
    match c {
        DemoConstant::Sqrt2 => {
            let scale = m + 1;
            let n = (BigInt::from(2) << (2 * scale) as usize).sqrt();
            Dyadic::new(n, scale)
        }
        DemoConstant::WobblingZero => {
            let sign = if m.is_multiple_of(2) { 1 } else { -1 };
            Dyadic::new(BigInt::from(sign), m + 1)
        }
    }
}

/// A real number given by a dyadic oracle, with the precision ceiling used
/// when a sign has to be decided.
#[derive(Clone, Debug)]
pub struct DyadicOracle {
    node: Arc<OracleNode>,
    max_precision: u32,
}

/// One row of a precision-escalation log.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EscalationRow {
    pub precision: u32,
    pub value: Dyadic,
    pub certified: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Escalation {
    pub rows: Vec<EscalationRow>,
    pub sign: Sign,
}

impl DyadicOracle {
    pub fn from_rational(x: BigRational) -> Self {
        DyadicOracle {
            node: OracleNode::new(Node::Exact(x)),
            max_precision: DEFAULT_MAX_PRECISION,
        }
    }

    pub fn demo(c: DemoConstant) -> Self {
        DyadicOracle {
            node: OracleNode::new(Node::Demo(c)),
            max_precision: DEFAULT_MAX_PRECISION,
        }
    }

    pub fn with_max_precision(mut self, max_precision: u32) -> Self {
        self.max_precision = max_precision;
        self
    }

    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }

    /// `φ(m)`.
    pub fn query(&self, m: u32) -> Dyadic {
        self.node.query(m)
    }

    fn derived(&self, other: Option<&DyadicOracle>, node: Node) -> DyadicOracle {
        let max_precision = other.map_or(self.max_precision, |o| self.max_precision.max(o.max_precision));
        DyadicOracle {
            node: OracleNode::new(node),
            max_precision,
        }
    }

    pub fn add(&self, other: &DyadicOracle) -> DyadicOracle {
        self.derived(Some(other), Node::Add(self.node.clone(), other.node.clone()))
    }

    pub fn neg(&self) -> DyadicOracle {
        self.derived(None, Node::Neg(self.node.clone()))
    }

    pub fn sub(&self, other: &DyadicOracle) -> DyadicOracle {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DyadicOracle) -> DyadicOracle {
        self.derived(Some(other), Node::Mul(self.node.clone(), other.node.clone()))
    }

    /// Reciprocal. The value must be certifiably nonzero within the precision
    /// ceiling, otherwise the comparison is reported as unresolved.
    pub fn inverse(&self) -> Result<DyadicOracle, NumError> {
        for m in 1..=self.max_precision {
            let v = self.query(m);
            if v.cmp_abs_pow2(m) == Ordering::Greater {
                // |x| > |v| - 2^-m > 0; pick l with 2^-l <= |v| - 2^-m.
                let gap = v.to_rational().abs() - BigRational::new(BigInt::one(), BigInt::one() << m as usize);
                let mut l = 0u32;
                while BigRational::new(BigInt::one(), BigInt::one() << l as usize) > gap {
                    l += 1;
                }
                return Ok(self.derived(None, Node::Inv(self.node.clone(), l)));
            }
        }
        Err(NumError::Indeterminate {
            precision: self.max_precision,
        })
    }

    pub fn div(&self, other: &DyadicOracle) -> Result<DyadicOracle, NumError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Queries `φ(1), φ(2), …` up to `max_precision`, stopping at the first
    /// answer with `|φ(m)| > 2^-m`, which fixes the sign of `x`.
    pub fn escalate(&self, max_precision: u32) -> Escalation {
        let mut rows = Vec::new();
        for m in 1..=max_precision {
            let value = self.query(m);
            let certified = value.cmp_abs_pow2(m) == Ordering::Greater;
            let positive = value.mantissa().is_positive();
            rows.push(EscalationRow {
                precision: m,
                value,
                certified,
            });
            if certified {
                let sign = if positive { Sign::Positive } else { Sign::Negative };
                return Escalation { rows, sign };
            }
        }
        Escalation {
            rows,
            sign: Sign::Indeterminate(max_precision),
        }
    }

    pub fn sign_at_precision(&self, max_precision: u32) -> Sign {
        self.escalate(max_precision).sign
    }

    pub fn sign(&self) -> Sign {
        self.sign_at_precision(self.max_precision)
    }

    pub fn approx_f64(&self) -> f64 {
        self.query(53).to_f64()
    }

    /// A rational `u` with `x < u`.
    pub fn upper_bound(&self) -> BigRational {
        let q = self.query(10);
        q.to_rational() + BigRational::new(BigInt::one(), BigInt::from(1024))
    }
}

impl fmt::Display for DyadicOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "~{:.9}", self.approx_f64())
    }
}
