//! Elements of PSL(2,R) as determinant-one matrices over a scalar backend.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{Backend, NumError, Scalar};
use crate::hypgeo::{BoundaryPoint, Geodesic, Surd};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("the element is ±I")]
    Identity,
    #[error("expected a {expected} element, found {found}")]
    WrongClass { expected: ElementClass, found: ElementClass },
    #[error("conjugating matrix is singular")]
    SingularConjugator,
    #[error("axes are not disjoint (tr[A,B] = {0})")]
    AxesNotDisjoint(String),
    #[error("coherent orientation failed: tr AB = {0}")]
    NotCoherent(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ElementClass {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl ElementClass {
    pub fn name(self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::Hyperbolic => "hyperbolic",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct Mat2 {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
}

impl Mat2 {
    /// `[[a, b], [c, d]]` with `ad − bc = 1`. Oracle matrices are accepted
    /// unless the determinant is certifiably different from 1.
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Mat2, MoebiusError> {
        let m = Mat2 { a, b, c, d };
        let det = m.det()?;
        let off = det.sub(&det.embed_int(1))?;
        match off.sign() {
            crate::exactnum::Sign::Zero | crate::exactnum::Sign::Indeterminate(_) => Ok(m),
            _ => Err(MoebiusError::Determinant(det.to_string())),
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Mat2, MoebiusError> {
        Mat2::new(Scalar::integer(a), Scalar::integer(b), Scalar::integer(c), Scalar::integer(d))
    }

    /// Entries given as `(numerator, denominator)` pairs.
    pub fn from_ratios(e: [(i64, i64); 4]) -> Result<Mat2, MoebiusError> {
        let [a, b, c, d] = e.map(|(n, q)| Scalar::rational(n, q));
        Mat2::new(a, b, c, d)
    }

    /// `diag(λ, 1/λ)`.
    pub fn diagonal(lambda: Scalar) -> Result<Mat2, MoebiusError> {
        let inv = lambda.embed_int(1).div(&lambda)?;
        let zero = lambda.embed_int(0);
        Ok(Mat2 {
            a: lambda,
            b: zero.clone(),
            c: zero,
            d: inv,
        })
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }
    pub fn b(&self) -> &Scalar {
        &self.b
    }
    pub fn c(&self) -> &Scalar {
        &self.c
    }
    pub fn d(&self) -> &Scalar {
        &self.d
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn backend(&self) -> Backend {
        self.a.backend()
    }

    pub fn identity_like(&self) -> Mat2 {
        let one = self.a.embed_int(1);
        let zero = self.a.embed_int(0);
        Mat2 {
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        }
    }

    pub fn trace(&self) -> Result<Scalar, NumError> {
        self.a.add(&self.d)
    }

    pub fn det(&self) -> Result<Scalar, NumError> {
        self.a.mul(&self.d)?.sub(&self.b.mul(&self.c)?)
    }

    pub fn mul(&self, o: &Mat2) -> Result<Mat2, NumError> {
        Ok(Mat2 {
            a: self.a.mul(&o.a)?.add(&self.b.mul(&o.c)?)?,
            b: self.a.mul(&o.b)?.add(&self.b.mul(&o.d)?)?,
            c: self.c.mul(&o.a)?.add(&self.d.mul(&o.c)?)?,
            d: self.c.mul(&o.b)?.add(&self.d.mul(&o.d)?)?,
        })
    }

    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.d.neg(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Mat2, NumError> {
        let mut acc = self.identity_like();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[A, B] = A B A⁻¹ B⁻¹`.
    pub fn commutator(&self, o: &Mat2) -> Result<Mat2, NumError> {
        self.mul(o)?.mul(&self.inverse())?.mul(&o.inverse())
    }

    /// `C M C⁻¹` for an invertible `C = [[p, q], [r, s]]` of any determinant.
    pub fn conjugate(&self, c: [&Scalar; 4]) -> Result<Mat2, MoebiusError> {
        let [p, q, r, s] = c;
        let det = p.mul(s)?.sub(&q.mul(r)?)?;
        if det.is_zero()? {
            return Err(MoebiusError::SingularConjugator);
        }
        let cm = Mat2 {
            a: p.clone(),
            b: q.clone(),
            c: r.clone(),
            d: s.clone(),
        }
        .mul(self)?;
        let adj = Mat2 {
            a: s.clone(),
            b: q.neg(),
            c: r.neg(),
            d: p.clone(),
        };
        let out = cm.mul(&adj)?;
        Ok(Mat2 {
            a: out.a.div(&det)?,
            b: out.b.div(&det)?,
            c: out.c.div(&det)?,
            d: out.d.div(&det)?,
        })
    }

    /// The representative with non-negative trace.
    pub fn normalized(&self) -> Result<Mat2, NumError> {
        Ok(match self.trace()?.cmp_zero()? {
            Ordering::Less => self.neg(),
            _ => self.clone(),
        })
    }

    /// Whether the matrix is `±I`.
    pub fn is_identity(&self) -> Result<bool, NumError> {
        Ok(self.b.is_zero()? && self.c.is_zero()? && self.a.compare(&self.d)? == Ordering::Equal)
    }

    /// Equality in PSL(2,R), i.e. up to sign.
    pub fn projectively_equal(&self, o: &Mat2) -> Result<bool, NumError> {
        let same = |m: &Mat2| -> Result<bool, NumError> {
            for (x, y) in self.entries().into_iter().zip(m.entries()) {
                if !x.sub(y)?.is_zero()? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        Ok(same(o)? || same(&o.neg())?)
    }

    /// Seminorm of the common-denominator form: with every entry written
    /// over the least common denominator `q` of all rational coefficients,
    /// `q` plus the sum of the absolute numerators. Oracles have none.
    pub fn seminorm(&self) -> Option<BigInt> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for e in self.entries() {
            match e {
                Scalar::Rational(r) => coeffs.push(r.clone()),
                Scalar::Algebraic(x) => coeffs.extend(x.representation().coeffs().iter().cloned()),
                Scalar::Oracle(_) => return None,
            }
        }
        Some(common_denominator_seminorm(&coeffs))
    }

    pub fn approx(&self) -> [f64; 4] {
        self.entries().map(|e| e.approx_f64())
    }
}

/// `q + Σ |c_i · q|` with `q` the least common denominator.
pub fn common_denominator_seminorm(coeffs: &[BigRational]) -> BigInt {
    let q = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let sum: BigInt = coeffs
        .iter()
        .map(|c| (c.numer() * (&q / c.denom())).abs())
        .sum();
    q + sum
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Classification by `|tr|` against 2; trace ±2 splits into `±I` and
/// parabolic.
pub fn classify(m: &Mat2) -> Result<ElementClass, NumError> {
    let t = m.trace()?;
    let disc = t.square().sub(&t.embed_int(4))?;
    Ok(match disc.cmp_zero()? {
        Ordering::Greater => ElementClass::Hyperbolic,
        Ordering::Less => ElementClass::Elliptic,
        Ordering::Equal => {
            if m.is_identity()? {
                ElementClass::Identity
            } else {
                ElementClass::Parabolic
            }
        }
    })
}

/// A normalized element (trace ≥ 0) with its class.
#[derive(Clone, Debug)]
pub struct PslElement {
    matrix: Mat2,
    class: ElementClass,
}

impl PslElement {
    pub fn new(m: &Mat2) -> Result<PslElement, NumError> {
        let matrix = m.normalized()?;
        let class = classify(&matrix)?;
        Ok(PslElement { matrix, class })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn class(&self) -> ElementClass {
        self.class
    }
}

/// `max{|tr A|, |tr B|, |tr AB|, |tr AB⁻¹|}`.
pub fn maximal_initial_trace(a: &Mat2, b: &Mat2) -> Result<Scalar, NumError> {
    let candidates = [
        a.trace()?,
        b.trace()?,
        a.mul(b)?.trace()?,
        a.mul(&b.inverse())?.trace()?,
    ];
    let mut best = candidates[0].abs()?;
    for c in &candidates[1..] {
        let c = c.abs()?;
        if c.compare(&best)? == Ordering::Greater {
            best = c;
        }
    }
    Ok(best)
}

/// A boundary fixed point and whether it attracts under forward iteration.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub point: BoundaryPoint,
    pub attracting: bool,
}

/// Fixed points on the boundary: two for hyperbolic elements (repeller
/// first), one for parabolic, none for elliptic.
pub fn fixed_points(m: &Mat2) -> Result<Vec<FixedPoint>, MoebiusError> {
    let class = classify(m)?;
    if class == ElementClass::Identity {
        return Err(MoebiusError::Identity);
    }
    if class == ElementClass::Elliptic {
        return Ok(Vec::new());
    }
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let t = m.trace()?;
    let disc = t.square().sub(&t.embed_int(4))?;
    if c.is_zero()? {
        if class == ElementClass::Parabolic {
            return Ok(vec![FixedPoint {
                point: BoundaryPoint::Infinity,
                attracting: false,
            }]);
        }
        let finite = BoundaryPoint::Finite(Surd::from_scalar(b.div(&d.sub(a)?)?));
        let infinity_attracts = a.square().compare(&d.square())? == Ordering::Greater;
        let inf = FixedPoint {
            point: BoundaryPoint::Infinity,
            attracting: infinity_attracts,
        };
        let fin = FixedPoint {
            point: finite,
            attracting: !infinity_attracts,
        };
        return Ok(if infinity_attracts { vec![fin, inf] } else { vec![inf, fin] });
    }
    let two_c = c.mul(&c.embed_int(2))?;
    let p = a.sub(d)?.div(&two_c)?;
    if class == ElementClass::Parabolic {
        return Ok(vec![FixedPoint {
            point: BoundaryPoint::Finite(Surd::from_scalar(p)),
            attracting: false,
        }]);
    }
    // The attractor is ((a − d) + sgn(tr)·√(tr² − 4)) / 2c.
    let q = c.embed_int(1).div(&two_c)?;
    let q_attr = match t.cmp_zero()? {
        Ordering::Less => q.neg(),
        _ => q,
    };
    let attractor = Surd::new(p.clone(), q_attr.clone(), disc.clone())?;
    let repeller = Surd::new(p, q_attr.neg(), disc)?;
    Ok(vec![
        FixedPoint {
            point: BoundaryPoint::Finite(repeller),
            attracting: false,
        },
        FixedPoint {
            point: BoundaryPoint::Finite(attractor),
            attracting: true,
        },
    ])
}

/// Translation axis of a hyperbolic element, oriented from repeller to
/// attractor.
pub fn axis(m: &Mat2) -> Result<Geodesic, MoebiusError> {
    let class = classify(m)?;
    if class != ElementClass::Hyperbolic {
        return Err(MoebiusError::WrongClass {
            expected: ElementClass::Hyperbolic,
            found: class,
        });
    }
    let mut fp = fixed_points(m)?;
    let attractor = fp.pop().expect("two fixed points").point;
    let repeller = fp.pop().expect("two fixed points").point;
    Ok(Geodesic::oriented(repeller, attractor))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EllipticOrder {
    Finite(u32),
    Infinite,
    /// No power up to the bound is `±I`, and the bound is not known to be
    /// conclusive.
    ExceedsBound(u32),
}

impl fmt::Display for EllipticOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllipticOrder::Finite(n) => write!(f, "finite({n})"),
            EllipticOrder::Infinite => f.write_str("infinite"),
            EllipticOrder::ExceedsBound(n) => write!(f, "exceeds({n})"),
        }
    }
}

/// Order in PSL(2,R) of an elliptic element with rational trace: only
/// traces 0 and ±1 give torsion.
pub fn niven_order(trace: &BigRational) -> EllipticOrder {
    if trace.is_zero() {
        EllipticOrder::Finite(2)
    } else if trace.abs() == BigRational::one() {
        EllipticOrder::Finite(3)
    } else {
        EllipticOrder::Infinite
    }
}

/// Searches powers `E², …, E^bound` for `±I`.
pub fn elliptic_order_by_powers(e: &Mat2, bound: u32) -> Result<EllipticOrder, NumError> {
    let mut p = e.clone();
    for n in 2..=bound {
        p = p.mul(e)?;
        if p.is_identity()? {
            return Ok(EllipticOrder::Finite(n));
        }
    }
    Ok(EllipticOrder::ExceedsBound(bound))
}

/// Power bound that decides the order over a field of degree `d`: an
/// element of order `n` has `φ(2n) ≤ 2d`, hence `n ≤ 32 d²`.
pub fn order_search_bound(degree: usize) -> u32 {
    32 * (degree * degree) as u32
}

/// Order of an elliptic element. Rational traces take the fast path; other
/// exact traces search powers up to a bound that makes the answer certain.
pub fn elliptic_order(e: &Mat2) -> Result<EllipticOrder, MoebiusError> {
    let class = classify(e)?;
    if class != ElementClass::Elliptic {
        return Err(MoebiusError::WrongClass {
            expected: ElementClass::Elliptic,
            found: class,
        });
    }
    if !e.backend().is_exact() {
        return Err(NumError::ExactBackendRequired.into());
    }
    let t = e.trace()?;
    if let Some(r) = t.as_rational() {
        return Ok(niven_order(&r));
    }
    let bound = order_search_bound(t.field_degree());
    Ok(match elliptic_order_by_powers(e, bound)? {
        EllipticOrder::ExceedsBound(_) => EllipticOrder::Infinite,
        other => other,
    })
}

/// Why a pair generates an elementary group.
#[derive(Clone, Debug)]
pub enum ElementaryReason {
    SharedBoundaryFixedPoint(BoundaryPoint),
    CommonInteriorFixedPoint,
}

/// `Some` when `⟨A, B⟩` is elementary, detected by `tr[A,B] = 2` and
/// explained by comparing fixed-point sets.
pub fn elementary_certificate(a: &Mat2, b: &Mat2) -> Result<Option<ElementaryReason>, MoebiusError> {
    if a.is_identity()? || b.is_identity()? {
        return Err(MoebiusError::Identity);
    }
    let k = a.commutator(b)?.trace()?;
    if !k.sub(&k.embed_int(2))?.is_zero()? {
        return Ok(None);
    }
    let fa = fixed_points(a)?;
    let fb = fixed_points(b)?;
    for x in &fa {
        for y in &fb {
            if x.point.compare(&y.point)? == Ordering::Equal {
                return Ok(Some(ElementaryReason::SharedBoundaryFixedPoint(x.point.clone())));
            }
        }
    }
    Ok(Some(ElementaryReason::CommonInteriorFixedPoint))
}

pub fn is_elementary_pair(a: &Mat2, b: &Mat2) -> Result<bool, MoebiusError> {
    Ok(elementary_certificate(a, b)?.is_some())
}

/// Sign of `tr[A,B] − 2`. For two hyperbolic elements the axes are
/// disjoint when positive, cross when negative, and share an endpoint at 0.
pub fn commutator_excess(a: &Mat2, b: &Mat2) -> Result<Ordering, NumError> {
    let k = a.commutator(b)?.trace()?;
    k.sub(&k.embed_int(2))?.cmp_zero()
}

/// A pair after coherent orientation, with the moves that produced it.
#[derive(Clone, Debug)]
pub struct Oriented {
    pub first: Mat2,
    pub second: Mat2,
    /// The input generators were exchanged.
    pub swapped: bool,
    /// The second generator was replaced by its inverse.
    pub inverted: bool,
}

/// Normalizes both generators, orders them so that `tr A ≥ tr B`, and
/// replaces `B` by `B⁻¹` if that raises `tr AB`. On success `tr AB > 2`.
/// Requires hyperbolic generators with disjoint axes.
pub fn coherently_orient(a: &Mat2, b: &Mat2) -> Result<Oriented, MoebiusError> {
    let a = a.normalized()?;
    let b = b.normalized()?;
    for m in [&a, &b] {
        let class = classify(m)?;
        if class != ElementClass::Hyperbolic {
            return Err(MoebiusError::WrongClass {
                expected: ElementClass::Hyperbolic,
                found: class,
            });
        }
    }
    if commutator_excess(&a, &b)? != Ordering::Greater {
        let k = a.commutator(&b)?.trace()?;
        return Err(MoebiusError::AxesNotDisjoint(k.to_string()));
    }
    let swapped = a.trace()?.compare(&b.trace()?)? == Ordering::Less;
    let (a, b) = if swapped { (b, a) } else { (a, b) };
    let t_plus = a.mul(&b)?.trace()?;
    let t_minus = a.mul(&b.inverse())?.trace()?;
    let inverted = t_minus.compare(&t_plus)? == Ordering::Greater;
    let b = if inverted { b.inverse() } else { b };
    let t = a.mul(&b)?.trace()?;
    if t.compare(&t.embed_int(2))? != Ordering::Greater {
        return Err(MoebiusError::NotCoherent(t.to_string()));
    }
    Ok(Oriented {
        first: a,
        second: b,
        swapped,
        inverted,
    })
}
