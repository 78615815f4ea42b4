//! Real algebraic numbers inside a fixed simple extension `Q(γ)`.
//!
//! Elements are polynomials in `γ` of degree below the field degree, reduced
//! modulo the defining polynomial. The generator is pinned down by a rational
//! isolating interval, and each element carries its own (possibly refined)
//! copy of that interval so refinement stays a pure operation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use super::poly::Poly;
use super::{NumError, Sign};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NumberField {
    minimal_polynomial: Poly,
    generator_interval: Interval,
    /// Verified irreducible, so a reduced representation is zero only when
    /// it is the zero polynomial.
    irreducible: bool,
}

impl NumberField {
    /// Validates the defining data: integer coefficients, squarefree, and
    /// exactly one real root in the (closed) generator interval. For degree
    /// at most three, irreducibility is also checked (no rational roots).
    pub fn new(minimal_polynomial: Poly, generator_interval: Interval) -> Result<Self, NumError> {
        let deg = minimal_polynomial
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| NumError::InvalidField("defining polynomial must have degree >= 1".into()))?;
        if minimal_polynomial.coeffs().iter().any(|c| !c.is_integer()) {
            return Err(NumError::InvalidField(
                "defining polynomial must have integer coefficients".into(),
            ));
        }
        if !minimal_polynomial.is_squarefree() {
            return Err(NumError::InvalidField("defining polynomial is not squarefree".into()));
        }
        let (lo, hi) = (generator_interval.lo(), generator_interval.hi());
        let mut roots = minimal_polynomial.count_roots(lo, hi);
        if minimal_polynomial.eval(lo).is_zero() {
            roots += 1;
        }
        if roots != 1 {
            return Err(NumError::InvalidField(format!(
                "interval {generator_interval} contains {roots} roots of {minimal_polynomial}"
            )));
        }
        if (2..=3).contains(&deg) && !minimal_polynomial.rational_roots().is_empty() {
            return Err(NumError::InvalidField(format!(
                "{minimal_polynomial} has a rational root"
            )));
        }
        Ok(NumberField {
            minimal_polynomial,
            generator_interval,
            irreducible: deg <= 3,
        })
    }

    /// `Q` itself, presented as `Q(0)` with defining polynomial `x`.
    pub fn rationals() -> Self {
        NumberField {
            minimal_polynomial: Poly::x(),
            generator_interval: Interval::new(-BigRational::one(), BigRational::one()),
            irreducible: true,
        }
    }

    pub fn minimal_polynomial(&self) -> &Poly {
        &self.minimal_polynomial
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.degree().unwrap_or(0)
    }

    pub fn generator_interval(&self) -> &Interval {
        &self.generator_interval
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(γ), {} = 0, γ ∈ {}", self.minimal_polynomial, self.generator_interval)
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    repr: Poly,
    gamma: Interval,
}

impl PartialEq for AlgebraicNumber {
    /// Structural equality of representations; use `sign` of the difference
    /// for value equality.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.repr == other.repr
    }
}

impl AlgebraicNumber {
    /// Element `repr(γ)`; `repr` is reduced modulo the defining polynomial.
    pub fn new(field: Arc<NumberField>, repr: Poly) -> Self {
        let repr = repr.rem(field.minimal_polynomial());
        let gamma = field.generator_interval().clone();
        AlgebraicNumber { field, repr, gamma }
    }

    pub fn from_rational(field: Arc<NumberField>, r: BigRational) -> Self {
        AlgebraicNumber::new(field, Poly::constant(r))
    }

    pub fn generator(field: Arc<NumberField>) -> Self {
        AlgebraicNumber::new(field, Poly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn representation(&self) -> &Poly {
        &self.repr
    }

    /// Current enclosure of `γ` used for this value.
    pub fn generator_enclosure(&self) -> &Interval {
        &self.gamma
    }

    /// Enclosure of the represented number obtained by interval evaluation of
    /// the representation over the current generator enclosure.
    pub fn isolating_interval(&self) -> Interval {
        self.repr.eval_interval(&self.gamma)
    }

    /// The rational value, when the representation is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.repr.as_constant()
    }

    fn same_field(&self, other: &Self) -> Result<(), NumError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(NumError::FieldMismatch)
        }
    }

    fn tighter_gamma(&self, other: &Self) -> Interval {
        self.gamma
            .intersect(&other.gamma)
            .expect("two enclosures of the same generator must overlap")
    }

    fn with(&self, repr: Poly, gamma: Interval) -> Self {
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            repr: repr.rem(self.field.minimal_polynomial()),
            gamma,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        Ok(self.with(self.repr.add(&other.repr), self.tighter_gamma(other)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        Ok(self.with(self.repr.sub(&other.repr), self.tighter_gamma(other)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        Ok(self.with(self.repr.mul(&other.repr), self.tighter_gamma(other)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.repr.neg(), self.gamma.clone())
    }

    pub fn inverse(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // When the defining polynomial is reducible the representation may share
        // a factor with it; γ is then a root of the cofactor, so invert there.
        let mut modulus = self.field.minimal_polynomial().clone();
        loop {
            let (g, s, _) = self.repr.ext_gcd(&modulus);
            if g.degree() == Some(0) {
                return Ok(self.with(s, self.gamma.clone()));
            }
            modulus = modulus.div_rem(&g).0;
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumError> {
        self.same_field(other)?;
        self.mul(&other.inverse()?)
    }

    /// Symbolic zero test: the representation vanishes at γ exactly when its
    /// gcd with the defining polynomial has a root in γ's enclosure.
    pub fn is_zero(&self) -> bool {
        if self.repr.is_zero() {
            return true;
        }
        if self.repr.degree() == Some(0) || self.field.irreducible {
            return false;
        }
        let g = self.repr.gcd(self.field.minimal_polynomial());
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let (lo, hi) = (self.gamma.lo(), self.gamma.hi());
        g.count_roots(lo, hi) + usize::from(g.eval(lo).is_zero()) > 0
    }

    fn bisect_gamma(&self, gamma: &Interval) -> Interval {
        let m = self.field.minimal_polynomial();
        let (lo, hi) = (gamma.lo(), gamma.hi());
        if lo == hi {
            return gamma.clone();
        }
        let at_lo = m.eval(lo);
        if at_lo.is_zero() {
            return Interval::point(lo.clone());
        }
        if m.eval(hi).is_zero() {
            return Interval::point(hi.clone());
        }
        let mid = gamma.midpoint();
        let at_mid = m.eval(&mid);
        if at_mid.is_zero() {
            Interval::point(mid)
        } else if at_mid.is_positive() != at_lo.is_positive() {
            Interval::new(lo.clone(), mid)
        } else {
            Interval::new(mid, hi.clone())
        }
    }

    /// Total, exact sign.
    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        let mut gamma = self.gamma.clone();
        loop {
            let enc = self.repr.eval_interval(&gamma);
            if enc.lo().is_positive() {
                return Sign::Positive;
            }
            if enc.hi().is_negative() {
                return Sign::Negative;
            }
            gamma = self.bisect_gamma(&gamma);
        }
    }

    /// Same number, with an isolating interval no wider than `width_bound`.
    pub fn refine(&self, width_bound: &BigRational) -> Result<Self, NumError> {
        if !width_bound.is_positive() {
            return Err(NumError::NonPositiveWidth);
        }
        let mut gamma = self.gamma.clone();
        while &self.repr.eval_interval(&gamma).width() > width_bound {
            gamma = self.bisect_gamma(&gamma);
        }
        Ok(AlgebraicNumber {
            field: Arc::clone(&self.field),
            repr: self.repr.clone(),
            gamma,
        })
    }

    /// Midpoint of an isolating interval of width at most `2^-20`.
    pub fn approx_f64(&self) -> f64 {
        let bound = BigRational::new(BigInt::one(), BigInt::one() << 20usize);
        let refined = self.refine(&bound).expect("positive bound");
        refined.isolating_interval().midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                let repr = self.repr.to_string().replace('x', "γ");
                write!(f, "{repr} (≈{:.6})", self.approx_f64())
            }
        }
    }
}
