//! Numbers of the form `p + q·√r` over a scalar backend, with exact sign
//! decisions by repeated squaring. Fixed points of hyperbolic elements live
//! here whenever `tr² − 4` is not a square.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exactnum::{NumError, Scalar};

#[derive(Clone, Debug)]
pub struct Surd {
    p: Scalar,
    q: Scalar,
    r: Scalar,
}

/// Square root of a non-negative rational, if it is rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl Surd {
    pub fn from_scalar(x: Scalar) -> Surd {
        let zero = x.embed_int(0);
        Surd {
            p: x,
            q: zero.clone(),
            r: zero,
        }
    }

    /// `p + q·√r`; `r` must be non-negative. Rational square radicands are
    /// folded into `p`.
    pub fn new(p: Scalar, q: Scalar, r: Scalar) -> Result<Surd, NumError> {
        if r.cmp_zero()? == Ordering::Less {
            return Err(NumError::NegativeRadicand);
        }
        if let Some(rr) = r.as_rational() {
            if let Some(root) = rational_sqrt(&rr) {
                let p = p.add(&q.mul(&p.embed(root))?)?;
                return Ok(Surd::from_scalar(p));
            }
        }
        Ok(Surd { p, q, r })
    }

    pub fn parts(&self) -> (&Scalar, &Scalar, &Scalar) {
        (&self.p, &self.q, &self.r)
    }

    /// The value when it lies in the base backend.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        (self.q.as_rational().is_some_and(|q| q.is_zero()) || self.r.as_rational().is_some_and(|r| r.is_zero()))
            .then_some(&self.p)
    }

    pub fn sign(&self) -> Result<Ordering, NumError> {
        sign_surd(&self.p, &self.q, &self.r)
    }

    /// Exact comparison of two surds with possibly different radicands.
    pub fn compare(&self, other: &Surd) -> Result<Ordering, NumError> {
        let u = self.p.sub(&other.p)?;
        if self.r.same_repr(&other.r) {
            return sign_surd(&u, &self.q.sub(&other.q)?, &self.r);
        }
        sign_two_surds(&u, &self.q, &self.r, &other.q.neg(), &other.r)
    }

    pub fn approx_f64(&self) -> f64 {
        let r = self.r.approx_f64().max(0.0);
        self.p.approx_f64() + self.q.approx_f64() * r.sqrt()
    }

    /// Image under `x ↦ (a x + b) / (c x + d)`; `None` means `∞`.
    pub fn mobius(&self, a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Result<Option<Surd>, NumError> {
        let (p, q, r) = (&self.p, &self.q, &self.r);
        let num_p = a.mul(p)?.add(b)?;
        let num_q = a.mul(q)?;
        let den_p = c.mul(p)?.add(d)?;
        let den_q = c.mul(q)?;
        if sign_surd(&den_p, &den_q, r)? == Ordering::Equal {
            return Ok(None);
        }
        let norm = den_p.square().sub(&den_q.square().mul(r)?)?;
        if norm.is_zero()? {
            // The conjugate vanishes, so √r = den_p / den_q lies in the base.
            let root = den_p.div(&den_q)?;
            let x = p.add(&q.mul(&root)?)?;
            let v = a.mul(&x)?.add(b)?.div(&c.mul(&x)?.add(d)?)?;
            return Ok(Some(Surd::from_scalar(v)));
        }
        // (N_p + N_q√r)(D_p − D_q√r) / norm
        let out_p = num_p.mul(&den_p)?.sub(&num_q.mul(&den_q)?.mul(r)?)?.div(&norm)?;
        let out_q = num_q.mul(&den_p)?.sub(&num_p.mul(&den_q)?)?.div(&norm)?;
        Ok(Some(Surd::new(out_p, out_q, r.clone())?))
    }
}

/// Sign of `u + v·√r` with `r >= 0`.
pub fn sign_surd(u: &Scalar, v: &Scalar, r: &Scalar) -> Result<Ordering, NumError> {
    let su = u.cmp_zero()?;
    let sv = match r.cmp_zero()? {
        Ordering::Equal => Ordering::Equal,
        _ => v.cmp_zero()?,
    };
    if sv == Ordering::Equal {
        return Ok(su);
    }
    if su == Ordering::Equal || su == sv {
        return Ok(sv);
    }
    // Opposite signs: the term with the larger square wins.
    let d = u.square().sub(&v.square().mul(r)?)?;
    Ok(match d.cmp_zero()? {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    })
}

/// Sign of `u + v·√r1 + w·√r2` with `r1, r2 >= 0`.
pub fn sign_two_surds(u: &Scalar, v: &Scalar, r1: &Scalar, w: &Scalar, r2: &Scalar) -> Result<Ordering, NumError> {
    let sx = sign_surd(u, v, r1)?;
    let sy = match r2.cmp_zero()? {
        Ordering::Equal => Ordering::Equal,
        _ => w.cmp_zero()?,
    };
    if sy == Ordering::Equal {
        return Ok(sx);
    }
    if sx == Ordering::Equal || sx == sy {
        return Ok(sy);
    }
    // X = u + v√r1, Y = w√r2 of opposite signs; compare X² with Y².
    let two = u.embed_int(2);
    let base = u.square().add(&v.square().mul(r1)?)?.sub(&w.square().mul(r2)?)?;
    let cross = two.mul(u)?.mul(v)?;
    Ok(match sign_surd(&base, &cross, r1)? {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    })
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_scalar() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "{} + ({})·√({}) (≈{:.6})", self.p, self.q, self.r, self.approx_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d)
    }

    #[test]
    fn signs_against_floats() {
        let cases = [(1, 1, 2), (-2, 1, 3), (-3, 2, 2), (5, -2, 6), (0, -1, 5), (-7, 5, 2)];
        for (u, v, r) in cases {
            let got = sign_surd(&q(u, 1), &q(v, 1), &q(r, 1)).unwrap();
            let want = (u as f64 + v as f64 * (r as f64).sqrt()).partial_cmp(&0.0).unwrap();
            assert_eq!(got, want, "{u} + {v}√{r}");
        }
        // 3 − 2√2 ≈ 0.17
        assert_eq!(sign_surd(&q(3, 1), &q(-2, 1), &q(2, 1)).unwrap(), Ordering::Greater);
        let cases = [(0, 1, 2, -1, 5), (1, 1, 2, -1, 5), (-3, 1, 2, 1, 3), (-4, 1, 2, 1, 3), (2, -3, 2, 1, 3)];
        for (u, v, r1, w, r2) in cases {
            let got = sign_two_surds(&q(u, 1), &q(v, 1), &q(r1, 1), &q(w, 1), &q(r2, 1)).unwrap();
            let want = (u as f64 + v as f64 * (r1 as f64).sqrt() + w as f64 * (r2 as f64).sqrt())
                .partial_cmp(&0.0)
                .unwrap();
            assert_eq!(got, want);
        }
        assert_eq!(
            sign_two_surds(&q(0, 1), &q(3, 1), &q(2, 1), &q(-1, 1), &q(18, 1)).unwrap(),
            Ordering::Equal
        );
        let s = Surd::new(q(0, 1), q(1, 1), q(2, 1)).unwrap();
        let t = Surd::new(q(0, 1), q(1, 1), q(18, 1)).unwrap();
        assert_eq!(s.compare(&t).unwrap(), Ordering::Less);
    }

    #[test]
    fn perfect_squares_collapse() {
        let s = Surd::new(q(1, 1), q(1, 2), q(9, 4)).unwrap();
        assert!(s.as_scalar().unwrap().same_repr(&q(7, 4)));
    }

    #[test]
    fn mobius_image() {
        // x ↦ 1/x sends 1 + √2 to √2 − 1.
        let s = Surd::new(q(1, 1), q(1, 1), q(2, 1)).unwrap();
        let img = s.mobius(&q(0, 1), &q(1, 1), &q(1, 1), &q(0, 1)).unwrap().unwrap();
        let want = Surd::new(q(-1, 1), q(1, 1), q(2, 1)).unwrap();
        assert_eq!(img.compare(&want).unwrap(), Ordering::Equal);
        // x ↦ 1/x sends 0 to ∞.
        assert!(Surd::from_scalar(q(0, 1)).mobius(&q(0, 1), &q(1, 1), &q(1, 1), &q(0, 1)).unwrap().is_none());
    }
}
