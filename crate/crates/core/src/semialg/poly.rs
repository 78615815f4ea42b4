//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{NumError, Scalar};

/// Monomials are exponent vectors of length `nvars`; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational, nvars: usize) -> MPoly {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn constant_int(c: i64, nvars: usize) -> MPoly {
        MPoly::constant(BigRational::from_integer(BigInt::from(c)), nvars)
    }

    pub fn var(i: usize, nvars: usize) -> MPoly {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check(&self, other: &MPoly) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    fn insert(&mut self, e: Vec<u32>, c: BigRational) {
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check(other);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::constant_int(1, self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `point`, computed in the backend of the coordinates.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, NumError> {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let proto = point.first().cloned().unwrap_or_else(|| Scalar::integer(0));
        let mut acc = proto.embed_int(0);
        for (e, c) in &self.terms {
            let mut t = proto.embed(c.clone());
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(x)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Renders with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Named { p: self, names }
    }
}

struct Named<'a> {
    p: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first
        for (i, (e, c)) in self.p.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(mag.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    k => factors.push(format!("{}^{k}", self.names[v])),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        Named { p: self, names: &names }.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        let p = x.add(&y).pow(2).sub(&x.mul(&y).add(&x.mul(&y)));
        assert_eq!(p, x.pow(2).add(&y.pow(2)));
        assert_eq!(p.to_string(), "x0^2 + x1^2");
        assert_eq!(x.sub(&x), MPoly::zero(2));
        assert_eq!(MPoly::constant_int(-3, 2).sub(&y).to_string(), "-x1 - 3");
    }

    #[test]
    fn evaluation() {
        let x = MPoly::var(0, 1);
        let p = x.pow(3).sub(&MPoly::constant_int(2, 1));
        assert!(p.eval(&[Scalar::integer(2)]).unwrap().same_repr(&Scalar::integer(6)));
        assert!(p.eval(&[Scalar::rational(1, 2)]).unwrap().same_repr(&Scalar::rational(-15, 8)));
    }
}
