//! Size measures for the symbolic model.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::NumError;

/// `|p| + q` for `p/q` in lowest terms.
pub fn rational_seminorm(r: &BigRational) -> BigInt {
    r.numer().abs() + r.denom()
}

/// Sum of the absolute numerators and denominators of all coefficients
/// (the zero polynomial counts as the single coefficient `0/1`).
pub fn seminorm(p: &Poly) -> BigInt {
    if p.is_zero() {
        return BigInt::one();
    }
    p.coeffs().iter().map(rational_seminorm).sum()
}

/// Rational bounds `lo < e < hi` from `terms` terms of the exponential series.
fn e_bounds(terms: u32) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for j in 0..=terms {
        if j > 0 {
            fact *= j;
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    // Tail after the `terms`-th term is below 1 / (terms · terms!).
    let tail = BigRational::new(BigInt::one(), &fact * terms);
    (sum.clone(), sum + tail)
}

/// Exact comparison of `n` against `e^k` for `k >= 1` (never equal).
fn cmp_exp(n: &BigInt, k: u32) -> Ordering {
    let n = BigRational::from_integer(n.clone());
    let mut terms = 24;
    loop {
        let (lo, hi) = e_bounds(terms);
        if n >= num_traits::pow(hi, k as usize) {
            return Ordering::Greater;
        }
        if n < num_traits::pow(lo, k as usize) {
            return Ordering::Less;
        }
        terms *= 2;
    }
}

/// `L(SN) = ⌊ln SN⌋ + 1`, decided by exact comparison against rational
/// enclosures of powers of `e`.
pub fn log_measure(sn: &BigInt) -> Result<u64, NumError> {
    if !sn.is_positive() {
        return Err(NumError::ZeroSeminorm);
    }
    // Float estimate from the leading bits, corrected exactly below.
    let bits = sn.bits();
    let shift = bits.saturating_sub(53);
    let top = (sn >> shift as usize).to_f64().unwrap_or(1.0);
    let estimate = top.ln() + shift as f64 * std::f64::consts::LN_2;
    let mut k = estimate.floor().max(0.0) as u32;
    while k > 0 && cmp_exp(sn, k) == Ordering::Less {
        k -= 1;
    }
    while cmp_exp(sn, k + 1) == Ordering::Greater {
        k += 1;
    }
    Ok(k as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn seminorm_examples() {
        assert_eq!(seminorm(&Poly::new(vec![r(1, 5), r(3, 2)])), BigInt::from(11));
        assert_eq!(seminorm(&Poly::zero()), BigInt::from(1));
        // x^2: numerators 1, 0, 0 and denominators 1, 1, 1.
        assert_eq!(seminorm(&Poly::from_ints(&[0, 0, 1])), BigInt::from(4));
    }

    #[test]
    fn log_measure_examples() {
        assert_eq!(log_measure(&BigInt::from(1)).unwrap(), 1);
        assert_eq!(log_measure(&BigInt::from(2)).unwrap(), 1);
        assert_eq!(log_measure(&BigInt::from(11)).unwrap(), 3);
        assert_eq!(log_measure(&BigInt::from(0)), Err(NumError::ZeroSeminorm));
    }

    #[test]
    fn log_measure_around_powers_of_e() {
        // e^1..e^4 ≈ 2.718, 7.389, 20.086, 54.598
        for (n, want) in [(2, 1), (3, 2), (7, 2), (8, 3), (20, 3), (21, 4), (54, 4), (55, 5)] {
            assert_eq!(log_measure(&BigInt::from(n)).unwrap(), want, "n={n}");
        }
        // e^100 ≈ 2.688e43.
        let below: BigInt = "26881171418161354484126255515800135873611118".parse().unwrap();
        let above: BigInt = "26881171418161354484126255515800135873611119".parse().unwrap();
        assert_eq!(log_measure(&below).unwrap(), 100);
        assert_eq!(log_measure(&above).unwrap(), 101);
    }
}
