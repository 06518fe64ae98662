//! Small integer helpers shared by the modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// `p^e` as an arbitrary precision integer.
pub fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `p^e` if it fits in an `i64`.
pub fn small_pow(p: u64, e: u32) -> Option<i64> {
    let v = p.checked_pow(e)?;
    i64::try_from(v).ok()
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Smallest integer not less than `r`.
pub fn ceil(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + BigInt::one()
    }
}

/// Formats a rational as `num/den`, also for integers.
pub fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(check_prime(4), Err(Error::InvalidPrime(4)));
    }

    #[test]
    fn floor_ceil_negative() {
        let r = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(floor(&r), BigInt::from(-4));
        assert_eq!(ceil(&r), BigInt::from(-3));
        let r = BigRational::from_integer(BigInt::from(5));
        assert_eq!(floor(&r), ceil(&r));
    }

    #[test]
    fn ratio_text() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(4));
        assert_eq!(fmt_ratio(&r), "3/2");
        assert_eq!(parse_ratio("3/2"), Some(r));
        assert_eq!(fmt_ratio(&BigRational::from_integer(BigInt::from(2))), "2/1");
        assert_eq!(parse_ratio("1/0"), None);
    }
}
