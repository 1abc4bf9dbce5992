use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumError;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"`. Non-reduced input is accepted and normalized.
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    let s = s.trim();
    let bad = || NumError::Parse(s.to_string());
    match s.split_once('/') {
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(NumError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// p-adic valuation of a rational; zero has valuation `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &Rational, p: u64) -> Result<Valuation, NumError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(
        int_valuation(x.numer(), p) - int_valuation(x.denom(), p),
    ))
}

/// Prime factors of a positive integer small enough to trial-divide.
pub(crate) fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `p^e` as a rational, `e` of either sign.
pub fn prime_power(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(3, 8), 2).unwrap(), Valuation::Finite(-3));
        assert_eq!(padic_valuation(&int(50), 5).unwrap(), Valuation::Finite(2));
        assert_eq!(padic_valuation(&int(0), 2).unwrap(), Valuation::Infinite);
        assert_eq!(padic_valuation(&int(6), 4), Err(NumError::NotPrime(4)));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap().to_string(), "-3/2");
        assert_eq!(parse_rational(" 7 ").unwrap().to_string(), "7");
        assert_eq!(parse_rational("1/0"), Err(NumError::DivisionByZero));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(prime_factors_u64(360), vec![2, 3, 5]);
    }
}
