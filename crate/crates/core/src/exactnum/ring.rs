use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::rational::{int_valuation, is_prime, prime_factors_u64, Rational};
use super::real::is_squarefree;
use super::NumError;

/// Coefficient ring of a group of piecewise-projective maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    /// `Z[1/S]`; an empty `S` is the same ring as `Integers`.
    SIntegers(BTreeSet<u64>),
    Rationals,
    /// `Z[sqrt(D)]` with `D` squarefree and at least 2.
    QuadraticOrder(u64),
}

impl RingSpec {
    pub fn s_integers<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self, NumError> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(&p) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(NumError::NotPrime(p));
        }
        Ok(RingSpec::SIntegers(set))
    }

    pub fn quadratic(d: u64) -> Result<Self, NumError> {
        if d < 2 || !is_squarefree(&BigInt::from(d)) {
            return Err(NumError::NotSquarefree(d.to_string()));
        }
        Ok(RingSpec::QuadraticOrder(d))
    }

    /// Membership of a rational. For `Z[sqrt(D)]` a rational belongs iff it is an integer.
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            RingSpec::Rationals => true,
            RingSpec::Integers | RingSpec::QuadraticOrder(_) => x.denom().is_one(),
            RingSpec::SIntegers(primes) => {
                let mut den = x.denom().clone();
                for &p in primes {
                    let v = if den.is_one() { 0 } else { int_valuation(&den, p) };
                    if v > 0 {
                        den /= num_traits::pow(BigInt::from(p), v as usize);
                    }
                }
                den.is_one()
            }
        }
    }

    /// True when every element of the ring lies in `Z_p`.
    pub fn inside_zp(&self, p: u64) -> bool {
        match self {
            RingSpec::Integers | RingSpec::QuadraticOrder(_) => true,
            RingSpec::SIntegers(primes) => !primes.contains(&p),
            RingSpec::Rationals => false,
        }
    }
}

/// Membership of a rational in a coefficient ring.
pub fn in_ring(x: &Rational, ring: &RingSpec) -> bool {
    ring.contains(x)
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::SIntegers(s) if s.is_empty() => f.write_str("Z"),
            RingSpec::SIntegers(s) => {
                let list: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "Z[1/{}]", list.join(","))
            }
            RingSpec::QuadraticOrder(d) => write!(f, "Z[sqrt({d})]"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = NumError;

    /// Accepts `Z`, `Q`, `Z[1/6]`, `Z[1/2,3]`, `Z[1/2,1/3]`, `Z[sqrt(2)]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(s.to_string());
        match t.as_str() {
            "Z" => return Ok(RingSpec::Integers),
            "Q" => return Ok(RingSpec::Rationals),
            _ => {}
        }
        let inner = t
            .strip_prefix("Z[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        if let Some(d) = inner
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| inner.strip_prefix('√'))
        {
            return RingSpec::quadratic(d.parse().map_err(|_| bad())?);
        }
        let list = inner.strip_prefix("1/").ok_or_else(bad)?;
        let mut primes = BTreeSet::new();
        for item in list.split(',') {
            let item = item.strip_prefix("1/").unwrap_or(item);
            let n: u64 = item.parse().map_err(|_| bad())?;
            if n < 2 {
                return Err(bad());
            }
            primes.extend(prime_factors_u64(n));
        }
        Ok(RingSpec::SIntegers(primes))
    }
}

/// Parses a comma-separated prime list; the empty string is the empty set.
pub fn parse_prime_set(s: &str) -> Result<BTreeSet<u64>, NumError> {
    let mut out = BTreeSet::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let p: u64 = item.parse().map_err(|_| NumError::Parse(s.to_string()))?;
        if !is_prime(p) {
            return Err(NumError::NotPrime(p));
        }
        out.insert(p);
    }
    Ok(out)
}
