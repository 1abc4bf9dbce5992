use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{parse_rational, Rational};
use super::NumError;

/// Trial-division bound used when splitting square factors out of a radicand.
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Fractional bits used by the first round of interval comparison.
pub const COMPARE_START_BITS: u64 = 64;

/// An exact real number `rational + surd * sqrt(radicand)`.
///
/// The representation is canonical: the radicand is present exactly when the
/// surd part is nonzero, and it is squarefree and at least 2. Structural
/// equality is therefore value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicReal {
    rational: Rational,
    surd: Rational,
    radicand: Option<BigInt>,
}

impl AlgebraicReal {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicReal {
            rational: r,
            surd: Rational::zero(),
            radicand: None,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds `rational + surd * sqrt(radicand)` from a caller-normalized radicand.
    pub fn new(rational: Rational, surd: Rational, radicand: BigInt) -> Result<Self, NumError> {
        if surd.is_zero() {
            return Ok(Self::from_rational(rational));
        }
        if radicand < BigInt::from(2) || !is_squarefree(&radicand) {
            return Err(NumError::NotSquarefree(radicand.to_string()));
        }
        Ok(AlgebraicReal {
            rational,
            surd,
            radicand: Some(radicand),
        })
    }

    /// Exact square root of a nonnegative rational, square factors extracted.
    pub fn sqrt(r: &Rational) -> Result<Self, NumError> {
        if r.is_negative() {
            return Err(NumError::NegativeRadicand(r.to_string()));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let (kp, mp) = square_split(r.numer().magnitude())?;
        let (kq, mq) = square_split(r.denom().magnitude())?;
        let coeff = Rational::new(
            BigInt::from(kp),
            BigInt::from(kq) * BigInt::from(mq.clone()),
        );
        let d = BigInt::from(mp * mq);
        if d.is_one() {
            return Ok(Self::from_rational(coeff));
        }
        Ok(AlgebraicReal {
            rational: Rational::zero(),
            surd: coeff,
            radicand: Some(d),
        })
    }

    fn from_parts(rational: Rational, surd: Rational, radicand: Option<BigInt>) -> Self {
        if surd.is_zero() {
            Self::from_rational(rational)
        } else {
            AlgebraicReal {
                rational,
                surd,
                radicand,
            }
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        self.radicand.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_none()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.radicand.is_none().then_some(&self.rational)
    }

    /// Image under the nontrivial automorphism of `Q(sqrt D)`.
    pub fn conjugate(&self) -> Self {
        AlgebraicReal {
            rational: self.rational.clone(),
            surd: -&self.surd,
            radicand: self.radicand.clone(),
        }
    }

    /// Radicand shared by both operands, or `MixedRadicands`.
    pub fn common_radicand(&self, other: &Self) -> Result<Option<BigInt>, NumError> {
        match (&self.radicand, &other.radicand) {
            (None, r) | (r, None) => Ok(r.clone()),
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            (Some(a), Some(b)) => Err(NumError::MixedRadicands(a.to_string(), b.to_string())),
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.common_radicand(other).is_ok()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(rhs)?;
        Ok(Self::from_parts(
            &self.rational + &rhs.rational,
            &self.surd + &rhs.surd,
            d,
        ))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, NumError> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(rhs)?;
        let dd = d
            .as_ref()
            .map(|v| Rational::from_integer(v.clone()))
            .unwrap_or_else(Rational::zero);
        Ok(Self::from_parts(
            &self.rational * &rhs.rational + &self.surd * &rhs.surd * dd,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
            d,
        ))
    }

    /// Field norm `r^2 - s^2 D`, zero only for the zero element.
    pub fn norm(&self) -> Rational {
        match &self.radicand {
            None => &self.rational * &self.rational,
            Some(d) => {
                &self.rational * &self.rational
                    - &self.surd * &self.surd * Rational::from_integer(d.clone())
            }
        }
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::from_parts(
            &self.rational / &n,
            -&self.surd / &n,
            self.radicand.clone(),
        ))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, NumError> {
        self.common_radicand(rhs)?;
        self.try_mul(&rhs.recip()?)
    }

    pub fn square(&self) -> Self {
        self.try_mul(self).expect("a value shares its own radicand")
    }

    /// Integers `lo <= x * 2^bits <= hi`.
    pub fn enclosure(&self, bits: u64) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let r = &self.rational * Rational::from_integer(scale.clone());
        let (rlo, rhi) = (r.floor().to_integer(), r.ceil().to_integer());
        match &self.radicand {
            None => (rlo, rhi),
            Some(d) => {
                let t = &self.surd * &self.surd * Rational::from_integer(d * &scale * &scale);
                let f = t.floor().to_integer().sqrt();
                if self.surd.is_positive() {
                    (rlo + &f, rhi + f + 1)
                } else {
                    (rlo - &f - 1, rhi - f)
                }
            }
        }
    }

    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let mut bits = COMPARE_START_BITS;
        loop {
            let (lo, hi) = self.enclosure(bits);
            let (flo, fhi) = (lo >> bits, hi >> bits);
            if flo == fhi {
                return flo;
            }
            bits *= 2;
        }
    }

    pub fn signum(&self) -> Ordering {
        self.cmp(&Self::zero())
    }

    /// Floating-point approximation for display only.
    pub fn approx_f64(&self) -> f64 {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        match &self.radicand {
            None => r,
            Some(d) => r + self.surd.to_f64().unwrap_or(f64::NAN) * d.to_f64().unwrap_or(f64::NAN).sqrt(),
        }
    }
}

fn compare(x: &AlgebraicReal, y: &AlgebraicReal) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
        return a.cmp(b);
    }
    // Values are distinct, so the enclosures separate at some finite precision.
    let mut bits = COMPARE_START_BITS;
    loop {
        let (xl, xh) = x.enclosure(bits);
        let (yl, yh) = y.enclosure(bits);
        if xh < yl {
            return Ordering::Less;
        }
        if yh < xl {
            return Ordering::Greater;
        }
        bits *= 2;
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for AlgebraicReal {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<&Rational> for AlgebraicReal {
    fn from(r: &Rational) -> Self {
        Self::from_rational(r.clone())
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            None => write!(f, "{}", self.rational),
            Some(d) => write!(f, "({})+({})*sqrt({})", self.rational, self.surd, d),
        }
    }
}

impl FromStr for AlgebraicReal {
    type Err = NumError;

    /// Accepts a rational `a/b` or the surd form `(a/b)+(c/d)*sqrt(D)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(s.to_string());
        if !t.contains("sqrt(") {
            return Ok(Self::from_rational(parse_rational(&t)?));
        }
        let body = t.strip_prefix('(').ok_or_else(bad)?;
        let (r, rest) = body.split_once(")+(").ok_or_else(bad)?;
        let (q, rest) = rest.split_once(")*sqrt(").ok_or_else(bad)?;
        let d = rest.strip_suffix(')').ok_or_else(bad)?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        Self::new(parse_rational(r)?, parse_rational(q)?, d)
    }
}

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> Self::Output {
        -&self
    }
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> Self::Output {
        AlgebraicReal {
            rational: -&self.rational,
            surd: -&self.surd,
            radicand: self.radicand.clone(),
        }
    }
}

// Operator forms panic on mixed radicands, the way integer division panics on
// zero; the `try_*` methods report it instead.
macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&AlgebraicReal> for &AlgebraicReal {
            type Output = AlgebraicReal;
            fn $method(self, rhs: &AlgebraicReal) -> AlgebraicReal {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $method(self, rhs: AlgebraicReal) -> AlgebraicReal {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Zero for AlgebraicReal {
    fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.radicand.is_none() && self.rational.is_zero()
    }
}

impl One for AlgebraicReal {
    fn one() -> Self {
        Self::from_rational(Rational::one())
    }
}

/// Arithmetic between values; fails on division by zero or mixed radicands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(x: &AlgebraicReal, y: &AlgebraicReal, op: ArithOp) -> Result<AlgebraicReal, NumError> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}

pub fn galois_conjugate(x: &AlgebraicReal) -> AlgebraicReal {
    x.conjugate()
}

/// Simplest rational (least denominator, then least magnitude) strictly
/// between `lo` and `hi`; `None` stands for `+inf`.
pub fn simplest_between(lo: &AlgebraicReal, hi: Option<&AlgebraicReal>) -> Rational {
    debug_assert!(hi.is_none_or(|h| lo < h));
    let zero = AlgebraicReal::zero();
    if *lo < zero && hi.is_none_or(|h| *h > zero) {
        return Rational::zero();
    }
    if let Some(h) = hi {
        if *h <= zero {
            return -simplest_between(&-h, Some(&-lo));
        }
    }
    let fl = lo.floor();
    let next = Rational::from_integer(&fl + 1);
    if hi.is_none_or(|h| AlgebraicReal::from(&next) < *h) {
        return next;
    }
    let h = hi.expect("bounded branch");
    let base = AlgebraicReal::from_rational(Rational::from_integer(fl.clone()));
    let inv_hi = (h - &base).recip().expect("hi > floor(lo)");
    let lo_off = lo - &base;
    let inv_lo = (!lo_off.is_zero()).then(|| lo_off.recip().expect("nonzero"));
    let inner = simplest_between(&inv_hi, inv_lo.as_ref());
    Rational::from_integer(fl) + inner.recip()
}

/// Rational strictly between two reals, preferring simple ones.
pub fn rational_between(lo: &AlgebraicReal, hi: &AlgebraicReal) -> Rational {
    simplest_between(lo, Some(hi))
}

pub fn is_squarefree(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    matches!(square_split(n.magnitude()), Ok((k, _)) if k.is_one())
}

/// Splits `n = k^2 * m` with `m` squarefree, using trial division up to
/// [`TRIAL_BOUND`]. A cofactor whose square-freeness cannot be settled
/// without factoring is rejected.
pub fn square_split(n: &BigUint) -> Result<(BigUint, BigUint), NumError> {
    let mut k = BigUint::one();
    let mut m = BigUint::one();
    let mut rem = n.clone();
    let mut d: u64 = 2;
    // Large values: remainders computed digit-wise without allocation.
    while rem.bits() > 127 && d <= TRIAL_BOUND {
        if rem_small(&rem, d) == 0 {
            let mut e = 0u32;
            while rem_small(&rem, d) == 0 {
                rem /= d;
                e += 1;
            }
            k *= BigUint::from(d).pow(e / 2);
            if e % 2 == 1 {
                m *= d;
            }
        }
        d = next_trial(d);
    }
    let mut exhausted_by_sqrt = false;
    if let Some(mut r) = rem.to_u128() {
        while d <= TRIAL_BOUND {
            if (d as u128) * (d as u128) > r {
                exhausted_by_sqrt = true;
                break;
            }
            if r % d as u128 == 0 {
                let mut e = 0u32;
                while r % d as u128 == 0 {
                    r /= d as u128;
                    e += 1;
                }
                k *= BigUint::from(d).pow(e / 2);
                if e % 2 == 1 {
                    m *= d;
                }
            }
            d = next_trial(d);
        }
        rem = BigUint::from(r);
    }
    if rem.is_one() {
        return Ok((k, m));
    }
    if exhausted_by_sqrt {
        // No factor up to sqrt(rem): rem is prime.
        return Ok((k, m * rem));
    }
    // Every prime factor of rem exceeds the trial bound.
    let s = rem.sqrt();
    if &s * &s == rem {
        return Ok((k * s, m));
    }
    let b = BigUint::from(TRIAL_BOUND);
    if rem < &b * &b * &b {
        // rem is p or p*q with distinct primes above the bound.
        return Ok((k, m * rem));
    }
    Err(NumError::RadicandTooLarge(n.to_string()))
}

fn next_trial(d: u64) -> u64 {
    if d == 2 {
        3
    } else {
        d + 2
    }
}

fn rem_small(n: &BigUint, d: u64) -> u64 {
    n.to_u32_digits()
        .iter()
        .rev()
        .fold(0u64, |acc, &digit| ((acc << 32) | digit as u64) % d)
}
