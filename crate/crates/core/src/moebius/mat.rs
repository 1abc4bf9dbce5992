use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::ProjPoint;
use super::MoebiusError;
use crate::exactnum::{AlgebraicReal, NumError, Rational, RingSpec, Scalar};

/// Determinant-one 2x2 matrix acting on the projective line by
/// `x -> (a x + b) / (c x + d)`.
///
/// Entries are either rationals or surds of a single quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

/// Trace class of an `SL_2` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoebiusClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self, MoebiusError> {
        let m = Mat2 { a, b, c, d };
        if m.radicand().is_err() {
            return Err(MoebiusError::Num(NumError::MixedRadicands(
                "matrix".into(),
                "entries".into(),
            )));
        }
        let det = m.det();
        if !det.is_one() {
            return Err(MoebiusError::Determinant(det.to_string()));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(a: T, b: T, c: T, d: T) -> Self {
        let m = Mat2 { a, b, c, d };
        debug_assert!(m.det().is_one());
        m
    }

    pub fn identity() -> Self {
        Mat2 {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    /// `x -> x + t`.
    pub fn translation(t: T) -> Self {
        Mat2 {
            a: T::one(),
            b: t,
            c: T::zero(),
            d: T::one(),
        }
    }

    /// `diag(s, 1/s)`, i.e. `x -> s^2 x`.
    pub fn diagonal(s: T) -> Result<Self, MoebiusError> {
        if s.is_zero() {
            return Err(MoebiusError::Num(NumError::DivisionByZero));
        }
        let inv = T::one() / s.clone();
        Ok(Mat2 {
            a: s,
            b: T::zero(),
            c: T::zero(),
            d: inv,
        })
    }

    pub fn a(&self) -> &T {
        &self.a
    }
    pub fn b(&self) -> &T {
        &self.b
    }
    pub fn c(&self) -> &T {
        &self.c
    }
    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// The quadratic field the entries live in, if any.
    pub fn radicand(&self) -> Result<Option<BigInt>, NumError> {
        let mut acc = AlgebraicReal::zero();
        for e in self.entries() {
            let r = e.to_real();
            acc.common_radicand(&r)?;
            if !r.is_rational() {
                acc = r;
            }
        }
        Ok(acc.radicand().cloned())
    }

    fn compatible_with(&self, other: &Self) -> Result<(), NumError> {
        let (p, q) = (self.radicand()?, other.radicand()?);
        match (p, q) {
            (Some(x), Some(y)) if x != y => {
                Err(NumError::MixedRadicands(x.to_string(), y.to_string()))
            }
            _ => Ok(()),
        }
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, NumError> {
        self.compatible_with(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        Mat2 {
            a: a.clone() * e.clone() + b.clone() * g.clone(),
            b: a.clone() * f.clone() + b.clone() * h.clone(),
            c: c.clone() * e.clone() + d.clone() * g.clone(),
            d: c.clone() * f.clone() + d.clone() * h.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            sq = sq.mul_unchecked(&sq);
            e >>= 1;
        }
        acc
    }

    /// Sign representative in `PSL_2`: `c > 0`, or `c = 0` and `d > 0`.
    pub fn canonical(&self) -> Self {
        let flip = match self.c.exact_cmp(&T::zero()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.d.is_negative_exact(),
        };
        if flip {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn psl2_eq(&self, other: &Self) -> bool {
        self == other || *self == other.neg()
    }

    pub fn is_psl2_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn classify(&self) -> MoebiusClass {
        if self.is_psl2_identity() {
            return MoebiusClass::Identity;
        }
        let t = self.trace();
        let four = T::one() + T::one() + T::one() + T::one();
        match (t.clone() * t).exact_cmp(&four) {
            Ordering::Less => MoebiusClass::Elliptic,
            Ordering::Equal => MoebiusClass::Parabolic,
            Ordering::Greater => MoebiusClass::Hyperbolic,
        }
    }

    pub fn act(&self, x: &ProjPoint) -> Result<ProjPoint, NumError> {
        let [a, b, c, d] = self.entries().map(Scalar::to_real);
        match x {
            ProjPoint::Infinity => {
                if c.is_zero() {
                    Ok(ProjPoint::Infinity)
                } else {
                    Ok(ProjPoint::Finite(a.try_div(&c)?))
                }
            }
            ProjPoint::Finite(x) => {
                let den = c.try_mul(x)?.try_add(&d)?;
                if den.is_zero() {
                    return Ok(ProjPoint::Infinity);
                }
                let num = a.try_mul(x)?.try_add(&b)?;
                Ok(ProjPoint::Finite(num.try_div(&den)?))
            }
        }
    }

    /// Image of a finite point; `None` at the pole.
    pub fn apply(&self, x: &AlgebraicReal) -> Result<Option<AlgebraicReal>, NumError> {
        Ok(self.act(&ProjPoint::Finite(x.clone()))?.finite().cloned())
    }

    /// The finite point mapped to infinity, if any.
    pub fn pole(&self) -> Option<AlgebraicReal> {
        if self.c.is_zero() {
            return None;
        }
        Some((-self.d.clone() / self.c.clone()).to_real())
    }

    /// `1 / (c x + d)^2`.
    pub fn derivative_at(&self, x: &AlgebraicReal) -> Result<AlgebraicReal, MoebiusError> {
        let den = self.c.to_real().try_mul(x)?.try_add(&self.d.to_real())?;
        if den.is_zero() {
            return Err(MoebiusError::PoleAtPoint(x.to_string()));
        }
        Ok(den.square().recip()?)
    }

    /// Real fixed points in ascending order, infinity last.
    pub fn fixed_points(&self) -> Result<Vec<ProjPoint>, MoebiusError> {
        if self.is_psl2_identity() {
            return Err(MoebiusError::IdentityMatrix);
        }
        let [a, b, c, d] = self.entries().map(Scalar::to_real);
        if c.is_zero() {
            if a == d {
                return Ok(vec![ProjPoint::Infinity]);
            }
            let x = b.try_div(&d.try_sub(&a)?)?;
            return Ok(vec![ProjPoint::Finite(x), ProjPoint::Infinity]);
        }
        let t = a.try_add(&d)?;
        let disc = t.try_mul(&t)?.try_sub(&AlgebraicReal::from_int(4))?;
        let two_c = c.try_add(&c)?;
        let a_minus_d = a.try_sub(&d)?;
        match disc.signum() {
            Ordering::Less => Ok(vec![]),
            Ordering::Equal => Ok(vec![ProjPoint::Finite(a_minus_d.try_div(&two_c)?)]),
            Ordering::Greater => {
                let root = real_sqrt(&disc)?;
                let mut pts = vec![
                    a_minus_d.try_sub(&root)?.try_div(&two_c)?,
                    a_minus_d.try_add(&root)?.try_div(&two_c)?,
                ];
                pts.sort();
                Ok(pts.into_iter().map(ProjPoint::Finite).collect())
            }
        }
    }

    /// `(repelling, attracting)` fixed points of a hyperbolic matrix; the
    /// attracting one belongs to the eigenvalue of modulus above one.
    pub fn hyperbolic_fixed_points(&self) -> Result<(ProjPoint, ProjPoint), MoebiusError> {
        if self.classify() != MoebiusClass::Hyperbolic {
            return Err(MoebiusError::NotHyperbolic);
        }
        let [a, b, c, d] = self.entries().map(Scalar::to_real);
        if c.is_zero() {
            let finite = ProjPoint::Finite(b.try_div(&d.try_sub(&a)?)?);
            let a_dominant = a.square() > d.square();
            return Ok(if a_dominant {
                (finite, ProjPoint::Infinity)
            } else {
                (ProjPoint::Infinity, finite)
            });
        }
        let t = a.try_add(&d)?;
        let root = real_sqrt(&t.try_mul(&t)?.try_sub(&AlgebraicReal::from_int(4))?)?;
        let two = AlgebraicReal::from_int(2);
        let big = if t.signum() == Ordering::Greater {
            t.try_add(&root)?
        } else {
            t.try_sub(&root)?
        }
        .try_div(&two)?;
        let small = t.try_sub(&big)?;
        let point = |lambda: &AlgebraicReal| -> Result<ProjPoint, NumError> {
            Ok(ProjPoint::Finite(lambda.try_sub(&d)?.try_div(&c)?))
        };
        Ok((point(&small)?, point(&big)?))
    }

    pub fn conjugate(&self) -> Self {
        Mat2 {
            a: self.a.conjugate(),
            b: self.b.conjugate(),
            c: self.c.conjugate(),
            d: self.d.conjugate(),
        }
    }

    /// True when some sign of the matrix has all entries in the ring.
    pub fn in_ring(&self, ring: &RingSpec) -> bool {
        self.entries().iter().all(|e| e.in_ring(ring))
    }

    pub fn to_real(&self) -> Mat2<AlgebraicReal> {
        Mat2 {
            a: self.a.to_real(),
            b: self.b.to_real(),
            c: self.c.to_real(),
            d: self.d.to_real(),
        }
    }

    pub fn as_rational(&self) -> Option<Mat2<Rational>> {
        Some(Mat2 {
            a: self.a.as_rational()?,
            b: self.b.as_rational()?,
            c: self.c.as_rational()?,
            d: self.d.as_rational()?,
        })
    }

    pub fn from_rational(m: &Mat2<Rational>) -> Self {
        Mat2 {
            a: T::from_rational(m.a.clone()),
            b: T::from_rational(m.b.clone()),
            c: T::from_rational(m.c.clone()),
            d: T::from_rational(m.d.clone()),
        }
    }
}

/// Square root inside the quadratic surds; the radicand must be rational.
pub(crate) fn real_sqrt(x: &AlgebraicReal) -> Result<AlgebraicReal, NumError> {
    match x.as_rational() {
        Some(r) => AlgebraicReal::sqrt(r),
        None => Err(NumError::NotQuadratic(x.to_string())),
    }
}

impl<T: Scalar> Mul for &Mat2<T> {
    type Output = Mat2<T>;

    /// Panics when the factors live in different quadratic fields.
    fn mul(self, rhs: &Mat2<T>) -> Mat2<T> {
        match self.try_mul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Mat2<T>) -> Mat2<T> {
        &self * &rhs
    }
}

pub fn act<T: Scalar>(g: &Mat2<T>, x: &ProjPoint) -> Result<ProjPoint, NumError> {
    g.act(x)
}

pub fn classify<T: Scalar>(g: &Mat2<T>) -> MoebiusClass {
    g.classify()
}

pub fn fixed_points<T: Scalar>(g: &Mat2<T>) -> Result<Vec<ProjPoint>, MoebiusError> {
    g.fixed_points()
}

pub fn derivative_at<T: Scalar>(g: &Mat2<T>, x: &AlgebraicReal) -> Result<AlgebraicReal, MoebiusError> {
    g.derivative_at(x)
}

pub fn psl2_equal<T: Scalar>(g: &Mat2<T>, h: &Mat2<T>) -> bool {
    g.psl2_eq(h)
}

impl<T: Scalar> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl<T: Scalar> FromStr for Mat2<T> {
    type Err = MoebiusError;

    /// Parses `[[a,b],[c,d]]`; entries may be quoted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '"')
            .collect();
        let bad = || MoebiusError::Parse(s.to_string());
        let inner = t
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let (r1, r2) = inner.split_once("],[").ok_or_else(bad)?;
        let row = |r: &str| -> Result<(T, T), MoebiusError> {
            let (x, y) = r.split_once(',').ok_or_else(bad)?;
            Ok((T::parse_exact(x)?, T::parse_exact(y)?))
        };
        let (a, b) = row(r1)?;
        let (c, d) = row(r2)?;
        Mat2::new(a, b, c, d)
    }
}

impl<T: Scalar> Serialize for Mat2<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ]
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Mat2<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, e]] = <[[String; 2]; 2]>::deserialize(d)?;
        let p = |s: &str| T::parse_exact(s).map_err(D::Error::custom);
        Mat2::new(p(&a)?, p(&b)?, p(&c)?, p(&e)?).map_err(D::Error::custom)
    }
}
