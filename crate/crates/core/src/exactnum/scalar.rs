use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{AlgebraicReal, NumError, Rational, RingSpec};

/// Exact ordered field used for matrix entries.
///
/// Implemented for [`Rational`] and [`AlgebraicReal`]. Operator arithmetic on
/// `AlgebraicReal` panics on mixed radicands, so generic code checks
/// [`Scalar::compatible`] (or lifts with [`Scalar::to_real`] and uses the
/// fallible methods) wherever operands may come from different fields.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn to_real(&self) -> AlgebraicReal;
    fn exact_cmp(&self, other: &Self) -> Ordering;
    fn in_ring(&self, ring: &RingSpec) -> bool;
    fn conjugate(&self) -> Self;
    fn parse_exact(s: &str) -> Result<Self, NumError>;
    fn as_rational(&self) -> Option<Rational>;
    fn from_rational(r: Rational) -> Self;

    fn compatible(&self, other: &Self) -> bool {
        self.to_real().compatible(&other.to_real())
    }

    fn is_negative_exact(&self) -> bool {
        self.exact_cmp(&Self::zero()) == Ordering::Less
    }

    fn is_positive_exact(&self) -> bool {
        self.exact_cmp(&Self::zero()) == Ordering::Greater
    }
}

impl Scalar for Rational {
    fn to_real(&self) -> AlgebraicReal {
        AlgebraicReal::from_rational(self.clone())
    }
    fn exact_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn in_ring(&self, ring: &RingSpec) -> bool {
        ring.contains(self)
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn parse_exact(s: &str) -> Result<Self, NumError> {
        super::parse_rational(s)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn is_negative_exact(&self) -> bool {
        self.is_negative()
    }
    fn is_positive_exact(&self) -> bool {
        self.is_positive()
    }
}

impl Scalar for AlgebraicReal {
    fn to_real(&self) -> AlgebraicReal {
        self.clone()
    }
    fn exact_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    /// `Z[sqrt D]` membership: both coordinates integral and the radicand matching.
    fn in_ring(&self, ring: &RingSpec) -> bool {
        match (self.radicand(), ring) {
            (None, _) => ring.contains(self.rational_part()),
            (Some(d), RingSpec::QuadraticOrder(e)) => {
                *d == (*e).into()
                    && self.rational_part().is_integer()
                    && self.surd_part().is_integer()
            }
            (Some(_), _) => false,
        }
    }
    fn conjugate(&self) -> Self {
        AlgebraicReal::conjugate(self)
    }
    fn parse_exact(s: &str) -> Result<Self, NumError> {
        s.parse()
    }
    fn as_rational(&self) -> Option<Rational> {
        AlgebraicReal::as_rational(self).cloned()
    }
    fn from_rational(r: Rational) -> Self {
        AlgebraicReal::from_rational(r)
    }
    fn compatible(&self, other: &Self) -> bool {
        AlgebraicReal::compatible(self, other)
    }
}
