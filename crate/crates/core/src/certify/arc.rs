use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::exactnum::{simplest_between, AlgebraicReal, NumError, Rational, Scalar};
use crate::moebius::{Mat2, ProjPoint};

/// Closed arc of the projective line running forward (increasing, through
/// infinity if needed) from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub from: ProjPoint,
    pub to: ProjPoint,
}

/// Position of `x` when the circle is cut open at `base`.
fn key(base: &ProjPoint, x: &ProjPoint) -> (u8, Option<AlgebraicReal>) {
    if x == base {
        return (0, None);
    }
    match (base, x) {
        (_, ProjPoint::Infinity) => (2, None),
        (ProjPoint::Infinity, ProjPoint::Finite(v)) => (1, Some(v.clone())),
        (ProjPoint::Finite(b), ProjPoint::Finite(v)) => match v.cmp(b) {
            Ordering::Greater => (1, Some(v.clone())),
            _ => (3, Some(v.clone())),
        },
    }
}

impl Arc {
    pub fn new(from: ProjPoint, to: ProjPoint) -> Self {
        Arc { from, to }
    }

    pub fn rational(from: Rational, to: Rational) -> Self {
        Arc::new(ProjPoint::rational(from), ProjPoint::rational(to))
    }

    /// Closure of the complement.
    pub fn complement(&self) -> Self {
        Arc::new(self.to.clone(), self.from.clone())
    }

    /// Strictly inside the open arc.
    pub fn interior_contains(&self, x: &ProjPoint) -> bool {
        let k = key(&self.from, x);
        k.0 != 0 && k < key(&self.from, &self.to)
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        *x == self.from || *x == self.to || self.interior_contains(x)
    }

    /// `self` lies in the open interior of `other`.
    pub fn inside_interior_of(&self, other: &Arc) -> bool {
        other.interior_contains(&self.from)
            && other.interior_contains(&self.to)
            && key(&other.from, &self.from) <= key(&other.from, &self.to)
    }

    pub fn disjoint(&self, other: &Arc) -> bool {
        other.inside_interior_of(&self.complement())
    }

    pub fn image<T: Scalar>(&self, g: &Mat2<T>) -> Result<Arc, NumError> {
        Ok(Arc::new(g.act(&self.from)?, g.act(&self.to)?))
    }
}

/// A rational point (or infinity) strictly inside the open forward arc from
/// `a` to `b`.
pub(crate) fn point_inside(a: &ProjPoint, b: &ProjPoint) -> ProjPoint {
    let one = Rational::from_integer(1.into());
    match (a, b) {
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) if x < y => {
            ProjPoint::rational(simplest_between(x, Some(y)))
        }
        (ProjPoint::Finite(_), ProjPoint::Finite(_)) => ProjPoint::Infinity,
        (ProjPoint::Infinity, ProjPoint::Finite(y)) => {
            ProjPoint::rational(Rational::from_integer(y.floor()) - one)
        }
        (ProjPoint::Finite(x), ProjPoint::Infinity) => {
            ProjPoint::rational(Rational::from_integer(x.floor()) + one)
        }
        (ProjPoint::Infinity, ProjPoint::Infinity) => ProjPoint::rational(Rational::from_integer(0.into())),
    }
}
