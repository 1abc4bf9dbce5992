use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{PwpError, PwpMap};
use crate::exactnum::{AlgebraicReal, Rational};
use crate::moebius::{Mat2, MoebiusClass};

/// A hyperbolic element of `PSL_2(Z[1/S])` fixing a breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakpointWitness {
    pub breakpoint: AlgebraicReal,
    pub witness: Mat2<Rational>,
    /// `SL_2(Z)` matrix sending 0 to the breakpoint; identity in the hyperbolic case.
    pub conjugator: Mat2<Rational>,
}

/// `[[u, r], [v, s]]` in `SL_2(Z)` with second column `x = r/s`, `s > 0`, and
/// `v` the representative of `-r^-1 mod s` in `(-s/2, s/2]`.
pub fn euclid_conjugator(x: &Rational) -> Mat2<Rational> {
    let (r, s) = (x.numer().clone(), x.denom().clone());
    let inv = r.mod_floor(&s).extended_gcd(&s).x;
    let mut v = (-inv).mod_floor(&s);
    if &v * 2 > s {
        v -= &s;
    }
    let u = (BigInt::one() + &v * &r) / &s;
    let q = |n: BigInt| Rational::from_integer(n);
    Mat2::new(q(u), q(r), q(v), q(s)).expect("determinant one by construction")
}

/// Hyperbolic element fixing the breakpoint `x` of `h`.
///
/// A hyperbolic transition `left^-1 * right` is returned as is. A parabolic one
/// forces `x` rational, and the witness is `k diag(p, 1/p) k^-1` for the least
/// prime `p` of `primes` and `k` from [`euclid_conjugator`].
pub fn breakpoint_witness(
    h: &PwpMap<Rational>,
    x: &AlgebraicReal,
    primes: &BTreeSet<u64>,
) -> Result<BreakpointWitness, PwpError> {
    let p = *primes.iter().next().ok_or(PwpError::EmptyPrimeSet)?;
    let i = h
        .breakpoints()
        .binary_search(x)
        .map_err(|_| PwpError::NotABreakpoint(x.to_string()))?;
    let t = h.transition(i);
    match t.classify() {
        MoebiusClass::Hyperbolic => Ok(BreakpointWitness {
            breakpoint: x.clone(),
            witness: t.canonical(),
            conjugator: Mat2::identity(),
        }),
        MoebiusClass::Parabolic => {
            let r = x
                .as_rational()
                .ok_or_else(|| PwpError::DegenerateTransition(x.to_string()))?;
            let k = euclid_conjugator(r);
            let d = Mat2::diagonal(Rational::from_integer(p.into()))?;
            let witness = (&(&k * &d) * &k.inverse()).canonical();
            Ok(BreakpointWitness {
                breakpoint: x.clone(),
                witness,
                conjugator: k,
            })
        }
        _ => Err(PwpError::DegenerateTransition(x.to_string())),
    }
}
