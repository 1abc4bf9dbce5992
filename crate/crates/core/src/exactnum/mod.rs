//! Exact arithmetic over `Q` and real quadratic fields.
//!
//! Rationals are `num_rational::BigRational`. Quadratic surds live in
//! [`AlgebraicReal`]; values from different fields `Q(sqrt D)` can be compared
//! but never combined arithmetically.

mod rational;
mod real;
mod ring;
mod scalar;
pub mod text;

pub use rational::{
    int, is_prime, padic_valuation, parse_rational, prime_power, rat, Rational, Valuation,
};
pub use real::{
    arith, galois_conjugate, is_squarefree, rational_between, simplest_between, square_split,
    AlgebraicReal, ArithOp, COMPARE_START_BITS, TRIAL_BOUND,
};
pub use ring::{in_ring, parse_prime_set, RingSpec};
pub use scalar::Scalar;


use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed radicands sqrt({0}) and sqrt({1})")]
    MixedRadicands(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("radicand {0} is not squarefree")]
    NotSquarefree(String),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("cannot certify a squarefree part of {0} by trial division")]
    RadicandTooLarge(String),
    #[error("square root of {0} is not a quadratic surd")]
    NotQuadratic(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}
