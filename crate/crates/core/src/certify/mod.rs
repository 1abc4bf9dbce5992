//! Finite, re-checkable certificates: p-adic integrality, Haar measure
//! motion on balls of `P^1(Q_p)`, fixed-versus-moved witnesses, and
//! ping-pong pairs.

mod arc;
mod gap;
mod haar;
mod padic;
mod pingpong;

pub use arc::Arc;
pub use gap::{gap_witness, GapWitness, GeneratorCheck, PieceCheck};
pub use haar::{pushforward_haar, uniform_measure, Ball, BallMeasure, MAX_BALLS};
pub use padic::{cartan_decompose, in_psl2_zp, CartanDecomposition};
pub use pingpong::{
    north_south_certificate, schottky_certificate, schottky_certificate_with, InclusionCheck,
    PingPongCertificate, MAX_POWER,
};

use thiserror::Error;

use crate::exactnum::NumError;
use crate::moebius::MoebiusError;
use crate::pwp::PwpError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("S' adds no prime to S")]
    NoSeparatingPrime,
    #[error("generator {0} has a coefficient outside Z[1/S]")]
    GeneratorOutsideRing(usize),
    #[error("depth must be at least 1")]
    DepthTooShallow,
    #[error("{0} balls exceed the enumeration limit")]
    DepthTooLarge(u128),
    #[error("matrix is not hyperbolic")]
    NotHyperbolic,
    #[error("interval meets a fixed point")]
    IntervalHitsFixedPoint,
    #[error("neighbourhood misses the attracting fixed point")]
    AttractorOutside,
    #[error("the two matrices share a fixed point")]
    SharedFixedPoint,
    #[error("no power up to {0} satisfies the inclusions")]
    NoConvergence(u32),
    #[error("certificate check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Pwp(#[from] PwpError),
}
