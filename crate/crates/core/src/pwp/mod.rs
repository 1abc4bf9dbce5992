//! Piecewise-projective homeomorphisms of the real line.

mod json;
mod map;
mod witness;

pub use json::{ElementDoc, PieceDoc};
pub use map::{compose, invert, projective_part, ring_membership, smoothness, PwpMap, Side, Smoothness};
pub use witness::{breakpoint_witness, euclid_conjugator, BreakpointWitness};

use thiserror::Error;

use crate::exactnum::NumError;
use crate::moebius::MoebiusError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PwpError {
    #[error("{pieces} pieces for {breakpoints} breakpoints")]
    PieceCountMismatch { breakpoints: usize, pieces: usize },
    #[error("breakpoints are not strictly increasing")]
    NotIncreasing,
    #[error("piece {0} has its pole inside its interval")]
    PoleInsidePiece(usize),
    #[error("map is not a bijection of the real line")]
    NotBijective,
    #[error("pieces disagree at breakpoint {0}")]
    DiscontinuousAtBreakpoint(String),
    #[error("point is a breakpoint; a side is required")]
    AtBreakpointWithoutSide,
    #[error("{0} is not a breakpoint")]
    NotABreakpoint(String),
    #[error("prime set is empty")]
    EmptyPrimeSet,
    #[error("transition at {0} is neither hyperbolic nor parabolic")]
    DegenerateTransition(String),
    #[error("malformed element: {0}")]
    Malformed(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}
