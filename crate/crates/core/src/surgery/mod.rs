//! Constructions of elements: localized copies of a single matrix, C1
//! smoothing at breakpoints, and generators of Thompson's group `F`.

mod cut;
mod smooth;
mod thompson;

pub use cut::{cut_and_paste, rational_cut_and_paste, CutPasteTrace, Localization};
pub use smooth::{c1_interpolate, smooth_element, SmoothedElement, SmoothingPatch};
pub use thompson::{commutator, thompson_generators, thompson_relators};

use thiserror::Error;

use crate::exactnum::NumError;
use crate::moebius::MoebiusError;
use crate::pwp::PwpError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("the matrix sends the point to infinity")]
    MapsXToInfinity,
    #[error("the matrix is affine; use the integral construction")]
    AffineInput,
    #[error("scale 1 needs no interpolation")]
    ScaleIsOne,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("transition at {0} has irrational fixed points or eigenvalues")]
    IrrationalTransitionData(String),
    #[error("transition at {0} is parabolic")]
    ParabolicTransition(String),
    #[error("ordering check failed for n = {0}")]
    OrderingFailed(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Pwp(#[from] PwpError),
}
