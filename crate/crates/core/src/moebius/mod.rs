//! `SL_2` matrices acting on the real projective line.

mod gauss;
mod mat;
mod point;

pub use gauss::{reduce_to_gauss_domain, GaussianRational};
pub use mat::{act, classify, derivative_at, fixed_points, psl2_equal, Mat2, MoebiusClass};
pub use point::ProjPoint;


use thiserror::Error;

use crate::exactnum::NumError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoebiusError {
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("matrix is the identity in PSL2")]
    IdentityMatrix,
    #[error("matrix is not hyperbolic")]
    NotHyperbolic,
    #[error("pole at {0}")]
    PoleAtPoint(String),
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("cannot parse matrix {0:?}")]
    Parse(String),
    #[error(transparent)]
    Num(#[from] NumError),
}
