pub mod exactnum;
pub mod moebius;
pub mod certify;
pub mod pwp;
pub mod surgery;

pub use exactnum::{AlgebraicReal, Rational, RingSpec};
pub use moebius::{Mat2, ProjPoint};
pub use pwp::PwpMap;

/// `SL_2(Q)` matrix.
pub type RatMat = Mat2<Rational>;
/// `SL_2` matrix over a real quadratic field.
pub type SurdMat = Mat2<AlgebraicReal>;
/// Element with rational pieces.
pub type RatPwp = PwpMap<Rational>;
/// Element with pieces over a real quadratic field.
pub type SurdPwp = PwpMap<AlgebraicReal>;
