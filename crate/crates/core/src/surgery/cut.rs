use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SurgeryError;
use crate::exactnum::{text, AlgebraicReal, Rational, Scalar};
use crate::moebius::{Mat2, ProjPoint};
use crate::pwp::PwpMap;

/// Data of the localization `q0 = g T^n` used to cut `g` down to a
/// neighbourhood of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Localization<T> {
    #[serde(with = "text::rational")]
    pub n: Rational,
    /// Eigenvalue parameter of the rational variant.
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", serialize_with = "opt_int")]
    pub big_n: Option<BigInt>,
    pub q0: Mat2<T>,
    #[serde(with = "text::scalar")]
    pub tau: T,
    #[serde(rename = "lambdaMinus")]
    pub lambda_minus: AlgebraicReal,
    #[serde(rename = "lambdaPlus")]
    pub lambda_plus: AlgebraicReal,
    #[serde(rename = "xiMinus")]
    pub xi_minus: AlgebraicReal,
    #[serde(rename = "xiPlus")]
    pub xi_plus: AlgebraicReal,
}

fn opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// Output of a cut-and-paste run, with every intermediate quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CutPasteTrace<T> {
    pub g: Mat2<T>,
    pub x: AlgebraicReal,
    /// Absent when `g` is affine and `h = g`.
    #[serde(flatten)]
    pub localization: Option<Localization<T>>,
    pub h: PwpMap<T>,
}

struct Setup<T> {
    g: Mat2<T>,
    gx: AlgebraicReal,
    g_inf: AlgebraicReal,
    /// `+1` when `g x < g inf`.
    sign: i8,
}

fn setup<T: Scalar>(g: &Mat2<T>, x: &AlgebraicReal) -> Result<Option<Setup<T>>, SurgeryError> {
    let gx = match g.act(&ProjPoint::Finite(x.clone()))? {
        ProjPoint::Infinity => return Err(SurgeryError::MapsXToInfinity),
        ProjPoint::Finite(v) => v,
    };
    if g.c().is_zero() {
        return Ok(None);
    }
    let g = g.canonical();
    let g_inf = g.a().to_real().try_div(&g.c().to_real())?;
    let sign = if gx < g_inf { 1 } else { -1 };
    Ok(Some(Setup { g, gx, g_inf, sign }))
}

/// `P(gx)` at shift `n`, for `P(y) = c y^2 + (d + n c - a) y - (b + n a)`.
/// Its fixed-point roots straddle `gx` exactly when this is negative.
fn straddle_value<T: Scalar>(s: &Setup<T>, n: &Rational) -> Result<AlgebraicReal, SurgeryError> {
    let [a, b, c, d] = s.g.entries().map(Scalar::to_real);
    let n = AlgebraicReal::from_rational(n.clone());
    let y = &s.gx;
    let base = c
        .try_mul(&y.square())?
        .try_add(&d.try_sub(&a)?.try_mul(y)?)?
        .try_sub(&b)?;
    let slope = c.try_mul(y)?.try_sub(&a)?;
    Ok(base.try_add(&n.try_mul(&slope)?)?)
}

fn localize<T: Scalar>(
    s: &Setup<T>,
    x: &AlgebraicReal,
    n: Rational,
    big_n: Option<BigInt>,
) -> Result<CutPasteTrace<T>, SurgeryError> {
    let g = &s.g;
    let shift = Mat2::translation(T::from_rational(n.clone()));
    let q0 = g.try_mul(&shift)?;
    let tau = q0.trace();
    let tau_r = tau.to_real();
    let disc = tau_r.try_mul(&tau_r)?.try_sub(&AlgebraicReal::from_int(4))?;
    if disc.signum() != Ordering::Greater {
        return Err(SurgeryError::OrderingFailed(n.to_string()));
    }
    let root = match &big_n {
        // tau^2 - 4 = (N - 1/N)^2
        Some(big) => {
            let nn = Rational::from_integer(big.clone());
            AlgebraicReal::from_rational((&nn - nn.recip()).abs())
        }
        None => match disc.as_rational() {
            Some(q) => AlgebraicReal::sqrt(q)?,
            None => return Err(SurgeryError::Num(crate::exactnum::NumError::NotQuadratic(disc.to_string()))),
        },
    };
    let two = AlgebraicReal::from_int(2);
    let lambda_plus = tau_r.try_add(&root)?.try_div(&two)?;
    let lambda_minus = tau_r.try_sub(&root)?.try_div(&two)?;
    let (c, d_shift) = (q0.c().to_real(), q0.d().to_real());
    let xi_plus = lambda_plus.try_sub(&d_shift)?.try_div(&c)?;
    let xi_minus = lambda_minus.try_sub(&d_shift)?.try_div(&c)?;

    let ordered = if s.sign > 0 {
        xi_minus < s.gx && s.gx < xi_plus && xi_plus < s.g_inf
    } else {
        s.g_inf < xi_minus && xi_minus < s.gx && s.gx < xi_plus
    };
    if !ordered {
        return Err(SurgeryError::OrderingFailed(n.to_string()));
    }

    let g_inv = g.inverse();
    let lo = g_inv.apply(&xi_minus)?.ok_or(SurgeryError::MapsXToInfinity)?;
    let hi = g_inv.apply(&xi_plus)?.ok_or(SurgeryError::MapsXToInfinity)?;
    let outside = shift.inverse();
    let h = PwpMap::from_pieces(vec![lo, hi], vec![outside.clone(), g.clone(), outside])?;
    Ok(CutPasteTrace {
        g: g.clone(),
        x: x.clone(),
        localization: Some(Localization {
            n,
            big_n,
            q0: q0.canonical(),
            tau,
            lambda_minus,
            lambda_plus,
            xi_minus,
            xi_plus,
        }),
        h,
    })
}

/// An element fixing infinity that agrees with `g` near `x`.
///
/// For non-affine `g` this takes the least `|n| >= 1` (sign fixed by the side
/// of `g inf` on which `g x` lies) such that the fixed points of `g T^n`
/// straddle `g x`; `h` is `g` between their preimages and `T^-n` outside.
pub fn cut_and_paste<T: Scalar>(
    g: &Mat2<T>,
    x: &AlgebraicReal,
) -> Result<CutPasteTrace<T>, SurgeryError> {
    let Some(s) = setup(g, x)? else {
        return Ok(CutPasteTrace {
            g: g.canonical(),
            x: x.clone(),
            localization: None,
            h: PwpMap::global(g.clone())?,
        });
    };
    // The straddle value is affine in n with slope of sign opposite to `sign`,
    // so the least admissible |n| comes out of one division.
    let zero = straddle_value(&s, &Rational::zero())?;
    let slope = straddle_value(&s, &Rational::one())?.try_sub(&zero)?;
    let mut q = zero.try_div(&slope)?;
    if s.sign > 0 {
        q = -q;
    }
    let k: BigInt = (q.floor() + BigInt::from(1)).max(BigInt::from(1));
    let n = Rational::from_integer(k * BigInt::from(s.sign));
    localize(&s, x, n, None)
}

/// Variant with rational breakpoints: `n = (N + 1/N - a - d) / c` so that the
/// eigenvalues of `q0` are `N` and `1/N`. `N` runs over `sign * 2, sign * 3, ...`.
pub fn rational_cut_and_paste(
    g: &Mat2<Rational>,
    x: &Rational,
) -> Result<CutPasteTrace<Rational>, SurgeryError> {
    let xr = AlgebraicReal::from_rational(x.clone());
    let s = setup(g, &xr)?.ok_or(SurgeryError::AffineInput)?;
    let (a, c, d) = (s.g.a().clone(), s.g.c().clone(), s.g.d().clone());
    let n_of = |k: &BigInt| -> Rational {
        let big = Rational::from_integer(k * BigInt::from(s.sign));
        (&big + big.recip() - &a - &d) / &c
    };
    let ok = |k: &BigInt| -> Result<bool, SurgeryError> {
        let n = n_of(k);
        let signed = if s.sign > 0 { n.is_positive() } else { n.is_negative() };
        Ok(signed && straddle_value(&s, &n)?.signum() == Ordering::Less)
    };
    // |n(N)| grows with |N| and the condition is monotone in n: gallop, then bisect.
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while !ok(&hi)? {
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let big_n = hi * BigInt::from(s.sign);
    localize(&s, &xr, n_of(&big_n.abs()), Some(big_n))
}
