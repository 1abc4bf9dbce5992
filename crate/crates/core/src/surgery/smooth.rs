use serde::Serialize;
use num_traits::{One, Signed, Zero};

use super::SurgeryError;
use crate::exactnum::{text, AlgebraicReal, Rational};
use crate::moebius::{Mat2, MoebiusClass, ProjPoint};
use crate::pwp::{PwpMap, Smoothness};

/// C1 interpolation between the identity and `x -> a^2 x` near 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothingPatch {
    #[serde(with = "text::rational")]
    pub a: Rational,
    #[serde(with = "text::rational")]
    pub eps: Rational,
    #[serde(with = "text::rational")]
    pub eps1: Rational,
    pub u: Mat2<Rational>,
    pub p1: PwpMap<Rational>,
}

/// Identity on `(-inf, -eps1 a]`, the unipotent `u` on `[-eps1 a, eps1]`,
/// `diag(a, 1/a)` afterwards, with `eps1 = min(eps, eps/a)`.
pub fn c1_interpolate(a: &Rational, eps: &Rational) -> Result<SmoothingPatch, SurgeryError> {
    if !a.is_positive() {
        return Err(SurgeryError::NonPositive("scale"));
    }
    if !eps.is_positive() {
        return Err(SurgeryError::NonPositive("eps"));
    }
    if a.is_one() {
        return Err(SurgeryError::ScaleIsOne);
    }
    let one = Rational::one();
    let eps1 = eps.clone().min(eps / a);
    let k = (a + &one).recip();
    let u = Mat2::new(
        &k * a * Rational::from_integer(2.into()),
        &k * &eps1 * a * (a - &one),
        &k * (&one - a) / (&eps1 * a),
        &k * Rational::from_integer(2.into()),
    )?;
    let p0 = Mat2::diagonal(a.clone())?;
    let left = AlgebraicReal::from_rational(-(&eps1 * a));
    let right = AlgebraicReal::from_rational(eps1.clone());
    let p1 = PwpMap::from_pieces(vec![left, right], vec![Mat2::identity(), u.clone(), p0])?;
    Ok(SmoothingPatch {
        a: a.clone(),
        eps: eps.clone(),
        eps1,
        u,
        p1,
    })
}

/// A smoothed element and the closed windows `[alpha, beta]` where it may
/// differ from its input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothedElement {
    pub element: PwpMap<Rational>,
    pub windows: Vec<(AlgebraicReal, AlgebraicReal)>,
}

fn rational_point(p: &ProjPoint, at: &AlgebraicReal) -> Result<Option<Rational>, SurgeryError> {
    match p {
        ProjPoint::Infinity => Ok(None),
        ProjPoint::Finite(v) => v
            .as_rational()
            .cloned()
            .map(Some)
            .ok_or_else(|| SurgeryError::IrrationalTransitionData(at.to_string())),
    }
}

/// `m` in `SL_2(Q)` with `m 0 = xi` and `m inf = eta`.
fn conjugator(xi: &Rational, eta: Option<&Rational>) -> Mat2<Rational> {
    match eta {
        None => Mat2::translation(xi.clone()),
        Some(eta) => {
            let k2 = (eta - xi).recip();
            Mat2::new(eta.clone(), xi * &k2, Rational::one(), k2).expect("det one")
        }
    }
}

/// Replaces every C0 breakpoint by a conjugated [`c1_interpolate`] patch
/// inside a small window, leaving the element unchanged elsewhere.
pub fn smooth_element(h: &PwpMap<Rational>) -> Result<SmoothedElement, SurgeryError> {
    let classes = h.smoothness()?;
    let bps = h.breakpoints();
    let mut rational_bps = Vec::with_capacity(bps.len());
    for b in bps {
        rational_bps.push(
            b.as_rational()
                .cloned()
                .ok_or_else(|| SurgeryError::IrrationalTransitionData(b.to_string()))?,
        );
    }
    let two = Rational::from_integer(2.into());
    let half_gap = rational_bps
        .windows(2)
        .map(|w| (&w[1] - &w[0]) / &two)
        .min();

    let mut new_bps: Vec<AlgebraicReal> = Vec::new();
    let mut new_pieces: Vec<Mat2<Rational>> = vec![h.pieces()[0].clone()];
    let mut windows = Vec::new();
    for (i, (xi, (_, class))) in rational_bps.iter().zip(&classes).enumerate() {
        let (left, right) = (&h.pieces()[i], &h.pieces()[i + 1]);
        if *class != Smoothness::C0 {
            new_bps.push(bps[i].clone());
            new_pieces.push(right.clone());
            continue;
        }
        let xi_r = &bps[i];
        let t = h.transition(i);
        match t.classify() {
            MoebiusClass::Hyperbolic => {}
            MoebiusClass::Parabolic => {
                return Err(SurgeryError::ParabolicTransition(xi.to_string()))
            }
            _ => return Err(SurgeryError::IrrationalTransitionData(xi.to_string())),
        }
        let fixed = t.fixed_points()?;
        let other = fixed
            .iter()
            .find(|p| p.finite() != Some(xi_r))
            .expect("hyperbolic matrices have two fixed points");
        let eta = rational_point(other, xi_r)?;
        let m = conjugator(xi, eta.as_ref());
        let mu = t.c() * xi + t.d();
        let a = mu.abs().recip();

        // Window radius: half the breakpoint gap, capped by the pole distance of
        // the left piece, which the patch reuses on both sides of xi.
        let mut delta = half_gap.clone().unwrap_or_else(Rational::one);
        for piece in [left, right] {
            if let Some(pole) = piece.pole() {
                let p = pole.as_rational().expect("rational matrix").clone();
                delta = delta.min((p - xi).abs() / &two);
            }
        }

        let mut eps = delta.clone();
        let patch = loop {
            let patch = c1_interpolate(&a, &eps)?;
            let lo = -(&patch.eps1 * &a);
            let hi = patch.eps1.clone().max(&patch.eps1 * &a * &a);
            if fits(&m, &lo, &hi, xi, &delta) {
                break patch;
            }
            eps /= &two;
        };
        let m_inv = m.inverse();
        let lo = -(&patch.eps1 * &a);
        let alpha = m.apply(&lo.clone().into())?.expect("window avoids the pole");
        let beta = m.apply(&patch.eps1.clone().into())?.expect("window avoids the pole");
        let middle = &(&(left * &m) * &patch.u) * &m_inv;
        new_bps.push(alpha.clone());
        new_pieces.push(middle);
        new_bps.push(beta.clone());
        new_pieces.push(right.clone());
        windows.push((alpha, beta));
    }
    let element = PwpMap::from_pieces(new_bps, new_pieces)?;
    Ok(SmoothedElement { element, windows })
}

/// `m` has no pole on `[lo, hi]` and maps it into `(xi - delta, xi + delta)`.
fn fits(m: &Mat2<Rational>, lo: &Rational, hi: &Rational, xi: &Rational, delta: &Rational) -> bool {
    if !m.c().is_zero() {
        let pole = -(m.d() / m.c());
        if *lo <= pole && pole <= *hi {
            return false;
        }
    }
    let image = |x: &Rational| (m.a() * x + m.b()) / (m.c() * x + m.d());
    let inside = |y: Rational| (y - xi).abs() < *delta;
    inside(image(lo)) && inside(image(hi))
}
