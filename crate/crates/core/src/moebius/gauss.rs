use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{Mat2, MoebiusError};
use crate::exactnum::{parse_rational, NumError, Rational};

/// `re + im i` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Closed strip `|Re z| <= 1/2`, `|z| >= 1`.
    pub fn in_gauss_domain(&self) -> bool {
        let half = Rational::new(1.into(), 2.into());
        self.re.abs() <= half && self.norm_sq() >= Rational::one()
    }

    /// Möbius action `(a z + b) / (c z + d)`.
    pub fn act(&self, g: &Mat2<Rational>) -> Self {
        let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
        let num_re = a * &self.re + b;
        let num_im = a * &self.im;
        let den_re = c * &self.re + d;
        let den_im = c * &self.im;
        let n = &den_re * &den_re + &den_im * &den_im;
        GaussianRational {
            re: (&num_re * &den_re + &num_im * &den_im) / &n,
            im: (&num_im * &den_re - &num_re * &den_im) / &n,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = NumError;

    /// Accepts `a/b+c/di`, `a/b-c/di`, `c/di` and `i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(s.to_string());
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        let split = body
            .char_indices()
            .filter(|&(i, ch)| i > 0 && (ch == '+' || ch == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re, im) = match split {
            Some(i) => (parse_rational(&body[..i])?, &body[i..]),
            None => (Rational::zero(), body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(GaussianRational { re, im })
    }
}

/// Moves `z` into the closed Gauss domain by integer translations and the
/// inversion `z -> -1/z`. Returns the accumulated `SL_2(Z)` matrix `m` (PSL2
/// sign convention) with `m z` the reduced point. Points already in the closed
/// domain are left unmoved; a needed translation lands on `Re = +1/2` rather
/// than `-1/2`.
pub fn reduce_to_gauss_domain(
    z: &GaussianRational,
) -> Result<(Mat2<Rational>, GaussianRational), MoebiusError> {
    if !z.im.is_positive() {
        return Err(MoebiusError::NotInUpperHalfPlane);
    }
    let half = Rational::new(1.into(), 2.into());
    let inversion = Mat2::new_unchecked(
        Rational::zero(),
        -Rational::one(),
        Rational::one(),
        Rational::zero(),
    );
    let mut m = Mat2::identity();
    let mut w = z.clone();
    while !w.in_gauss_domain() {
        let step = if w.re.abs() > half {
            // n = ceil(re - 1/2) puts re - n in (-1/2, 1/2].
            let n = (&w.re - &half).ceil();
            Mat2::translation(-n)
        } else {
            inversion.clone()
        };
        w = w.act(&step);
        m = &step * &m;
    }
    Ok((m.canonical(), w))
}
