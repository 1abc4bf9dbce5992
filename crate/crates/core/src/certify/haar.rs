use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{cartan_decompose, CertifyError};
use crate::exactnum::{is_prime, prime_power, text, NumError, Rational};
use crate::moebius::Mat2;

/// Upper bound on `p^k + p^(k-1)` for enumerated measures.
pub const MAX_BALLS: u128 = 1 << 20;

/// A point of `P^1(Z/p^k)`: `[x:1]` or `[1:z]` with `p | z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ball {
    Finite(u64),
    Infinite(u64),
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ball::Finite(x) => write!(f, "[{x}:1]"),
            Ball::Infinite(z) => write!(f, "[1:{z}]"),
        }
    }
}

impl FromStr for Ball {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, NumError> {
        let bad = || NumError::Parse(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (l, r) = inner.split_once(':').ok_or_else(bad)?;
        match (l.trim(), r.trim()) {
            (x, "1") => Ok(Ball::Finite(x.parse().map_err(|_| bad())?)),
            ("1", z) => Ok(Ball::Infinite(z.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// A probability measure on `P^1(Q_p)` seen through its masses on the
/// balls of depth `k`, listed in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallMeasure {
    pub p: u64,
    pub depth: u32,
    pub masses: Vec<(Ball, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct MassDoc {
    ball: String,
    #[serde(with = "text::rational")]
    mass: Rational,
}

#[derive(Serialize, Deserialize)]
struct MeasureDoc {
    p: u64,
    depth: u32,
    masses: Vec<MassDoc>,
}

impl Serialize for BallMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MeasureDoc {
            p: self.p,
            depth: self.depth,
            masses: self
                .masses
                .iter()
                .map(|(b, m)| MassDoc { ball: b.to_string(), mass: m.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = MeasureDoc::deserialize(d)?;
        let masses = doc
            .masses
            .into_iter()
            .map(|m| Ok((m.ball.parse().map_err(D::Error::custom)?, m.mass)))
            .collect::<Result<_, D::Error>>()?;
        Ok(BallMeasure { p: doc.p, depth: doc.depth, masses })
    }
}

impl BallMeasure {
    pub fn total(&self) -> Rational {
        self.masses.iter().map(|(_, m)| m).sum()
    }

    pub fn mass(&self, ball: &Ball) -> Option<&Rational> {
        self.masses.iter().find(|(b, _)| b == ball).map(|(_, m)| m)
    }

    pub fn is_uniform(&self) -> bool {
        self.masses.windows(2).all(|w| w[0].1 == w[1].1)
    }
}

/// Modular arithmetic on `Z/p^k`.
pub(crate) struct Residues {
    p: u64,
    q: u64,
}

impl Residues {
    pub(crate) fn new(p: u64, k: u32) -> Result<Self, CertifyError> {
        if !is_prime(p) {
            return Err(NumError::NotPrime(p).into());
        }
        if k == 0 {
            return Err(CertifyError::DepthTooShallow);
        }
        let q = (p as u128).checked_pow(k).filter(|q| *q <= MAX_BALLS);
        let q = q.ok_or(CertifyError::DepthTooLarge(ball_count_hint(p, k)))?;
        Ok(Residues { p, q: q as u64 })
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.q
    }

    pub(crate) fn balls(&self) -> impl Iterator<Item = Ball> + '_ {
        (0..self.q)
            .map(Ball::Finite)
            .chain((0..self.q / self.p).map(move |y| Ball::Infinite(y * self.p)))
    }

    pub(crate) fn index(&self, b: &Ball) -> usize {
        match b {
            Ball::Finite(x) => *x as usize,
            Ball::Infinite(z) => (self.q + z / self.p) as usize,
        }
    }

    fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.q as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let g = BigInt::from(a).extended_gcd(&BigInt::from(self.q));
        g.x.mod_floor(&BigInt::from(self.q)).to_u64().expect("below modulus")
    }

    /// Residue of a p-integral rational.
    pub(crate) fn reduce(&self, r: &Rational) -> u64 {
        let q = BigInt::from(self.q);
        let n = r.numer().mod_floor(&q).to_u64().expect("below modulus");
        let d = r.denom().mod_floor(&q).to_u64().expect("below modulus");
        self.mul(n, self.inv(d))
    }

    /// Label of a point of `P^1(Q)`; `None` is infinity.
    #[cfg(test)]
    pub(crate) fn label_of(&self, x: Option<&Rational>) -> Ball {
        match x {
            None => Ball::Infinite(0),
            Some(x) if x.is_zero() || x.denom().mod_floor(&BigInt::from(self.p)) != BigInt::zero() => {
                Ball::Finite(self.reduce(x))
            }
            Some(x) => Ball::Infinite(self.reduce(&x.recip())),
        }
    }

    /// Action of a matrix with p-integral entries.
    pub(crate) fn act(&self, g: &Mat2<Rational>, b: &Ball) -> Ball {
        let [a, bb, c, d] = g.entries().map(|e| self.reduce(e));
        let (x, y) = match *b {
            Ball::Finite(x) => (x, 1),
            Ball::Infinite(z) => (1, z),
        };
        let top = self.add(self.mul(a, x), self.mul(bb, y));
        let bot = self.add(self.mul(c, x), self.mul(d, y));
        if self.is_unit(bot) {
            Ball::Finite(self.mul(top, self.inv(bot)))
        } else {
            Ball::Infinite(self.mul(bot, self.inv(top)))
        }
    }
}

fn ball_count_hint(p: u64, k: u32) -> u128 {
    (p as u128).saturating_pow(k).saturating_add((p as u128).saturating_pow(k - 1))
}

fn int_valuation_u64(mut x: u64, p: u64) -> Option<i64> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// The `SL_2(Z_p)`-invariant probability measure at depth `k`: every ball has
/// mass `1 / (p^k + p^(k-1))`.
pub fn uniform_measure(p: u64, k: u32) -> Result<BallMeasure, CertifyError> {
    let r = Residues::new(p, k)?;
    let count = r.modulus() + r.modulus() / p;
    let mass = Rational::new(1.into(), count.into());
    Ok(BallMeasure {
        p,
        depth: k,
        masses: r.balls().map(|b| (b, mass.clone())).collect(),
    })
}

/// Image of the invariant measure under `g`, on balls of depth `k >= 1`.
///
/// With `g = k1 diag(p^m, p^-m) k2`, the diagonal factor is resolved by exact
/// shell masses and `k1` permutes the balls.
pub fn pushforward_haar(g: &Mat2<Rational>, p: u64, k: u32) -> Result<BallMeasure, CertifyError> {
    let r = Residues::new(p, k)?;
    let cd = cartan_decompose(g, p)?;
    let m2 = 2 * cd.m as i64;
    let pp = Rational::from_integer(p.into());
    let w = &pp / (&pp + Rational::from_integer(1.into()));
    let j = k as i64 - m2;
    let shell = |b: &Ball| -> Rational {
        match *b {
            Ball::Infinite(_) => &w * prime_power(p, -(k as i64 + m2)),
            Ball::Finite(x) => {
                let vc = int_valuation_u64(x, p).map(|v| v - m2);
                match vc {
                    // The preimage ball contains 0.
                    None => ball_around_zero(p, j, &w),
                    Some(v) if v >= j => ball_around_zero(p, j, &w),
                    Some(v) if v >= 0 => &w * prime_power(p, -j),
                    Some(v) => &w * prime_power(p, -(j - 2 * v)),
                }
            }
        }
    };
    let balls: Vec<Ball> = r.balls().collect();
    let mut masses: Vec<(Ball, Rational)> =
        balls.iter().map(|b| (*b, Rational::zero())).collect();
    for b in &balls {
        let target = r.act(&cd.k1, b);
        masses[r.index(&target)].1 = shell(b);
    }
    Ok(BallMeasure { p, depth: k, masses })
}

fn ball_around_zero(p: u64, j: i64, w: &Rational) -> Rational {
    if j >= 0 {
        w * prime_power(p, -j)
    } else {
        Rational::from_integer(1.into()) - prime_power(p, j) / Rational::from_integer((p + 1).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn diagonal_example() {
        let g = Mat2::diagonal(int(2)).unwrap();
        let mu = pushforward_haar(&g, 2, 1).unwrap();
        let got: Vec<(String, String)> = mu
            .masses
            .iter()
            .map(|(b, m)| (b.to_string(), m.to_string()))
            .collect();
        let want = [("[0:1]", "5/6"), ("[1:1]", "1/12"), ("[1:0]", "1/12")];
        assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));
        assert_eq!(mu.total(), int(1));
        assert!(!mu.is_uniform());
    }

    #[test]
    fn integral_matrices_fix_uniform() {
        let g = Mat2::new(int(5), int(7), int(2), int(3)).unwrap();
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1)] {
            assert_eq!(pushforward_haar(&g, p, k).unwrap(), uniform_measure(p, k).unwrap());
        }
    }

    #[test]
    fn depth_errors() {
        let g = Mat2::diagonal(int(2)).unwrap();
        assert_eq!(pushforward_haar(&g, 2, 0), Err(CertifyError::DepthTooShallow));
        assert!(matches!(pushforward_haar(&g, 2, 40), Err(CertifyError::DepthTooLarge(_))));
    }

    #[test]
    fn labels_round_trip() {
        for b in [Ball::Finite(0), Ball::Finite(1), Ball::Finite(7), Ball::Infinite(0), Ball::Infinite(6)] {
            assert_eq!(b.to_string().parse::<Ball>().unwrap(), b);
        }
        let r = Residues::new(3, 2).unwrap();
        assert_eq!(r.label_of(Some(&rat(1, 3))), Ball::Infinite(3));
        assert_eq!(r.label_of(Some(&rat(1, 2))), Ball::Finite(5));
        assert_eq!(r.label_of(None), Ball::Infinite(0));
    }
}
