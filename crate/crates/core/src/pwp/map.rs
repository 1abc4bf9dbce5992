use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::PwpError;
use crate::exactnum::{AlgebraicReal, RingSpec, Scalar};
use crate::moebius::{Mat2, ProjPoint};

/// A piecewise-projective homeomorphism of the real line.
///
/// `pieces[i]` acts on `[breakpoints[i-1], breakpoints[i]]`, with the first
/// and last pieces unbounded. Values are normalized: every matrix carries the
/// `PSL_2` sign convention and adjacent pieces differ in `PSL_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PwpMap<T> {
    breakpoints: Vec<AlgebraicReal>,
    pieces: Vec<Mat2<T>>,
}

/// Which one-sided germ to read at a breakpoint.
///
/// At infinity, `Left` is the germ reached from `+inf` (the last piece) and
/// `Right` the one reached from `-inf` (the first piece).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Regularity of an element at one breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Smoothness {
    C0,
    C1,
    /// Adjacent pieces agree in `PSL_2`; never reported for normalized maps.
    Projective,
}

impl<T: Scalar> PwpMap<T> {
    pub fn identity() -> Self {
        PwpMap {
            breakpoints: vec![],
            pieces: vec![Mat2::identity()],
        }
    }

    /// A single matrix acting on the whole line; it must be affine.
    pub fn global(m: Mat2<T>) -> Result<Self, PwpError> {
        Self::from_pieces(vec![], vec![m])
    }

    /// Checks the homeomorphism invariants and normalizes.
    pub fn from_pieces(
        breakpoints: Vec<AlgebraicReal>,
        pieces: Vec<Mat2<T>>,
    ) -> Result<Self, PwpError> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(PwpError::PieceCountMismatch {
                breakpoints: breakpoints.len(),
                pieces: pieces.len(),
            });
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PwpError::NotIncreasing);
        }
        let last = pieces.len() - 1;
        for (i, m) in pieces.iter().enumerate() {
            let lo = i.checked_sub(1).map(|j| &breakpoints[j]);
            let hi = (i < last).then(|| &breakpoints[i]);
            match (lo, hi) {
                (Some(lo), Some(hi)) => {
                    if let Some(pole) = m.pole() {
                        if *lo <= pole && pole <= *hi {
                            return Err(PwpError::PoleInsidePiece(i));
                        }
                    }
                }
                // An unbounded piece must be affine, otherwise the map has a
                // finite limit at that end or a pole on the ray.
                _ => {
                    if !m.c().is_zero() {
                        return Err(PwpError::NotBijective);
                    }
                }
            }
        }
        for (i, b) in breakpoints.iter().enumerate() {
            let left = pieces[i].apply(b)?;
            let right = pieces[i + 1].apply(b)?;
            if left != right {
                return Err(PwpError::DiscontinuousAtBreakpoint(b.to_string()));
            }
        }
        Ok(Self::normalized(breakpoints, pieces))
    }

    /// Sign-normalizes and merges adjacent `PSL_2`-equal pieces.
    pub(crate) fn normalized(breakpoints: Vec<AlgebraicReal>, pieces: Vec<Mat2<T>>) -> Self {
        let mut out_b: Vec<AlgebraicReal> = Vec::with_capacity(breakpoints.len());
        let mut out_p: Vec<Mat2<T>> = Vec::with_capacity(pieces.len());
        let mut pieces = pieces.into_iter().map(|m| m.canonical());
        out_p.push(pieces.next().expect("at least one piece"));
        for (b, m) in breakpoints.into_iter().zip(pieces) {
            if *out_p.last().expect("nonempty") != m {
                out_b.push(b);
                out_p.push(m);
            }
        }
        PwpMap {
            breakpoints: out_b,
            pieces: out_p,
        }
    }

    pub fn breakpoints(&self) -> &[AlgebraicReal] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Mat2<T>] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_psl2_identity()
    }

    /// Index of the piece whose closed interval holds `x` (the left one at a breakpoint).
    fn piece_index(&self, x: &AlgebraicReal) -> usize {
        self.breakpoints.partition_point(|b| b < x)
    }

    fn breakpoint_index(&self, x: &AlgebraicReal) -> Option<usize> {
        self.breakpoints.binary_search(x).ok()
    }

    pub fn eval(&self, x: &AlgebraicReal) -> Result<AlgebraicReal, PwpError> {
        let m = &self.pieces[self.piece_index(x)];
        m.apply(x)?
            .ok_or_else(|| PwpError::PoleInsidePiece(self.piece_index(x)))
    }

    pub fn eval_point(&self, x: &ProjPoint) -> Result<ProjPoint, PwpError> {
        match x {
            ProjPoint::Infinity => Ok(ProjPoint::Infinity),
            ProjPoint::Finite(v) => Ok(ProjPoint::Finite(self.eval(v)?)),
        }
    }

    /// `self ∘ g`: pieces multiply by the chain rule on the common refinement
    /// of `breakpoints(g)` and `g^-1(breakpoints(self))`.
    pub fn compose(&self, g: &Self) -> Result<Self, PwpError> {
        let from_g: Vec<AlgebraicReal> = g.breakpoints.clone();
        let g_images: Vec<AlgebraicReal> = from_g
            .iter()
            .enumerate()
            .map(|(i, b)| g.pieces[i].apply(b)?.ok_or(PwpError::PoleInsidePiece(i)))
            .collect::<Result<_, _>>()?;
        let mut pulled = Vec::with_capacity(self.breakpoints.len());
        for y in &self.breakpoints {
            let k = g_images.partition_point(|v| v < y);
            let x = g.pieces[k]
                .inverse()
                .apply(y)?
                .ok_or(PwpError::PoleInsidePiece(k))?;
            pulled.push(x);
        }

        let mut cuts = Vec::with_capacity(from_g.len() + pulled.len());
        let mut pieces = Vec::with_capacity(from_g.len() + pulled.len() + 1);
        let (mut gi, mut hj) = (0usize, 0usize);
        pieces.push(self.pieces[0].try_mul(&g.pieces[0])?);
        while gi < from_g.len() || hj < pulled.len() {
            let ord = match (from_g.get(gi), pulled.get(hj)) {
                (Some(a), Some(b)) => a.cmp(b),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    cuts.push(from_g[gi].clone());
                    gi += 1;
                }
                Ordering::Greater => {
                    cuts.push(pulled[hj].clone());
                    hj += 1;
                }
                Ordering::Equal => {
                    cuts.push(from_g[gi].clone());
                    gi += 1;
                    hj += 1;
                }
            }
            pieces.push(self.pieces[hj].try_mul(&g.pieces[gi])?);
        }
        Ok(Self::normalized(cuts, pieces))
    }

    pub fn invert(&self) -> Result<Self, PwpError> {
        let breakpoints = self
            .breakpoints
            .iter()
            .map(|b| self.eval(b))
            .collect::<Result<Vec<_>, _>>()?;
        let pieces = self.pieces.iter().map(Mat2::inverse).collect();
        Ok(Self::normalized(breakpoints, pieces))
    }

    /// The germ of `self` at `x` as a `PSL_2` representative.
    pub fn projective_part(&self, x: &ProjPoint, side: Option<Side>) -> Result<Mat2<T>, PwpError> {
        let piece = match x {
            ProjPoint::Finite(v) => match (self.breakpoint_index(v), side) {
                (None, _) => &self.pieces[self.piece_index(v)],
                (Some(i), Some(Side::Left)) => &self.pieces[i],
                (Some(i), Some(Side::Right)) => &self.pieces[i + 1],
                (Some(_), None) => return Err(PwpError::AtBreakpointWithoutSide),
            },
            ProjPoint::Infinity => {
                let (first, last) = (&self.pieces[0], &self.pieces[self.pieces.len() - 1]);
                match side {
                    _ if first == last => first,
                    Some(Side::Left) => last,
                    Some(Side::Right) => first,
                    None => return Err(PwpError::AtBreakpointWithoutSide),
                }
            }
        };
        Ok(piece.canonical())
    }

    /// True when the germs at `-inf` and `+inf` agree, so the element is
    /// projective on a neighbourhood of infinity in the projective line.
    pub fn projective_near_infinity(&self) -> bool {
        self.pieces[0] == self.pieces[self.pieces.len() - 1]
    }

    /// Per breakpoint: `C1` when the one-sided derivatives agree.
    pub fn smoothness(&self) -> Result<Vec<(AlgebraicReal, Smoothness)>, PwpError> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let (l, r) = (&self.pieces[i], &self.pieces[i + 1]);
                if l.psl2_eq(r) {
                    return Ok((b.clone(), Smoothness::Projective));
                }
                let dl = l.c().to_real().try_mul(b)?.try_add(&l.d().to_real())?.square();
                let dr = r.c().to_real().try_mul(b)?.try_add(&r.d().to_real())?.square();
                let class = if dl == dr { Smoothness::C1 } else { Smoothness::C0 };
                Ok((b.clone(), class))
            })
            .collect()
    }

    pub fn is_c1(&self) -> Result<bool, PwpError> {
        Ok(self
            .smoothness()?
            .iter()
            .all(|(_, s)| *s != Smoothness::C0))
    }

    /// Every piece has a `PSL_2` representative with entries in the ring.
    pub fn ring_membership(&self, ring: &RingSpec) -> bool {
        self.pieces.iter().all(|m| m.in_ring(ring))
    }

    /// Transition `left^-1 * right` at breakpoint `i`.
    pub fn transition(&self, i: usize) -> Mat2<T> {
        &self.pieces[i].inverse() * &self.pieces[i + 1]
    }

    /// Closed interval of piece `i`; `None` marks an infinite end.
    pub fn piece_interval(&self, i: usize) -> (Option<&AlgebraicReal>, Option<&AlgebraicReal>) {
        (
            i.checked_sub(1).map(|j| &self.breakpoints[j]),
            self.breakpoints.get(i),
        )
    }
}

pub fn compose<T: Scalar>(h: &PwpMap<T>, g: &PwpMap<T>) -> Result<PwpMap<T>, PwpError> {
    h.compose(g)
}

pub fn invert<T: Scalar>(h: &PwpMap<T>) -> Result<PwpMap<T>, PwpError> {
    h.invert()
}

pub fn projective_part<T: Scalar>(
    h: &PwpMap<T>,
    x: &ProjPoint,
    side: Option<Side>,
) -> Result<Mat2<T>, PwpError> {
    h.projective_part(x, side)
}

pub fn smoothness<T: Scalar>(h: &PwpMap<T>) -> Result<Vec<(AlgebraicReal, Smoothness)>, PwpError> {
    h.smoothness()
}

pub fn ring_membership<T: Scalar>(h: &PwpMap<T>, ring: &RingSpec) -> bool {
    h.ring_membership(ring)
}
