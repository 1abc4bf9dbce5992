#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwp_core::exactnum::{int, rat};
use pwp_core::surgery::{cut_and_paste, thompson_generators};
use pwp_core::{AlgebraicReal, Mat2, ProjPoint, PwpMap, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn m(a: Rational, b: Rational, c: Rational, d: Rational) -> Mat2<Rational> {
    Mat2::new(a, b, c, d).expect("det one")
}

pub fn real(q: &Rational) -> AlgebraicReal {
    AlgebraicReal::from_rational(q.clone())
}

pub fn rand_rational(r: &mut impl Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn rand_positive(r: &mut impl Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(1..=num), r.gen_range(1..=den))
}

fn dyadic(r: &mut impl Rng) -> Rational {
    let e = r.gen_range(0..=3u32);
    rat(r.gen_range(-8..=8), 1 << e)
}

fn bounded(x: &Rational, bits: u32) -> bool {
    let lim = BigInt::one() << bits;
    x.numer().abs() <= lim && *x.denom() <= lim
}

/// Product of elementary and diagonal matrices over `Z[1/2]`, every entry with
/// numerator and denominator at most `2^10`, and `c != 0`.
pub fn rand_sl2_dyadic(r: &mut impl Rng) -> Mat2<Rational> {
    loop {
        let mut g: Mat2<Rational> = Mat2::identity();
        for _ in 0..r.gen_range(2..=5) {
            let step = match r.gen_range(0..3) {
                0 => Mat2::translation(dyadic(r)),
                1 => m(int(1), int(0), dyadic(r), int(1)),
                _ => {
                    let e = r.gen_range(-2..=2i32);
                    Mat2::diagonal(if e >= 0 { int(1 << e) } else { rat(1, 1 << -e) }).unwrap()
                }
            };
            g = &g * &step;
        }
        if !g.c().is_zero() && g.entries().iter().all(|e| bounded(e, 10)) {
            return g;
        }
    }
}

/// Random word in the elementary generators of `SL_2(Z)`.
pub fn rand_sl2z(r: &mut impl Rng) -> Mat2<Rational> {
    let mut g: Mat2<Rational> = Mat2::identity();
    for _ in 0..r.gen_range(1..=6) {
        let t = int(r.gen_range(-3..=3));
        let step = if r.gen_bool(0.5) {
            Mat2::translation(t)
        } else {
            m(int(1), int(0), t, int(1))
        };
        g = &g * &step;
    }
    g
}

/// A rational point not sent to infinity by `g`.
pub fn rand_point_for(r: &mut impl Rng, g: &Mat2<Rational>) -> Rational {
    loop {
        let x = rand_rational(r, 40, 16);
        if g.apply(&real(&x)).unwrap().is_some() {
            return x;
        }
    }
}

/// Element of the piecewise `SL_2(Z[1/2])` group: a short product of Thompson
/// generators and cut-and-paste outputs.
pub fn rand_element(r: &mut impl Rng) -> PwpMap<Rational> {
    let (a, b) = thompson_generators();
    let mut h = PwpMap::identity();
    for _ in 0..r.gen_range(1..=3) {
        let f = match r.gen_range(0..5) {
            0 => a.clone(),
            1 => b.clone(),
            2 => b.invert().unwrap(),
            _ => {
                let g = rand_sl2_dyadic(r);
                let x = rand_point_for(r, &g);
                cut_and_paste(&g, &real(&x)).unwrap().h
            }
        };
        h = h.compose(&f).unwrap();
    }
    h
}

pub fn finite(p: ProjPoint) -> AlgebraicReal {
    p.finite().cloned().expect("finite point")
}

pub fn zero() -> Rational {
    Rational::zero()
}
