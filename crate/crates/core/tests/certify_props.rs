mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::*;
use pwp_core::certify::{
    cartan_decompose, in_psl2_zp, pushforward_haar, schottky_certificate,
    schottky_certificate_with, uniform_measure, Arc, Ball,
};
use pwp_core::exactnum::{int, padic_valuation, rat, rational_between, Valuation};
use pwp_core::{Mat2, ProjPoint, Rational};

/// Random element of `SL_2(Z[1/p])` with Cartan exponent at most 2.
fn rand_sl2_p(r: &mut impl Rng, p: i64) -> Mat2<Rational> {
    loop {
        let mut g: Mat2<Rational> = Mat2::identity();
        for _ in 0..r.gen_range(1..=4) {
            let t = rat(r.gen_range(-4..=4), p.pow(r.gen_range(0..=1)));
            let step = match r.gen_range(0..3) {
                0 => Mat2::translation(t),
                1 => m(int(1), int(0), t, int(1)),
                _ => Mat2::diagonal(if r.gen_bool(0.5) { int(p) } else { rat(1, p) }).unwrap(),
            };
            g = &g * &step;
        }
        if cartan_exponent(&g, p as u64) <= 2 {
            return g;
        }
    }
}

/// `-min v_p(entry)`, floored at zero.
fn cartan_exponent(g: &Mat2<Rational>, p: u64) -> u32 {
    g.entries()
        .iter()
        .filter_map(|e| padic_valuation(e, p).unwrap().finite())
        .min()
        .map_or(0, |v| (-v).max(0) as u32)
}

fn v(x: &Rational, p: u64) -> Valuation {
    padic_valuation(x, p).unwrap()
}

fn residue(x: &Rational, modulus: &BigInt) -> u64 {
    let inv = x.denom().extended_gcd(modulus).x;
    let r = (x.numer() * inv).mod_floor(modulus);
    u64::try_from(r).unwrap()
}

/// Depth-k ball holding the point `[u:v]`.
fn ball_of(u: &Rational, w: &Rational, p: u64, k: u32) -> Ball {
    let modulus = BigInt::from(p).pow(k);
    if v(w, p) <= v(u, p) {
        Ball::Finite(residue(&(u / w), &modulus))
    } else {
        Ball::Infinite(residue(&(w / u), &modulus))
    }
}

/// Haar mass of `g^-1(B)` for each depth-k ball `B`, from the images of the
/// depth-K balls with `K = k + 2m`, each of which lands inside one depth-k ball.
fn pushforward_oracle(g: &Mat2<Rational>, p: u64, k: u32) -> BTreeMap<Ball, Rational> {
    let big_k = k + 2 * cartan_exponent(g, p);
    let pk = p.pow(big_k);
    let each = Rational::new(1.into(), (pk + pk / p).into());
    let mut reps: Vec<(Rational, Rational)> = (0..pk).map(|x| (int(x as i64), int(1))).collect();
    reps.extend((0..pk).step_by(p as usize).map(|z| (int(1), int(z as i64))));
    let mut out = BTreeMap::new();
    for (u, w) in reps {
        let image_u = g.a() * &u + g.b() * &w;
        let image_w = g.c() * &u + g.d() * &w;
        *out.entry(ball_of(&image_u, &image_w, p, k)).or_insert_with(Rational::zero) += &each;
    }
    out
}

fn hyperbolic_pair(r: &mut impl Rng) -> (Mat2<Rational>, Mat2<Rational>) {
    let k1 = rand_sl2z(r);
    let k2 = rand_sl2z(r);
    let d = Mat2::diagonal(int(2)).unwrap();
    let c = m(int(2), int(1), int(1), int(1));
    (&(&k1 * &d) * &k1.inverse(), &(&k2 * &c) * &k2.inverse())
}

/// A point strictly inside the forward arc from `a` to `b`.
fn strictly_between(a: &ProjPoint, b: &ProjPoint) -> ProjPoint {
    match (a, b) {
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) if x < y => ProjPoint::rational(rational_between(x, y)),
        (ProjPoint::Finite(x), _) => ProjPoint::rational(Rational::from_integer(x.floor()) + int(1)),
        (ProjPoint::Infinity, ProjPoint::Finite(y)) => ProjPoint::rational(Rational::from_integer(y.floor()) - int(1)),
        (ProjPoint::Infinity, ProjPoint::Infinity) => unreachable!(),
    }
}

fn shrink(arc: &Arc, centre: &ProjPoint) -> Arc {
    Arc::new(strictly_between(&arc.from, centre), strictly_between(centre, &arc.to))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pushforward_matches_ball_enumeration(s in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), k in 1u32..=2) {
        let mut r = rng(s);
        let g = rand_sl2_p(&mut r, p as i64);
        let mu = pushforward_haar(&g, p, k).unwrap();
        let oracle = pushforward_oracle(&g, p, k);
        prop_assert_eq!(mu.masses.len() as u64, p.pow(k) + p.pow(k - 1));
        for (ball, mass) in &mu.masses {
            prop_assert_eq!(oracle.get(ball).cloned().unwrap_or_else(Rational::zero), mass.clone(), "ball {}", ball);
        }
        prop_assert!(oracle.keys().all(|b| mu.mass(b).is_some()));
        prop_assert_eq!(mu.total(), Rational::one());
        prop_assert_eq!(mu.is_uniform(), in_psl2_zp(&g, p).unwrap());
    }

    #[test]
    fn pushforward_ignores_integral_right_factors(s in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), k in 1u32..=2) {
        let mut r = rng(s);
        let g = rand_sl2_p(&mut r, p as i64);
        let h = rand_sl2z(&mut r);
        // Haar measure is SL2(Z_p)-invariant, so g h and g push it alike.
        prop_assert_eq!(pushforward_haar(&(&g * &h), p, k).unwrap(), pushforward_haar(&g, p, k).unwrap());
        prop_assert_eq!(pushforward_haar(&h, p, k).unwrap(), uniform_measure(p, k).unwrap());
    }

    #[test]
    fn cartan_remultiplies(s in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut r = rng(s);
        let g = rand_sl2_p(&mut r, p as i64);
        let c = cartan_decompose(&g, p).unwrap();
        prop_assert_eq!(&(&c.k1 * &c.a) * &c.k2, g.clone());
        prop_assert!(in_psl2_zp(&c.k1, p).unwrap() && in_psl2_zp(&c.k2, p).unwrap());
        prop_assert_eq!(c.m, cartan_exponent(&g, p));
        prop_assert_eq!(c.m == 0, in_psl2_zp(&g, p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn ping_pong_words_land_in_their_neighbourhood(s in any::<u64>()) {
        let mut r = rng(s);
        let (g1, g2) = hyperbolic_pair(&mut r);
        let cert = schottky_certificate(&g1, &g2).unwrap();
        cert.verify().unwrap();
        let nb = &cert.neighbourhoods;
        let base = (0..)
            .map(|i| ProjPoint::rational(rat(i * 7 - 300, 13)))
            .find(|p| nb.iter().all(|u| !u.contains(p)))
            .unwrap();
        let letters = [cert.g1_power(), cert.g1_power().inverse(), cert.g2_power(), cert.g2_power().inverse()];
        for _ in 0..50 {
            let len = r.gen_range(1..=8);
            let mut word: Vec<usize> = Vec::new();
            while word.len() < len {
                let l = r.gen_range(0..4);
                if word.last() != Some(&(l ^ 1)) {
                    word.push(l);
                }
            }
            let w = word.iter().fold(Mat2::identity(), |acc, &l| &acc * &letters[l]);
            let image = w.act(&base).unwrap();
            prop_assert!(nb[word[0]].interior_contains(&image), "word {:?} sends {} to {}", word, base, image);
            prop_assert!(!w.is_psl2_identity());
        }
    }

    #[test]
    fn smaller_neighbourhoods_need_larger_powers(s in any::<u64>()) {
        let mut r = rng(s);
        let (g1, g2) = hyperbolic_pair(&mut r);
        let cert = schottky_certificate(&g1, &g2).unwrap();
        let (r1, a1) = g1.hyperbolic_fixed_points().unwrap();
        let (r2, a2) = g2.hyperbolic_fixed_points().unwrap();
        let centres = [a1, r1, a2, r2];
        let nb = &cert.neighbourhoods;
        let shrunk = [
            shrink(&nb[0], &centres[0]),
            shrink(&nb[1], &centres[1]),
            shrink(&nb[2], &centres[2]),
            shrink(&nb[3], &centres[3]),
        ];
        for (small, big) in shrunk.iter().zip(nb) {
            prop_assert!(small.inside_interior_of(big));
        }
        let tight = schottky_certificate_with(&g1, &g2, shrunk).unwrap();
        tight.verify().unwrap();
        prop_assert!(tight.k >= cert.k);
    }
}
