//! Runs the ten acceptance criteria and prints one line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use common::*;
use pwp_core::certify::{
    cartan_decompose, gap_witness, in_psl2_zp, pushforward_haar, schottky_certificate,
    uniform_measure, Ball, CertifyError, GapWitness,
};
use pwp_core::exactnum::{int, rat};
use pwp_core::moebius::{reduce_to_gauss_domain, GaussianRational, MoebiusClass};
use pwp_core::pwp::{breakpoint_witness, Smoothness};
use pwp_core::surgery::{
    c1_interpolate, cut_and_paste, rational_cut_and_paste, smooth_element, thompson_generators,
    thompson_relators,
};
use pwp_core::{AlgebraicReal, Mat2, ProjPoint, PwpMap, Rational, RingSpec};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dyadic_ring() -> RingSpec {
    RingSpec::s_integers([2]).unwrap()
}

fn surd(s: &str) -> AlgebraicReal {
    s.parse().unwrap()
}

fn criterion_1() -> Check {
    let mut r = rng(1);
    let ring = dyadic_ring();
    for case in 0..100 {
        let g = rand_sl2_dyadic(&mut r);
        let x = real(&rand_point_for(&mut r, &g));
        let t = cut_and_paste(&g, &x).map_err(|e| format!("case {case}: g = {g}, x = {x}: {e}"))?;
        let loc = t.localization.as_ref().ok_or("non-affine g without localization")?;

        // q0 = g T^n and its fixed points.
        let q0 = &g * &Mat2::translation(loc.n.clone());
        ensure!(q0.psl2_eq(&loc.q0), "case {case}: q0 mismatch");
        for xi in [&loc.xi_minus, &loc.xi_plus] {
            ensure!(q0.apply(xi).map_err(err)?.as_ref() == Some(xi), "case {case}: xi not fixed");
        }

        let gx = g.apply(&x).map_err(err)?.unwrap();
        let g_inf = real(&(g.a() / g.c()));
        let (lo_xi, hi_xi) = (&loc.xi_minus, &loc.xi_plus);
        let ordered = (lo_xi < &gx && &gx < hi_xi && hi_xi < &g_inf)
            || (&g_inf < lo_xi && lo_xi < &gx && &gx < hi_xi);
        ensure!(ordered, "case {case}: ordering fails");

        ensure!(t.h.ring_membership(&ring), "case {case}: h outside Z[1/2]");

        let g_inv = g.inverse();
        let mut ends = [
            g_inv.apply(lo_xi).map_err(err)?.unwrap(),
            g_inv.apply(hi_xi).map_err(err)?.unwrap(),
        ];
        ends.sort();
        let width = ends[1].try_sub(&ends[0]).map_err(err)?;
        for i in 1..=20 {
            let step = AlgebraicReal::from_rational(rat(i, 21));
            let y = ends[0].try_add(&width.try_mul(&step).map_err(err)?).map_err(err)?;
            let hy = t.h.eval(&y).map_err(err)?;
            let gy = g.apply(&y).map_err(err)?.unwrap();
            ensure!(hy == gy, "case {case}: h and g differ at {y}");
        }

        let conj = &(&g_inv * &q0) * &g;
        ensure!(conj.classify() == MoebiusClass::Hyperbolic, "case {case}: g^-1 q0 g not hyperbolic");
        for b in t.h.breakpoints() {
            ensure!(conj.apply(b).map_err(err)?.as_ref() == Some(b), "case {case}: breakpoint {b} moves");
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    let g = m(int(1), int(0), int(1), int(1));
    let t = cut_and_paste(&g, &AlgebraicReal::zero()).map_err(err)?;
    let loc = t.localization.as_ref().unwrap();
    ensure!(loc.n == int(1), "n = {}", loc.n);
    ensure!(loc.tau == int(3), "tau = {}", loc.tau);
    ensure!(loc.xi_minus == surd("(-1/2)+(-1/2)*sqrt(5)"), "xi- = {}", loc.xi_minus);
    ensure!(loc.xi_plus == surd("(-1/2)+(1/2)*sqrt(5)"), "xi+ = {}", loc.xi_plus);
    let outside = Mat2::translation(int(-1));
    let p = t.h.pieces();
    ensure!(p.len() == 3 && p[0] == outside && p[2] == outside, "outside pieces {:?}", p);

    let t = rational_cut_and_paste(&g, &int(0)).map_err(err)?;
    let loc = t.localization.as_ref().unwrap();
    ensure!(loc.big_n == Some(BigInt::from(2)), "N = {:?}", loc.big_n);
    ensure!(loc.n == rat(1, 2), "n = {}", loc.n);
    let xi = BTreeSet::from([loc.xi_minus.clone(), loc.xi_plus.clone()]);
    ensure!(xi == BTreeSet::from([real(&int(-1)), real(&rat(1, 2))]), "xi = {:?}", xi);
    let outside = Mat2::translation(rat(-1, 2));
    let p = t.h.pieces();
    ensure!(p[0] == outside && p[2] == outside, "outside pieces {:?}", p);
    Ok(())
}

fn criterion_3() -> Check {
    let mut r = rng(3);
    let mut done = 0;
    while done < 50 {
        let a = rand_positive(&mut r, 30, 10);
        let eps = rand_positive(&mut r, 10, 30);
        if a.is_one() {
            continue;
        }
        done += 1;
        let patch = c1_interpolate(&a, &eps).map_err(err)?;
        let eps1 = if a > Rational::one() { &eps / &a } else { eps.clone() };
        ensure!(patch.eps1 == eps1, "eps1 for a = {a}, eps = {eps}");
        let u = &patch.u;
        ensure!(u.a() * u.d() - u.b() * u.c() == Rational::one(), "det u != 1");
        let left = real(&-(&eps1 * &a));
        let right = real(&eps1);
        let a2 = real(&(&a * &a));
        ensure!(u.apply(&left).map_err(err)? == Some(left.clone()), "u(-eps1 a)");
        ensure!(u.apply(&right).map_err(err)? == Some(a2.try_mul(&right).unwrap()), "u(eps1)");
        ensure!(u.derivative_at(&left).map_err(err)? == AlgebraicReal::one(), "u'(-eps1 a)");
        ensure!(u.derivative_at(&right).map_err(err)? == a2, "u'(eps1)");
    }

    for case in 0..20 {
        let g = rand_sl2_dyadic(&mut r);
        let x = rand_point_for(&mut r, &g);
        let t = rational_cut_and_paste(&g, &x).map_err(|e| format!("case {case}: {e}"))?;
        let s = smooth_element(&t.h).map_err(|e| format!("case {case}: {e}"))?;
        let classes = s.element.smoothness().map_err(err)?;
        ensure!(
            classes.iter().all(|(_, c)| *c == Smoothness::C1),
            "case {case}: smoothed element not C1: {classes:?}"
        );
    }
    Ok(())
}

fn criterion_4() -> Check {
    let (a, b) = thompson_generators();
    for h in [&a, &b] {
        let again = PwpMap::from_pieces(h.breakpoints().to_vec(), h.pieces().to_vec()).map_err(err)?;
        ensure!(&again == h, "generator does not re-validate");
        ensure!(h.is_c1().map_err(err)?, "generator not C1");
        ensure!(h.ring_membership(&RingSpec::Integers), "generator outside Z");
    }
    let pairs: Vec<(AlgebraicReal, AlgebraicReal)> = b
        .breakpoints()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            (
                b.pieces()[i].derivative_at(x).unwrap(),
                b.pieces()[i + 1].derivative_at(x).unwrap(),
            )
        })
        .collect();
    let want: Vec<(AlgebraicReal, AlgebraicReal)> = [1, 4, 1]
        .iter()
        .map(|&v| (AlgebraicReal::from_int(v), AlgebraicReal::from_int(v)))
        .collect();
    ensure!(pairs == want, "derivative pairs of B: {pairs:?}");
    let rels = thompson_relators(&a, &b).map_err(err)?;
    ensure!(rels.len() == 2, "expected two relators");
    ensure!(rels.iter().all(|w| *w == PwpMap::identity()), "a relator is not the identity");
    Ok(())
}

fn criterion_5() -> Check {
    let mut r = rng(5);
    let primes = BTreeSet::from([2u64]);
    let ring = dyadic_ring();
    let mut seen = 0;
    for case in 0..50 {
        let h = rand_element(&mut r);
        ensure!(h.ring_membership(&ring), "case {case}: element outside Z[1/2]");
        for x in h.breakpoints() {
            let w = breakpoint_witness(&h, x, &primes).map_err(|e| format!("case {case}: {e}"))?;
            ensure!(w.witness.classify() == MoebiusClass::Hyperbolic, "case {case}: not hyperbolic at {x}");
            ensure!(w.witness.apply(x).map_err(err)?.as_ref() == Some(x), "case {case}: {x} not fixed");
            ensure!(w.witness.in_ring(&ring), "case {case}: witness outside Z[1/2]");
            seen += 1;
        }
    }
    ensure!(seen > 0, "no breakpoints generated");

    let (_, b) = thompson_generators();
    let zero = AlgebraicReal::zero();
    ensure!(b.transition(0).classify() == MoebiusClass::Parabolic, "B is not parabolic at 0");
    let w = breakpoint_witness(&b, &zero, &primes).map_err(err)?;
    ensure!(w.witness.classify() == MoebiusClass::Hyperbolic, "parabolic branch not hyperbolic");
    ensure!(w.witness.apply(&zero).map_err(err)? == Some(zero), "parabolic witness moves 0");
    ensure!(w.witness.in_ring(&ring), "parabolic witness outside Z[1/2]");
    Ok(())
}

fn criterion_6() -> Check {
    let d = Mat2::diagonal(int(2)).unwrap();
    let mu = pushforward_haar(&d, 2, 1).map_err(err)?;
    let masses: Vec<(Ball, Rational)> = mu.masses.clone();
    let want = vec![
        (Ball::Finite(0), rat(5, 6)),
        (Ball::Finite(1), rat(1, 12)),
        (Ball::Infinite(0), rat(1, 12)),
    ];
    ensure!(masses == want, "pushforward of diag(2,1/2): {masses:?}");

    let mut r = rng(6);
    for case in 0..100 {
        let g = rand_sl2z(&mut r);
        let p = [2u64, 3, 5][case % 3];
        let k = 1 + (case as u32 / 3) % 3;
        let pushed = pushforward_haar(&g, p, k).map_err(err)?;
        ensure!(pushed == uniform_measure(p, k).map_err(err)?, "case {case}: uniform not invariant under {g}");
        ensure!(pushed.total() == Rational::one(), "case {case}: mass {}", pushed.total());
    }
    for case in 0..100 {
        let g = rand_sl2_dyadic(&mut r);
        let p = [2u64, 3][case % 2];
        let pushed = pushforward_haar(&g, p, 2).map_err(err)?;
        ensure!(pushed.total() == Rational::one(), "case {case}: mass {}", pushed.total());
        let c = cartan_decompose(&g, p).map_err(err)?;
        let back = &(&c.k1 * &c.a) * &c.k2;
        ensure!(back == g, "case {case}: k1 a k2 = {back} != {g}");
        ensure!(in_psl2_zp(&c.k1, p).unwrap() && in_psl2_zp(&c.k2, p).unwrap(), "case {case}: k not integral");
        ensure!((c.m == 0) == in_psl2_zp(&g, p).map_err(err)?, "case {case}: m = {} for {g}", c.m);
    }
    Ok(())
}

fn criterion_7() -> Check {
    let (a, b) = thompson_generators();
    let w = gap_witness(&BTreeSet::new(), &BTreeSet::from([2]), &[a, b]).map_err(err)?;
    w.verify().map_err(err)?;
    let text = serde_json::to_string(&w).map_err(err)?;
    let back: GapWitness = serde_json::from_str(&text).map_err(err)?;
    back.verify().map_err(err)?;
    ensure!(back == w, "gap witness does not round-trip");

    let g = m(rat(4, 3), rat(1, 3), int(1), int(1));
    let h = cut_and_paste(&g, &AlgebraicReal::zero()).map_err(err)?.h;
    let w = gap_witness(&BTreeSet::from([3]), &BTreeSet::from([3, 5]), &[h]).map_err(err)?;
    ensure!(w.p == 5, "separating prime {}", w.p);
    w.verify().map_err(err)?;
    let back: GapWitness = serde_json::from_str(&serde_json::to_string(&w).map_err(err)?).map_err(err)?;
    back.verify().map_err(err)?;

    let (a, b) = thompson_generators();
    match gap_witness(&BTreeSet::from([2, 3]), &BTreeSet::from([2]), &[a, b]) {
        Err(CertifyError::NoSeparatingPrime) => Ok(()),
        other => Err(format!("S' inside S gave {other:?}")),
    }
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    for case in 0..200 {
        let h = rand_element(&mut r);
        let g = rand_element(&mut r);
        let hg = h.compose(&g).map_err(err)?;
        let mut tried = 0;
        while tried < 10 {
            let x = real(&rand_rational(&mut r, 40, 16));
            let gx = g.eval(&x).map_err(err)?;
            if g.breakpoints().contains(&x) || h.breakpoints().contains(&gx) {
                continue;
            }
            tried += 1;
            let lhs = hg.projective_part(&ProjPoint::Finite(x.clone()), None).map_err(err)?;
            let ph = h.projective_part(&ProjPoint::Finite(gx), None).map_err(err)?;
            let pg = g.projective_part(&ProjPoint::Finite(x.clone()), None).map_err(err)?;
            ensure!(lhs.psl2_eq(&(&ph * &pg)), "case {case}: chain rule fails at {x}");
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let g1 = Mat2::diagonal(int(2)).unwrap();
    let g2 = m(int(2), int(1), int(1), int(1));
    let cert = schottky_certificate(&g1, &g2).map_err(err)?;
    cert.verify().map_err(err)?;
    ensure!(cert.inclusions.len() == 4, "{} inclusions", cert.inclusions.len());
    let checks: usize = cert
        .inclusions
        .iter()
        .map(|c| c.endpoints_inside.iter().filter(|b| **b).count())
        .sum();
    ensure!(checks == 8, "{checks} of 8 endpoint checks hold");
    ensure!(
        cert.inclusions.iter().all(|c| c.image.inside_interior_of(&c.target)),
        "an image arc is not inside its target"
    );

    let letters = [
        cert.g1_power(),
        cert.g1_power().inverse(),
        cert.g2_power(),
        cert.g2_power().inverse(),
    ];
    let nb = &cert.neighbourhoods;
    let base = (0..)
        .map(|i| ProjPoint::rational(rat(i * 7 - 300, 13)))
        .find(|p| nb.iter().all(|u| !u.contains(p)))
        .ok_or("no base point outside the neighbourhoods")?;
    let mut r = rng(9);
    for case in 0..1000 {
        let len = r.gen_range(1..=8);
        let mut word: Vec<usize> = Vec::with_capacity(len);
        while word.len() < len {
            let l = r.gen_range(0..4);
            if word.last().is_some_and(|&p| p ^ 1 == l) {
                continue;
            }
            word.push(l);
        }
        let prod = word.iter().fold(Mat2::identity(), |acc, &l| &acc * &letters[l]);
        ensure!(!prod.is_psl2_identity(), "case {case}: word {word:?} is trivial");
        let image = prod.act(&base).map_err(err)?;
        ensure!(nb[word[0]].interior_contains(&image), "case {case}: word {word:?} sends {base} to {image}");
    }
    Ok(())
}

fn criterion_10() -> Check {
    let mut r = rng(10);
    for case in 0..100 {
        let z = GaussianRational::new(rand_rational(&mut r, 50, 20), rand_positive(&mut r, 20, 60));
        let (g, w) = reduce_to_gauss_domain(&z).map_err(err)?;
        ensure!(w.re.abs() <= rat(1, 2), "case {case}: |Re| > 1/2 for {z}");
        ensure!(&w.re * &w.re + &w.im * &w.im >= Rational::one(), "case {case}: |w| < 1 for {z}");
        ensure!(z.act(&g) == w, "case {case}: matrix does not send {z} to {w}");
        ensure!(g.entries().iter().all(|e| e.is_integer()), "case {case}: matrix not integral");
    }
    let examples = [("5/2+1i", "[[1,-2],[0,1]]", "1/2+1i"), ("1/4+1/4i", "[[2,-1],[1,0]]", "0+2i")];
    for (z, mat, point) in examples {
        let (g, w) = reduce_to_gauss_domain(&z.parse().map_err(err)?).map_err(err)?;
        ensure!(g.to_string() == mat && w.to_string() == point, "{z} gave {g} and {w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Check, u64); 10] = [
        (criterion_1, 10),
        (criterion_2, 1),
        (criterion_3, 5),
        (criterion_4, 1),
        (criterion_5, 10),
        (criterion_6, 10),
        (criterion_7, 5),
        (criterion_8, 10),
        (criterion_9, 30),
        (criterion_10, 1),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit} s"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
