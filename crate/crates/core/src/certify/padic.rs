use num_traits::{One, Zero};
use serde::Serialize;

use super::CertifyError;
use crate::exactnum::{padic_valuation, prime_power, Rational, Valuation};
use crate::moebius::Mat2;

/// All four entries are p-adic integers.
pub fn in_psl2_zp(g: &Mat2<Rational>, p: u64) -> Result<bool, CertifyError> {
    for e in g.entries() {
        if padic_valuation(e, p)? < Valuation::Finite(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `g = k1 * diag(p^m, p^-m) * k2` with `k1`, `k2` having p-integral entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanDecomposition {
    pub p: u64,
    pub k1: Mat2<Rational>,
    pub m: u32,
    pub a: Mat2<Rational>,
    pub k2: Mat2<Rational>,
}

fn w0() -> Mat2<Rational> {
    Mat2::new(Rational::zero(), -Rational::one(), Rational::one(), Rational::zero())
        .expect("det one")
}

/// Pivots on an entry of least valuation, moved to the lower right corner by
/// row and column swaps, and clears the rest with unipotents over `Z_(p)`.
pub fn cartan_decompose(g: &Mat2<Rational>, p: u64) -> Result<CartanDecomposition, CertifyError> {
    let vals = g
        .entries()
        .map(|e| padic_valuation(e, p))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let min = *vals.iter().min().expect("four entries");
    let m = match min {
        Valuation::Finite(v) if v < 0 => (-v) as u32,
        _ => {
            return Ok(CartanDecomposition {
                p,
                k1: g.clone(),
                m: 0,
                a: Mat2::identity(),
                k2: Mat2::identity(),
            })
        }
    };
    // Ties go to (2,2), then (2,1), (1,2), (1,1).
    let pivot = [3usize, 2, 1, 0]
        .into_iter()
        .find(|&i| vals[i] == min)
        .expect("minimum attained");
    let (row_swap, col_swap) = match pivot {
        3 => (false, false),
        2 => (false, true),
        1 => (true, false),
        _ => (true, true),
    };
    let w = w0();
    let left = if row_swap { w.clone() } else { Mat2::identity() };
    let right = if col_swap { w } else { Mat2::identity() };
    // g = left * h * right
    let h = &(&left.inverse() * g) * &right.inverse();
    let (b, c, d) = (h.b(), h.c(), h.d());
    let u1_inv = Mat2::translation(b / d);
    let l1_inv = Mat2::new(Rational::one(), Rational::zero(), c / d, Rational::one())
        .expect("det one");
    let unit = d * prime_power(p, m as i64);
    let diag_unit = Mat2::diagonal(unit.recip()).expect("nonzero unit");
    let a = Mat2::diagonal(prime_power(p, m as i64)).expect("nonzero");
    let k1 = &left * &u1_inv;
    let k2 = &(&diag_unit * &l1_inv) * &right;
    debug_assert_eq!(&(&k1 * &a) * &k2, *g);
    Ok(CartanDecomposition { p, k1, m, a, k2 })
}
