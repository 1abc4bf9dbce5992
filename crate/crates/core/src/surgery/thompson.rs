use crate::exactnum::{int, rat, AlgebraicReal, Rational, Scalar};
use crate::moebius::Mat2;
use crate::pwp::{PwpError, PwpMap};

/// Generators `A: x -> x + 1` and the three-breakpoint element `B` of
/// Thompson's group `F` realized with `SL_2(Z)` pieces.
pub fn thompson_generators() -> (PwpMap<Rational>, PwpMap<Rational>) {
    let m = |a, b, c, d| Mat2::new(int(a), int(b), int(c), int(d)).expect("det one");
    let a = PwpMap::global(m(1, 1, 0, 1)).expect("translation");
    let b = PwpMap::from_pieces(
        vec![
            AlgebraicReal::from_int(0),
            AlgebraicReal::from(rat(1, 2)),
            AlgebraicReal::from_int(1),
        ],
        vec![m(1, 0, 0, 1), m(1, 0, -1, 1), m(3, -1, 1, 0), m(1, 1, 0, 1)],
    )
    .expect("valid generator");
    (a, b)
}

/// Word product `x y`: apply `x` first, then `y`.
fn then<T: Scalar>(x: &PwpMap<T>, y: &PwpMap<T>) -> Result<PwpMap<T>, PwpError> {
    y.compose(x)
}

/// `[x, y] = x y x^-1 y^-1`, words acting left to right.
pub fn commutator<T: Scalar>(x: &PwpMap<T>, y: &PwpMap<T>) -> Result<PwpMap<T>, PwpError> {
    let xy = then(x, y)?;
    then(&then(&xy, &x.invert()?)?, &y.invert()?)
}

/// The two defining relators `[A B^-1, A^-1 B A]` and `[A B^-1, A^-2 B A^2]`,
/// words acting left to right.
pub fn thompson_relators(
    a: &PwpMap<Rational>,
    b: &PwpMap<Rational>,
) -> Result<[PwpMap<Rational>; 2], PwpError> {
    let a_inv = a.invert()?;
    let ab = then(a, &b.invert()?)?;
    let conj1 = then(&then(&a_inv, b)?, a)?;
    let a2 = then(a, a)?;
    let conj2 = then(&then(&a2.invert()?, b)?, &a2)?;
    Ok([commutator(&ab, &conj1)?, commutator(&ab, &conj2)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RingSpec;
    use crate::pwp::Smoothness;

    #[test]
    fn generators_valid_and_smooth() {
        let (a, b) = thompson_generators();
        assert!(a.breakpoints().is_empty());
        assert_eq!(b.breakpoints().len(), 3);
        assert!(a.ring_membership(&RingSpec::Integers));
        assert!(b.ring_membership(&RingSpec::Integers));
        assert!(b.smoothness().unwrap().iter().all(|(_, c)| *c == Smoothness::C1));
    }

    #[test]
    fn relators_are_trivial() {
        let (a, b) = thompson_generators();
        for r in thompson_relators(&a, &b).unwrap() {
            assert!(r.is_identity(), "{r:?}");
        }
    }
}
