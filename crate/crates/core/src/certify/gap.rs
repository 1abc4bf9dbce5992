use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{in_psl2_zp, pushforward_haar, uniform_measure, BallMeasure, CertifyError};
use crate::exactnum::{is_prime, padic_valuation, Rational, RingSpec, Valuation};
use crate::moebius::Mat2;
use crate::pwp::PwpMap;

pub const GAP_WITNESS_KIND: &str = "gap_witness";

/// Least p-adic valuation among the entries of one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceCheck {
    pub mat: Mat2<Rational>,
    #[serde(rename = "minValuation")]
    pub min_valuation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub element: PwpMap<Rational>,
    pub pieces: Vec<PieceCheck>,
}

/// The generators of `Γ_S` have all projective parts in `PSL_2(Z_p)`, so they
/// fix the invariant measure; `diag(p, 1/p)` in `Γ_S'` moves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapWitness {
    pub kind: String,
    #[serde(rename = "S")]
    pub s: BTreeSet<u64>,
    #[serde(rename = "S2")]
    pub s2: BTreeSet<u64>,
    pub p: u64,
    #[serde(rename = "fixedSide")]
    pub fixed_side: Vec<GeneratorCheck>,
    #[serde(rename = "movingElement")]
    pub moving_element: PwpMap<Rational>,
    #[serde(rename = "uniformMeasure")]
    pub uniform_measure: BallMeasure,
    #[serde(rename = "movedMeasure")]
    pub moved_measure: BallMeasure,
}

fn piece_check(m: &Mat2<Rational>, p: u64) -> Result<PieceCheck, CertifyError> {
    let mut min = Valuation::Infinite;
    for e in m.entries() {
        min = min.min(padic_valuation(e, p)?);
    }
    Ok(PieceCheck {
        mat: m.clone(),
        min_valuation: min.to_string(),
    })
}

fn generator_check(h: &PwpMap<Rational>, p: u64) -> Result<GeneratorCheck, CertifyError> {
    Ok(GeneratorCheck {
        element: h.clone(),
        pieces: h.pieces().iter().map(|m| piece_check(m, p)).collect::<Result<_, _>>()?,
    })
}

fn moving(p: u64) -> Result<(Mat2<Rational>, PwpMap<Rational>), CertifyError> {
    let d = Mat2::diagonal(Rational::from_integer(p.into()))?;
    let h = PwpMap::global(d.clone())?;
    Ok((d, h))
}

pub fn gap_witness(
    s: &BTreeSet<u64>,
    s2: &BTreeSet<u64>,
    gens: &[PwpMap<Rational>],
) -> Result<GapWitness, CertifyError> {
    let ring = RingSpec::s_integers(s.iter().copied())?;
    RingSpec::s_integers(s2.iter().copied())?;
    let p = *s2.difference(s).next().ok_or(CertifyError::NoSeparatingPrime)?;
    if let Some(i) = gens.iter().position(|h| !h.ring_membership(&ring)) {
        return Err(CertifyError::GeneratorOutsideRing(i));
    }
    let fixed_side = gens
        .iter()
        .map(|h| generator_check(h, p))
        .collect::<Result<Vec<_>, _>>()?;
    let (d, moving_element) = moving(p)?;
    Ok(GapWitness {
        kind: GAP_WITNESS_KIND.to_string(),
        s: s.clone(),
        s2: s2.clone(),
        p,
        fixed_side,
        moving_element,
        uniform_measure: uniform_measure(p, 1)?,
        moved_measure: pushforward_haar(&d, p, 1)?,
    })
}

impl GapWitness {
    /// Re-runs every sub-check from the stored data alone.
    pub fn verify(&self) -> Result<(), CertifyError> {
        let fail = |m: String| Err(CertifyError::CheckFailed(m));
        if self.kind != GAP_WITNESS_KIND {
            return fail("wrong document kind".into());
        }
        if !is_prime(self.p) || self.s.contains(&self.p) || !self.s2.contains(&self.p) {
            return fail(format!("{} does not separate S from S'", self.p));
        }
        if self.s2.difference(&self.s).next() != Some(&self.p) {
            return fail(format!("{} is not the least separating prime", self.p));
        }
        let ring = RingSpec::s_integers(self.s.iter().copied())?;
        for (i, g) in self.fixed_side.iter().enumerate() {
            if !g.element.ring_membership(&ring) {
                return fail(format!("generator {i} is outside Z[1/S]"));
            }
            if *g != generator_check(&g.element, self.p)? {
                return fail(format!("generator {i}: recorded piece data differ"));
            }
            for m in g.element.pieces() {
                if !in_psl2_zp(m, self.p)? {
                    return fail(format!("generator {i}: piece {m} is not p-integral"));
                }
            }
        }
        let (d, expected) = moving(self.p)?;
        if self.moving_element != expected {
            return fail("moving element is not diag(p, 1/p)".into());
        }
        let ring2 = RingSpec::s_integers(self.s2.iter().copied())?;
        if !self.moving_element.ring_membership(&ring2) {
            return fail("moving element is outside Z[1/S']".into());
        }
        if self.uniform_measure != uniform_measure(self.p, 1)? {
            return fail("uniform measure differs".into());
        }
        if self.moved_measure != pushforward_haar(&d, self.p, 1)? {
            return fail("moved measure differs from recomputation".into());
        }
        let one = Rational::from_integer(1.into());
        if self.moved_measure.total() != one || self.uniform_measure.total() != one {
            return fail("masses do not sum to 1".into());
        }
        if self.moved_measure == self.uniform_measure {
            return fail("the moving element fixes the uniform measure".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::thompson_generators;

    #[test]
    fn thompson_gap() {
        let (a, b) = thompson_generators();
        let w = gap_witness(&BTreeSet::new(), &[2].into(), &[a, b]).unwrap();
        assert_eq!(w.p, 2);
        let masses: Vec<String> = w.moved_measure.masses.iter().map(|(_, m)| m.to_string()).collect();
        assert_eq!(masses, ["5/6", "1/12", "1/12"]);
        w.verify().unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.starts_with(r#"{"kind":"gap_witness""#));
        let back: GapWitness = serde_json::from_str(&text).unwrap();
        back.verify().unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn gap_errors() {
        let (a, _) = thompson_generators();
        let s: BTreeSet<u64> = [3].into();
        let w = gap_witness(&s, &[3, 5].into(), std::slice::from_ref(&a)).unwrap();
        assert_eq!(w.p, 5);
        assert_eq!(w.moving_element.pieces()[0].to_string(), "[[5,0],[0,1/5]]");
        assert_eq!(gap_witness(&s, &s, &[a]), Err(CertifyError::NoSeparatingPrime));
        let half = PwpMap::global(Mat2::translation(Rational::new(1.into(), 2.into()))).unwrap();
        assert_eq!(
            gap_witness(&s, &[5].into(), &[half]),
            Err(CertifyError::GeneratorOutsideRing(0))
        );
    }

    #[test]
    fn tampered_certificate_fails() {
        let (a, b) = thompson_generators();
        let mut w = gap_witness(&BTreeSet::new(), &[2].into(), &[a, b]).unwrap();
        w.moved_measure.masses[0].1 = Rational::new(1.into(), 3.into());
        assert!(w.verify().is_err());
    }
}
