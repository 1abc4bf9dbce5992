use serde::{Deserialize, Serialize};

use super::arc::point_inside;
use super::{Arc, CertifyError};
use crate::exactnum::Rational;
use crate::moebius::{Mat2, MoebiusError, ProjPoint};

/// Largest power tried before giving up.
pub const MAX_POWER: u32 = 10_000;

fn fixed_pair(g: &Mat2<Rational>) -> Result<(ProjPoint, ProjPoint), CertifyError> {
    g.hyperbolic_fixed_points().map_err(|e| match e {
        MoebiusError::NotHyperbolic => CertifyError::NotHyperbolic,
        other => other.into(),
    })
}

/// Least `k >= 1` with `g^k(domain)` inside the open `target`.
fn first_power(g: &Mat2<Rational>, domain: &Arc, target: &Arc) -> Result<u32, CertifyError> {
    let mut image = domain.clone();
    for k in 1..=MAX_POWER {
        image = image.image(g)?;
        if image.inside_interior_of(target) {
            return Ok(k);
        }
    }
    Err(CertifyError::NoConvergence(MAX_POWER))
}

/// Least `k >= 1` with `g^k(i) ⊆ u`, for `i` closed and avoiding both fixed
/// points and `u` open around the attracting one.
pub fn north_south_certificate(g: &Mat2<Rational>, i: &Arc, u: &Arc) -> Result<u32, CertifyError> {
    let (rep, att) = fixed_pair(g)?;
    if i.contains(&rep) || i.contains(&att) {
        return Err(CertifyError::IntervalHitsFixedPoint);
    }
    if !u.interior_contains(&att) {
        return Err(CertifyError::AttractorOutside);
    }
    first_power(g, i, u)
}

/// One ping-pong inclusion `g^power(domain) ⊆ target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionCheck {
    pub generator: usize,
    pub power: i64,
    pub domain: Arc,
    pub image: Arc,
    pub target: Arc,
    /// Both image endpoints lie inside the target.
    pub endpoints_inside: [bool; 2],
}

/// `<g1^k, g2^k>` is free of rank two by ping-pong on the four neighbourhoods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub kind: String,
    pub g1: Mat2<Rational>,
    pub g2: Mat2<Rational>,
    pub k: u32,
    /// `[U1+, U1-, U2+, U2-]`: around the attracting and repelling points.
    pub neighbourhoods: [Arc; 4],
    pub inclusions: Vec<InclusionCheck>,
}

pub const PING_PONG_KIND: &str = "ping_pong";

/// Builds disjoint rational neighbourhoods of the four fixed points and the
/// least common power making all four inclusions hold.
pub fn schottky_certificate(
    g1: &Mat2<Rational>,
    g2: &Mat2<Rational>,
) -> Result<PingPongCertificate, CertifyError> {
    let (r1, a1) = fixed_pair(g1)?;
    let (r2, a2) = fixed_pair(g2)?;
    let labelled = [a1, r1, a2, r2];
    let mut sorted = labelled.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < 4 {
        return Err(CertifyError::SharedFixedPoint);
    }
    let seps: Vec<ProjPoint> = (0..4)
        .map(|i| point_inside(&sorted[i], &sorted[(i + 1) % 4]))
        .collect();
    let around = |f: &ProjPoint| -> Arc {
        let i = sorted.iter().position(|x| x == f).expect("sorted fixed point");
        Arc::new(
            point_inside(&seps[(i + 3) % 4], f),
            point_inside(f, &seps[i]),
        )
    };
    let nb = [
        around(&labelled[0]),
        around(&labelled[1]),
        around(&labelled[2]),
        around(&labelled[3]),
    ];
    schottky_certificate_with(g1, g2, nb)
}

fn inclusion_specs(
    g1: &Mat2<Rational>,
    g2: &Mat2<Rational>,
    nb: &[Arc; 4],
) -> [(usize, i64, Mat2<Rational>, Arc, Arc); 4] {
    [
        (1, 1, g1.clone(), nb[1].complement(), nb[0].clone()),
        (1, -1, g1.inverse(), nb[0].complement(), nb[1].clone()),
        (2, 1, g2.clone(), nb[3].complement(), nb[2].clone()),
        (2, -1, g2.inverse(), nb[2].complement(), nb[3].clone()),
    ]
}

fn check_neighbourhoods(
    g1: &Mat2<Rational>,
    g2: &Mat2<Rational>,
    nb: &[Arc; 4],
) -> Result<(), CertifyError> {
    let (r1, a1) = fixed_pair(g1)?;
    let (r2, a2) = fixed_pair(g2)?;
    if [&a1, &r1].iter().any(|x| *x == &a2 || *x == &r2) {
        return Err(CertifyError::SharedFixedPoint);
    }
    for (u, f) in nb.iter().zip([&a1, &r1, &a2, &r2]) {
        if !u.interior_contains(f) {
            return Err(CertifyError::AttractorOutside);
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !nb[i].disjoint(&nb[j]) {
                return Err(CertifyError::CheckFailed(format!(
                    "neighbourhoods {i} and {j} overlap"
                )));
            }
        }
    }
    Ok(())
}

/// As [`schottky_certificate`] with caller-supplied neighbourhoods
/// `[U1+, U1-, U2+, U2-]`.
pub fn schottky_certificate_with(
    g1: &Mat2<Rational>,
    g2: &Mat2<Rational>,
    nb: [Arc; 4],
) -> Result<PingPongCertificate, CertifyError> {
    check_neighbourhoods(g1, g2, &nb)?;
    let specs = inclusion_specs(g1, g2, &nb);
    let mut k = 1;
    for (_, _, g, domain, target) in &specs {
        k = k.max(first_power(g, domain, target)?);
    }
    while k <= MAX_POWER {
        let inclusions = build_checks(&specs, k)?;
        if inclusions.iter().all(|c| c.endpoints_inside == [true, true] && c.image.inside_interior_of(&c.target)) {
            return Ok(PingPongCertificate {
                kind: PING_PONG_KIND.to_string(),
                g1: g1.clone(),
                g2: g2.clone(),
                k,
                neighbourhoods: nb,
                inclusions,
            });
        }
        k += 1;
    }
    Err(CertifyError::NoConvergence(MAX_POWER))
}

fn build_checks(
    specs: &[(usize, i64, Mat2<Rational>, Arc, Arc); 4],
    k: u32,
) -> Result<Vec<InclusionCheck>, CertifyError> {
    specs
        .iter()
        .map(|(gen, sign, g, domain, target)| {
            let image = domain.image(&g.pow(k as i64))?;
            Ok(InclusionCheck {
                generator: *gen,
                power: sign * k as i64,
                domain: domain.clone(),
                endpoints_inside: [
                    target.interior_contains(&image.from),
                    target.interior_contains(&image.to),
                ],
                image,
                target: target.clone(),
            })
        })
        .collect()
}

impl PingPongCertificate {
    /// Recomputes every inclusion from the stored matrices and neighbourhoods.
    pub fn verify(&self) -> Result<(), CertifyError> {
        let fail = |m: &str| Err(CertifyError::CheckFailed(m.to_string()));
        if self.kind != PING_PONG_KIND {
            return fail("wrong document kind");
        }
        if self.k == 0 {
            return fail("power must be positive");
        }
        check_neighbourhoods(&self.g1, &self.g2, &self.neighbourhoods)?;
        let fresh = build_checks(&inclusion_specs(&self.g1, &self.g2, &self.neighbourhoods), self.k)?;
        if fresh != self.inclusions {
            return fail("recorded inclusions differ from recomputation");
        }
        for c in &fresh {
            if !(c.endpoints_inside == [true, true] && c.image.inside_interior_of(&c.target)) {
                return fail("an inclusion does not hold");
            }
        }
        Ok(())
    }

    pub fn g1_power(&self) -> Mat2<Rational> {
        self.g1.pow(self.k as i64)
    }

    pub fn g2_power(&self) -> Mat2<Rational> {
        self.g2.pow(self.k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn north_south_examples() {
        let g = Mat2::diagonal(int(2)).unwrap();
        let u = Arc::rational(int(100), int(-100));
        assert_eq!(north_south_certificate(&g, &Arc::rational(int(1), int(3)), &u), Ok(4));
        let u0 = Arc::rational(rat(-1, 100), rat(1, 100));
        let i0 = Arc::rational(rat(1, 3), int(1));
        assert_eq!(north_south_certificate(&g.inverse(), &i0, &u0), Ok(4));
        assert_eq!(
            north_south_certificate(&g, &Arc::rational(rat(-1, 2), rat(1, 2)), &u),
            Err(CertifyError::IntervalHitsFixedPoint)
        );
        assert_eq!(
            north_south_certificate(&Mat2::translation(int(1)), &Arc::rational(int(1), int(3)), &u),
            Err(CertifyError::NotHyperbolic)
        );
    }

    #[test]
    fn schottky_example() {
        let g1 = Mat2::diagonal(int(2)).unwrap();
        let g2 = Mat2::new(int(2), int(1), int(1), int(1)).unwrap();
        let c = schottky_certificate(&g1, &g2).unwrap();
        assert!(c.k >= 1);
        assert_eq!(c.inclusions.len(), 4);
        c.verify().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: PingPongCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        back.verify().unwrap();

        assert_eq!(schottky_certificate(&g1, &g1), Err(CertifyError::SharedFixedPoint));
    }
}
