//! Two independent supersingularity tests on an L-polynomial.
//!
//! Test A (cyclotomic): the eigenvalues α satisfy α = q^{1/2}ζ with ζ a root
//! of unity iff the monic polynomial with roots α²/q has integer coefficients
//! and factors completely into cyclotomic polynomials (Kronecker's theorem
//! made effective by trial division). Test B (Newton polygon): every p-adic
//! slope equals 1/2 in v_q normalization. The two must agree on every input —
//! a disagreement is an internal bug, never a result.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{cyclotomic_poly, euler_phi};
use crate::error::{Error, Result};
use crate::poly;
use crate::zeta::LPolynomial;

/// One segment of a Newton polygon: an exact slope (in v_q units, so the
/// supersingular condition reads "slope 1/2") and its horizontal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational64,
    pub length: u64,
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&format!("{}/{}", self.slope.numer(), self.slope.denom()))?;
        seq.serialize_element(&self.length)?;
        seq.end()
    }
}

/// Lower convex hull of (i, v_p(a_i)), slopes normalized to v_q units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn total_length(&self) -> u64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn is_pure_of_slope(&self, slope: Rational64) -> bool {
        self.segments.iter().all(|s| s.slope == slope)
    }

    /// Multiset of slopes is symmetric under s -> 1 - s.
    pub fn slope_symmetry_holds(&self) -> bool {
        let mut counts: std::collections::HashMap<Rational64, i128> = Default::default();
        for s in &self.segments {
            *counts.entry(s.slope).or_default() += s.length as i128;
            *counts.entry(Rational64::one() - s.slope).or_default() -= s.length as i128;
        }
        counts.values().all(|&v| v == 0)
    }

    pub fn compact(&self) -> String {
        self.segments
            .iter()
            .map(|s| format!("{}/{}x{}", s.slope.numer(), s.slope.denom(), s.length))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Newton polygon of L with respect to the prime p, where L.q = p^r.
pub fn newton_polygon(l: &LPolynomial, p: u64) -> Result<NewtonPolygon> {
    let (p_check, r) = prime_power(l.q()).expect("field size is a prime power");
    assert_eq!(p, p_check, "p must be the characteristic of the base field");
    if l.coeffs()[0].is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    // finite-valuation support points (i, v_p(a_i))
    let pts: Vec<(i64, i64)> = l
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, valuation(c, p)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if it turns left (strictly below the chord a-pt)
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: Rational64::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) * r as i64),
            length: (w[1].0 - w[0].0) as u64,
        })
        .collect();
    Ok(NewtonPolygon { segments })
}

fn valuation(c: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut c = c.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&c, &p);
        if !r.is_zero() {
            return v;
        }
        c = q;
        v += 1;
    }
}

pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = crate::finite_field::prime_factors(q).first().copied()?;
    let mut r = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Monic rational polynomial S with roots α_i²/q^w, built by root-squaring:
/// from C(T) = T^{2g} L(1/T), form C₂(T²) = C(T)C(-T), then scale.
pub fn squared_scaled_charpoly(l: &LPolynomial) -> Vec<BigRational> {
    let deg = l.degree();
    let c: Vec<BigInt> = l.coeffs().iter().rev().cloned().collect();
    let c_neg: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x })
        .collect();
    let prod = poly::mul(&c, &c_neg);
    // C(T)C(-T) is even; its T^{2i} coefficient is the T^i coefficient of C₂
    let c2: Vec<BigInt> = (0..=deg).map(|i| prod.get(2 * i).cloned().unwrap_or_default()).collect();
    let scale = BigInt::from(l.q()).pow(l.weight());
    (0..=deg)
        .map(|i| {
            // S_i = C₂_i q^{w·i} / q^{w·deg} = C₂_i / q^{w(deg - i)}
            BigRational::new(c2[i].clone(), scale.pow((deg - i) as u32))
        })
        .collect()
}

/// Why the root-of-unity test failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FailureWitness {
    /// S has a non-integer coefficient, so some α²/q is not an algebraic
    /// integer; exhibiting the index is already a proof.
    NonIntegerCoefficient { index: usize },
    /// Residual factor of S not divisible by any admissible cyclotomic.
    NonCyclotomicFactor { degree: usize },
    /// A Newton slope differs from 1/2 (reported by the polygon test).
    SlopeOffHalf { slope: String },
}

/// Result of the effective Kronecker test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootsOfUnityReport {
    pub all_roots_of_unity: bool,
    /// Multiset of cyclotomic factors (m, multiplicity), present on success.
    pub factors: Vec<(u64, u32)>,
    pub witness: Option<FailureWitness>,
}

/// Does the monic rational polynomial S have all roots equal to roots of
/// unity? S must be integral and a product of cyclotomics Φ_m with
/// φ(m) ≤ deg S; trial division produces the explicit factorization.
pub fn all_roots_of_unity(s: &[BigRational]) -> RootsOfUnityReport {
    assert!(s.last().map(|c| c.is_one()).unwrap_or(false), "S must be monic");
    if let Some(index) = s.iter().position(|c| !c.is_integer()) {
        return RootsOfUnityReport {
            all_roots_of_unity: false,
            factors: vec![],
            witness: Some(FailureWitness::NonIntegerCoefficient { index }),
        };
    }
    let mut residual: Vec<BigInt> = s.iter().map(|c| c.to_integer()).collect();
    residual = poly::trim(residual);
    let full_degree = residual.len() - 1;
    let mut factors = Vec::new();
    // phi(m) >= sqrt(m/2) makes the search space finite
    let m_bound = 2 * (full_degree as u64).pow(2) + 1;
    for m in 1..=m_bound {
        if residual.len() == 1 {
            break;
        }
        if euler_phi(m) as usize > residual.len() - 1 {
            continue;
        }
        let phi_m = cyclotomic_poly(m);
        let mut mult = 0u32;
        while let Some(q) = poly::div_exact_monic(&residual, phi_m.coeffs()) {
            residual = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((m, mult));
        }
    }
    if residual.len() == 1 {
        RootsOfUnityReport {
            all_roots_of_unity: true,
            factors,
            witness: None,
        }
    } else {
        RootsOfUnityReport {
            all_roots_of_unity: false,
            factors: vec![],
            witness: Some(FailureWitness::NonCyclotomicFactor {
                degree: residual.len() - 1,
            }),
        }
    }
}

/// Combined supersingularity decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub supersingular: bool,
    pub by_cyclotomic: bool,
    pub by_newton: bool,
    pub slopes: NewtonPolygon,
    pub cyclo_factors: Option<Vec<(u64, u32)>>,
    pub failure_witness: Option<FailureWitness>,
}

/// Run both tests and assert they agree. Kronecker's theorem guarantees the
/// agreement, so a mismatch is a bug trap, not a possible outcome.
///
/// ```
/// use num_bigint::BigInt;
/// use weilss::zeta::LPolynomial;
/// use weilss::weil::is_supersingular;
///
/// // supersingular genus-1 curve over F_2
/// let l = LPolynomial::new(vec![1.into(), 0.into(), 2.into()], 2);
/// assert!(is_supersingular(&l).unwrap().supersingular);
///
/// // ordinary control: a slope-0 segment appears
/// let l = LPolynomial::new(vec![1.into(), 1.into(), 2.into()], 2);
/// assert!(!is_supersingular(&l).unwrap().supersingular);
/// ```
pub fn is_supersingular(l: &LPolynomial) -> Result<Verdict> {
    let (p, _) = prime_power(l.q()).ok_or_else(|| {
        Error::BadParameters(format!("{} is not a prime power", l.q()))
    })?;
    let polygon = newton_polygon(l, p)?;
    let target = Rational64::new(l.weight() as i64, 2);
    let by_newton = polygon.is_pure_of_slope(target);

    let s = squared_scaled_charpoly(l);
    let report = all_roots_of_unity(&s);
    let by_cyclotomic = report.all_roots_of_unity;

    if by_newton != by_cyclotomic {
        return Err(Error::InternalDisagreement(format!(
            "newton={by_newton} cyclotomic={by_cyclotomic} for coeffs {:?} over q={}",
            l.coeffs(),
            l.q()
        )));
    }
    let failure_witness = if by_newton {
        None
    } else {
        report.witness.or_else(|| {
            polygon
                .segments
                .iter()
                .find(|seg| seg.slope != target)
                .map(|seg| FailureWitness::SlopeOffHalf {
                    slope: format!("{}/{}", seg.slope.numer(), seg.slope.denom()),
                })
        })
    };
    Ok(Verdict {
        supersingular: by_newton,
        by_cyclotomic,
        by_newton,
        slopes: polygon,
        cyclo_factors: by_cyclotomic.then_some(report.factors),
        failure_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{l_polynomial, CurveFamily, CurveInstance};

    fn lp(coeffs: &[i64], q: u64) -> LPolynomial {
        LPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), q)
    }

    #[test]
    fn polygon_examples() {
        let np = newton_polygon(&lp(&[1, 0, 2], 2), 2).unwrap();
        assert_eq!(
            np.segments,
            vec![Segment { slope: Rational64::new(1, 2), length: 2 }]
        );

        let np = newton_polygon(&lp(&[1, 1, 2], 2), 2).unwrap();
        assert_eq!(
            np.segments,
            vec![
                Segment { slope: Rational64::zero(), length: 1 },
                Segment { slope: Rational64::one(), length: 1 },
            ]
        );

        let np = newton_polygon(&lp(&[1], 2), 2).unwrap();
        assert!(np.segments.is_empty());

        // v_q normalization: over F_4 the slopes still read in halves
        let np = newton_polygon(&lp(&[1, 4, 4], 4), 2).unwrap();
        assert!(np.is_pure_of_slope(Rational64::new(1, 2)));
    }

    #[test]
    fn polygon_structure_invariants() {
        for (coeffs, q) in [
            (vec![1i64, 0, 2], 2u64),
            (vec![1, 1, 2], 2),
            (vec![1, 4, 4], 4),
            (vec![1, 1, -9, 11, 121], 11),
            (vec![1, 0, 0, 0, 4], 2),
        ] {
            let l = lp(&coeffs, q);
            let np = newton_polygon(&l, prime_power(q).unwrap().0).unwrap();
            assert_eq!(np.total_length() as usize, l.degree());
            assert!(np.slope_symmetry_holds(), "{coeffs:?}");
            let mut prev: Option<Rational64> = None;
            for seg in &np.segments {
                assert!(seg.slope >= Rational64::zero() && seg.slope <= Rational64::one());
                if let Some(p) = prev {
                    assert!(seg.slope > p, "slopes must strictly increase");
                }
                prev = Some(seg.slope);
            }
        }
    }

    #[test]
    fn squared_scaled_examples() {
        // L = 1 + 2T², q=2: eigenvalues ±i√2, squares -2, scaled -1: S = (T+1)²
        let s = squared_scaled_charpoly(&lp(&[1, 0, 2], 2));
        let expect: Vec<BigRational> = [1, 2, 1]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        assert_eq!(s, expect);

        // degenerate genus 0
        let s = squared_scaled_charpoly(&lp(&[1], 2));
        assert_eq!(s, vec![BigRational::one()]);

        // ordinary control: S = T² + (3/2)T + 1, non-integral
        let s = squared_scaled_charpoly(&lp(&[1, 1, 2], 2));
        assert_eq!(s[1], BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(s[2], BigRational::one());
        assert_eq!(s[0], BigRational::one());
    }

    #[test]
    fn roots_of_unity_examples() {
        let poly = |v: &[i64]| -> Vec<BigRational> {
            v.iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect()
        };
        let rep = all_roots_of_unity(&poly(&[1, 0, 1])); // T² + 1
        assert!(rep.all_roots_of_unity);
        assert_eq!(rep.factors, vec![(4, 1)]);

        let rep = all_roots_of_unity(&poly(&[1, 2, 1])); // (T+1)²
        assert!(rep.all_roots_of_unity);
        assert_eq!(rep.factors, vec![(2, 2)]);

        let rep = all_roots_of_unity(&poly(&[-2, 1])); // T - 2
        assert!(!rep.all_roots_of_unity);
        assert!(matches!(
            rep.witness,
            Some(FailureWitness::NonCyclotomicFactor { degree: 1 })
        ));

        let rep = all_roots_of_unity(&squared_scaled_charpoly(&lp(&[1, 1, 2], 2)));
        assert!(!rep.all_roots_of_unity);
        assert!(matches!(
            rep.witness,
            Some(FailureWitness::NonIntegerCoefficient { index: 1 })
        ));
    }

    #[test]
    fn verdict_anchors() {
        let v = is_supersingular(&lp(&[1, 0, 2], 2)).unwrap();
        assert!(v.supersingular && v.by_cyclotomic && v.by_newton);

        let v = is_supersingular(&lp(&[1, 1, 2], 2)).unwrap();
        assert!(!v.supersingular);
        assert!(v.failure_witness.is_some());

        let v = is_supersingular(&lp(&[1], 2)).unwrap();
        assert!(v.supersingular, "degree 0 is vacuously supersingular");
    }

    #[test]
    fn numeric_corroboration_on_unit_circle() {
        for (coeffs, q) in [(vec![1i64, 0, 2], 2u64), (vec![1, 1, 2], 2), (vec![1, 4, 4], 4)] {
            let l = lp(&coeffs, q);
            let v = is_supersingular(&l).unwrap();
            let s = squared_scaled_charpoly(&l);
            if let Some(ints) = poly::rat_to_int(&s) {
                let on_circle = poly::complex_roots(&poly::squarefree_part(&ints))
                    .iter()
                    .all(|z| (z.norm() - 1.0).abs() < 1e-6);
                assert_eq!(on_circle, v.supersingular);
            } else {
                assert!(!v.supersingular);
            }
        }
    }

    #[test]
    fn base_change_never_flips_the_verdict() {
        let instances = [
            CurveInstance::new(CurveFamily::ArtinSchreier { qas: 2, n: 3 }, 2, 1).unwrap(),
            CurveInstance::new(CurveFamily::ThreePointCover { n: 3, a: 1, b: 1 }, 7, 1).unwrap(),
            CurveInstance::new(CurveFamily::FermatCurve { n: 4 }, 3, 1).unwrap(),
        ];
        for c in instances {
            let l = l_polynomial(&c).unwrap();
            let verdict = is_supersingular(&l).unwrap().supersingular;
            for m in [2u32, 3] {
                let lm = l.base_change(m);
                assert_eq!(
                    is_supersingular(&lm).unwrap().supersingular,
                    verdict,
                    "{c:?} m={m}"
                );
            }
        }
    }
}
