//! Exact arithmetic in the cyclotomic integer rings Z[ζ_m].
//!
//! Elements are kept in canonical form: the remainder modulo the m-th
//! cyclotomic polynomial Φ_m, so equality is coefficient equality. Conductor
//! changes are always explicit through [`embed`]; mixed-conductor operations
//! are an error, never a silent coercion.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly;

/// The m-th cyclotomic polynomial Φ_m, monic of degree φ(m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CycloPoly {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Coefficients, constant first, length φ(m) + 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut phi = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut pk = 1;
            while m % d == 0 {
                m /= d;
                pk *= d;
            }
            phi *= pk - pk / d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        phi *= m - 1;
    }
    phi
}

fn cyclo_cache() -> &'static Mutex<HashMap<u64, Arc<CycloPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_m, computed by exact division of T^m - 1 by the product of all Φ_d for
/// proper divisors d of m. Results are memoized process-wide.
///
/// ```
/// use weilss::cyclotomic::cyclotomic_poly;
///
/// let phi12 = cyclotomic_poly(12);
/// let coeffs: Vec<i64> = phi12.coeffs().iter().map(|c| c.try_into().unwrap()).collect();
/// assert_eq!(coeffs, [1, 0, -1, 0, 1]); // T^4 - T^2 + 1
/// ```
pub fn cyclotomic_poly(m: u64) -> Arc<CycloPoly> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(hit) = cyclo_cache().lock().unwrap().get(&m) {
        return hit.clone();
    }
    let value = compute_cyclotomic(m);
    let mut cache = cyclo_cache().lock().unwrap();
    cache.entry(m).or_insert_with(|| Arc::new(value)).clone()
}

fn compute_cyclotomic(m: u64) -> CycloPoly {
    // T^m - 1
    let mut xm1 = vec![BigInt::zero(); m as usize + 1];
    xm1[0] = BigInt::from(-1);
    xm1[m as usize] = BigInt::one();
    let mut denom = vec![BigInt::one()];
    for d in 1..m {
        if m % d == 0 {
            denom = poly::mul(&denom, &cyclotomic_poly(d).coeffs);
        }
    }
    let coeffs = poly::div_exact_monic(&xm1, &denom)
        .expect("cyclotomic recursion must divide exactly");
    debug_assert_eq!(coeffs.len() as u64 - 1, euler_phi(m));
    CycloPoly { m, coeffs }
}

/// Exact element of Z[ζ_m] in canonical form mod Φ_m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    /// The zero element at conductor m.
    pub fn zero(m: u64) -> Self {
        CyclotomicInt {
            m,
            coeffs: vec![BigInt::zero(); euler_phi(m) as usize],
        }
    }

    /// A rational integer viewed at conductor m.
    pub fn from_integer(m: u64, value: BigInt) -> Self {
        let mut out = Self::zero(m);
        if euler_phi(m) >= 1 {
            out.coeffs[0] = value;
        }
        out
    }

    /// Reduce an arbitrary coefficient vector in powers of ζ_m (any length)
    /// to canonical form.
    pub fn from_zeta_poly(m: u64, raw: &[BigInt]) -> Self {
        // fold exponents mod m first, then reduce mod Φ_m
        let mut folded = vec![BigInt::zero(); m as usize];
        for (e, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                folded[e % m as usize] += c;
            }
        }
        let phi = cyclotomic_poly(m);
        let (_, rem) = poly::div_rem_monic(&folded, phi.coeffs());
        let mut coeffs = rem;
        coeffs.resize(phi.degree(), BigInt::zero());
        CyclotomicInt { m, coeffs }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Canonical coefficients, length φ(m).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(n) iff the element is the rational integer n.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numeric embedding at the primitive root e^{2πi/m}.
    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.m as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(0.0);
        }
        acc
    }
}

/// ζ_m^e in canonical form (e is reduced mod m).
pub fn zeta_power(m: u64, e: i64) -> CyclotomicInt {
    let e = e.rem_euclid(m as i64) as usize;
    let mut raw = vec![BigInt::zero(); e + 1];
    raw[e] = BigInt::one();
    CyclotomicInt::from_zeta_poly(m, &raw)
}

pub fn add(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt> {
    check_conductor(a, b)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x + y)
        .collect();
    Ok(CyclotomicInt { m: a.m, coeffs })
}

pub fn sub(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt> {
    add(a, &neg(b))
}

pub fn neg(a: &CyclotomicInt) -> CyclotomicInt {
    CyclotomicInt {
        m: a.m,
        coeffs: a.coeffs.iter().map(|c| -c).collect(),
    }
}

pub fn mul(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt> {
    check_conductor(a, b)?;
    let prod = poly::mul(&a.coeffs, &b.coeffs);
    Ok(CyclotomicInt::from_zeta_poly(a.m, &prod))
}

pub fn scalar_mul(a: &CyclotomicInt, s: &BigInt) -> CyclotomicInt {
    CyclotomicInt {
        m: a.m,
        coeffs: a.coeffs.iter().map(|c| c * s).collect(),
    }
}

fn check_conductor(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<()> {
    if a.m != b.m {
        return Err(Error::ConductorMismatch(a.m, b.m));
    }
    Ok(())
}

/// Image of a under ζ_m -> ζ_{m'}^{m'/m}; m must divide m'.
pub fn embed(a: &CyclotomicInt, m_new: u64) -> Result<CyclotomicInt> {
    if m_new % a.m != 0 {
        return Err(Error::NotAMultiple(m_new, a.m));
    }
    let scale = (m_new / a.m) as usize;
    let mut raw = vec![BigInt::zero(); (a.coeffs.len() - 1) * scale + 1];
    for (i, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            raw[i * scale] = c.clone();
        }
    }
    Ok(CyclotomicInt::from_zeta_poly(m_new, &raw))
}

/// Ring automorphism ζ_m -> ζ_m^u for u a unit mod m.
pub fn galois_conjugate(a: &CyclotomicInt, u: u64) -> Result<CyclotomicInt> {
    let u = u % a.m.max(1);
    if gcd(u, a.m) != 1 {
        return Err(Error::NotAUnit(u, a.m));
    }
    let mut raw = vec![BigInt::zero(); a.m as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        if !c.is_zero() {
            raw[(i as u64 * u % a.m) as usize] += c;
        }
    }
    Ok(CyclotomicInt::from_zeta_poly(a.m, &raw))
}

/// Complex conjugation, the Galois automorphism ζ -> ζ^{-1}.
pub fn conj(a: &CyclotomicInt) -> CyclotomicInt {
    if a.m == 1 {
        return a.clone();
    }
    galois_conjugate(a, a.m - 1).expect("-1 is always a unit")
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(m: u64, e: i64) -> CyclotomicInt {
        zeta_power(m, e)
    }

    #[test]
    fn small_cyclotomic_polys() {
        let as_i64 = |m: u64| -> Vec<i64> {
            cyclotomic_poly(m)
                .coeffs()
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
    }

    #[test]
    fn product_over_divisors_is_x_m_minus_1() {
        for m in 1..=200u64 {
            let mut prod = vec![BigInt::one()];
            for d in 1..=m {
                if m % d == 0 {
                    prod = poly::mul(&prod, cyclotomic_poly(d).coeffs());
                }
            }
            let mut expect = vec![BigInt::zero(); m as usize + 1];
            expect[0] = BigInt::from(-1);
            expect[m as usize] = BigInt::one();
            assert_eq!(prod, expect, "m={m}");
        }
    }

    #[test]
    fn zeta_power_examples() {
        assert_eq!(zp(5, 0), CyclotomicInt::from_integer(5, BigInt::one()));
        // zeta_3^2 = -1 - zeta_3
        assert_eq!(
            zp(3, 2).coeffs(),
            &[BigInt::from(-1), BigInt::from(-1)][..]
        );
        // zeta_4^3 = -zeta_4
        assert_eq!(zp(4, 3).coeffs(), &[BigInt::zero(), BigInt::from(-1)][..]);
    }

    #[test]
    fn ring_op_examples() {
        // zeta_3 + zeta_3^2 = -1
        let s = add(&zp(3, 1), &zp(3, 2)).unwrap();
        assert_eq!(s.as_integer().unwrap(), BigInt::from(-1));
        // i * i = -1
        let sq = mul(&zp(4, 1), &zp(4, 1)).unwrap();
        assert_eq!(sq.as_integer().unwrap(), BigInt::from(-1));
        // (1 + zeta_5) * 0 = 0
        let one_plus = add(&zp(5, 0), &zp(5, 1)).unwrap();
        assert!(mul(&one_plus, &CyclotomicInt::zero(5)).unwrap().is_zero());
        assert_eq!(
            add(&zp(3, 1), &zp(4, 1)),
            Err(Error::ConductorMismatch(3, 4))
        );
    }

    #[test]
    fn zeta_power_has_order_dividing_m() {
        for m in 1..=30u64 {
            for e in 0..m {
                let z = zp(m, e as i64);
                let mut acc = CyclotomicInt::from_integer(m, BigInt::one());
                for _ in 0..m {
                    acc = mul(&acc, &z).unwrap();
                }
                assert_eq!(acc.as_integer().unwrap(), BigInt::one(), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn embed_examples() {
        // -1 in Z[zeta_2] -> -1 in Z[zeta_4]
        let minus1 = zp(2, 1);
        assert_eq!(
            embed(&minus1, 4).unwrap().as_integer().unwrap(),
            BigInt::from(-1)
        );
        // zeta_3 -> zeta_6^2, canonically zeta_6 - 1 mod Phi_6 = T^2 - T + 1
        let got = embed(&zp(3, 1), 6).unwrap();
        assert_eq!(got, zeta_power(6, 2));
        assert_eq!(got.coeffs(), &[BigInt::from(-1), BigInt::one()][..]);
        // zeta_2 -> zeta_6^3 = -1
        assert_eq!(
            embed(&zp(2, 1), 6).unwrap().as_integer().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(embed(&zp(4, 1), 6), Err(Error::NotAMultiple(6, 4)));
    }

    #[test]
    fn embed_is_ring_hom() {
        for (a, b) in [(zp(3, 1), zp(3, 2)), (zp(6, 5), zp(6, 1))] {
            let m_new = 12;
            let lhs = embed(&mul(&a, &b).unwrap(), m_new).unwrap();
            let rhs = mul(&embed(&a, m_new).unwrap(), &embed(&b, m_new).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn galois_conjugation() {
        let a = zp(3, 1);
        assert_eq!(galois_conjugate(&a, 1).unwrap(), a);
        assert_eq!(galois_conjugate(&a, 2).unwrap(), zp(3, 2));
        assert_eq!(galois_conjugate(&a, 0), Err(Error::NotAUnit(0, 3)));
        // composition equals multiplied units
        let x = add(&zp(12, 5), &scalar_mul(&zp(12, 2), &BigInt::from(3))).unwrap();
        let c5 = galois_conjugate(&galois_conjugate(&x, 5).unwrap(), 7).unwrap();
        let c35 = galois_conjugate(&x, 35 % 12).unwrap();
        assert_eq!(c5, c35);
        // conjugation preserves products
        let y = zp(12, 7);
        let lhs = galois_conjugate(&mul(&x, &y).unwrap(), 5).unwrap();
        let rhs = mul(
            &galois_conjugate(&x, 5).unwrap(),
            &galois_conjugate(&y, 5).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_embedding_is_multiplicative() {
        let cases = [
            (add(&zp(20, 3), &zp(20, 17)).unwrap(), zp(20, 9)),
            (sub(&zp(60, 1), &zp(60, 31)).unwrap(), add(&zp(60, 2), &zp(60, 59)).unwrap()),
        ];
        for (a, b) in cases {
            let lhs = mul(&a, &b).unwrap().to_complex();
            let rhs = a.to_complex() * b.to_complex();
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
