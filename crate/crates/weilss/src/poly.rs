//! Dense polynomial helpers over BigInt / BigRational, little-endian
//! coefficient order. Internal plumbing shared by the cyclotomic, zeta and
//! weil modules.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

pub fn deg(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(out)
}

/// Division with remainder by a monic divisor.
pub fn div_rem_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dd = deg(den).expect("division by zero polynomial");
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let nd = match deg(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![], trim(rem)),
    };
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for shift in (0..=nd - dd).rev() {
        let c = rem[shift + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[shift] = c.clone();
        for i in 0..=dd {
            if !den[i].is_zero() {
                let sub = &c * &den[i];
                rem[shift + i] -= sub;
            }
        }
    }
    (trim(quot), trim(rem))
}

/// Exact division; returns None when the remainder is nonzero.
pub fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let (q, r) = div_rem_monic(num, den);
    r.is_empty().then_some(q)
}

pub fn bigint_to_f64(c: &BigInt) -> f64 {
    // num-bigint's ToPrimitive saturates; fine for the magnitudes we test
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() { f64::MIN } else { f64::MAX })
}

/// All complex roots of a nonconstant integer polynomial by Durand–Kerner
/// iteration. Degrees here stay below ~100, where this is plenty accurate.
pub fn complex_roots(v: &[BigInt]) -> Vec<Complex64> {
    let d = deg(v).expect("zero polynomial");
    if d == 0 {
        return vec![];
    }
    let lead = bigint_to_f64(&v[d]);
    let coeffs: Vec<Complex64> = v[..=d]
        .iter()
        .map(|c| Complex64::new(bigint_to_f64(c) / lead, 0.0))
        .collect();
    let evaluate = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // spread the starting points on a non-real circle
    let mut roots: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(1.0 + 0.3 * i as f64 / d as f64, 0.7 + 2.6 * i as f64))
        .collect();
    for _ in 0..200 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = evaluate(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-13 {
            break;
        }
    }
    roots
}

/// Square-free part of an integer polynomial: same root set, all roots
/// simple. Multiple roots are ill-conditioned for floating-point root
/// finding, so numeric checks go through this first.
pub fn squarefree_part(v: &[BigInt]) -> Vec<BigInt> {
    let d = match deg(v) {
        Some(d) if d >= 1 => d,
        _ => return v.to_vec(),
    };
    let f = rat_from_int(&v[..=d]);
    let fprime: Vec<BigRational> = (1..=d)
        .map(|i| &f[i] * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let g = rat_gcd_monic(&f, &fprime);
    if g.len() <= 1 {
        return v[..=d].to_vec();
    }
    let (q, r) = rat_div_rem(&f, &g);
    debug_assert!(r.is_empty(), "gcd must divide");
    clear_denominators(&q)
}

fn rat_gcd_monic(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = rat_trim(a.to_vec());
    let mut b = rat_trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = rat_div_rem(&a, &b);
        a = b;
        b = r;
    }
    // normalize to monic
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c /= lead.clone();
        }
    }
    a
}

fn rat_div_rem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = rat_trim(den.to_vec());
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut rem = rat_trim(num.to_vec());
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let nd = rem.len() - 1;
        let c = &rem[nd] / &lead;
        quot[nd - dd] = c.clone();
        for i in 0..=dd {
            let sub = &c * &den[i];
            rem[nd - dd + i] -= sub;
        }
        rem = rat_trim(rem);
    }
    (rat_trim(quot), rem)
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut scale = BigInt::one();
    for c in v {
        scale = scale.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(scale.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.iter().map(|c| c / &content).collect()
}

// ---- rational-coefficient helpers ----

pub fn rat_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

pub fn rat_from_int(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Every coefficient integral? Then return the integer polynomial.
#[cfg_attr(not(test), allow(dead_code))]
pub fn rat_to_int(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}
