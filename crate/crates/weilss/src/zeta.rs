//! Ground truth: point counting for the supported curve families over
//! extension fields, and L-polynomial reconstruction from the counts.
//!
//! [`count_points`] enumerates x (or y) and resolves fibers by closed form,
//! which drops the cost from q^2 to q per field; [`count_points_charsum`]
//! recounts the same fibers through character sums and must agree exactly —
//! that contract is enforced wherever both run. The L-polynomial comes from
//! N_1..N_g via Newton's identities plus the functional equation, and is
//! validated by expanding the zeta series back into point counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::gcd;
use crate::error::{Error, Result};
use crate::exp_sums::ZetaAccumulator;
use crate::finite_field::{is_prime, shared_field, FieldCtx};
use crate::poly;

/// Cap on q^g for L-polynomial reconstruction (needs counts N_1..N_g).
pub const DEFAULT_POINTS_CAP: u64 = 10_000_000;

/// One of the supported curve families, without its base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CurveFamily {
    /// y^qas - y = x^n, qas a power of the base characteristic.
    ArtinSchreier { qas: u64, n: u64 },
    /// x^n + y^n + z^n = 0 in the projective plane.
    #[serde(rename = "fermat")]
    FermatCurve { n: u64 },
    /// y^n = x^a (1-x)^b, the cyclic cover of the line ramified over 0, 1
    /// and infinity.
    #[serde(rename = "three-point")]
    ThreePointCover { n: u64, a: u64, b: u64 },
}

/// A curve family over a concrete base field F_q, q = p^r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInstance {
    pub family: CurveFamily,
    pub p: u64,
    pub r: u32,
}

impl CurveInstance {
    pub fn new(family: CurveFamily, p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(r >= 1);
        if p.checked_pow(r).is_none() {
            return Err(Error::BadParameters(format!("q = {p}^{r} overflows")));
        }
        let n = match family {
            CurveFamily::ArtinSchreier { n, .. }
            | CurveFamily::FermatCurve { n }
            | CurveFamily::ThreePointCover { n, .. } => n,
        };
        if n == 0 || gcd(n, p) != 1 {
            return Err(Error::BadParameters(format!(
                "n = {n} must be positive and coprime to p = {p}"
            )));
        }
        match family {
            CurveFamily::ArtinSchreier { qas, .. } => {
                let mut m = qas;
                while m > 1 && m % p == 0 {
                    m /= p;
                }
                if m != 1 || qas < p {
                    return Err(Error::BadParameters(format!(
                        "qas = {qas} must be a positive power of p = {p}"
                    )));
                }
                if r != 1 {
                    return Err(Error::BadParameters(
                        "Artin-Schreier instances are defined over the prime field".into(),
                    ));
                }
            }
            CurveFamily::FermatCurve { .. } => {}
            CurveFamily::ThreePointCover { n, a, b } => {
                if a == 0 || b == 0 {
                    return Err(Error::BadParameters(
                        "three-point cover needs positive exponents".into(),
                    ));
                }
                // exponents divisible by n merely drop a branch point and the
                // formulas stay valid; reducibility is the real degeneracy
                if gcd(gcd(a, b), n) != 1 {
                    return Err(Error::BadParameters(
                        "three-point cover with gcd(a, b, n) > 1 is reducible".into(),
                    ));
                }
            }
        }
        Ok(CurveInstance { family, p, r })
    }

    /// Base field size q = p^r.
    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// Genus of the smooth projective model.
    pub fn genus(&self) -> u64 {
        match self.family {
            CurveFamily::ArtinSchreier { qas, n } => (qas - 1) * (n - 1) / 2,
            CurveFamily::FermatCurve { n } => {
                if n < 2 {
                    0
                } else {
                    (n - 1) * (n - 2) / 2
                }
            }
            CurveFamily::ThreePointCover { n, a, b } => {
                let branch = gcd(a, n) + gcd(b, n) + gcd(a + b, n);
                debug_assert!((n + 2 - branch) % 2 == 0);
                (n + 2 - branch) / 2
            }
        }
    }

    /// Cache key prefix, extended with "/k{K}" for individual counts.
    pub fn cache_key(&self, k: u32) -> String {
        let params = match self.family {
            CurveFamily::ArtinSchreier { qas, n } => format!("artin-schreier/qas{qas}-n{n}"),
            CurveFamily::FermatCurve { n } => format!("fermat/n{n}"),
            CurveFamily::ThreePointCover { n, a, b } => format!("three-point/n{n}-a{a}-b{b}"),
        };
        format!("{params}/p{}-r{}/k{k}", self.p, self.r)
    }
}

/// Projective point counts N_1, ..., N_B of the smooth model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCounts {
    pub counts: Vec<u64>,
}

impl PointCounts {
    /// Weil bound |N_k - q^k - 1| <= 2g q^{k/2}, checked exactly as
    /// (N_k - q^k - 1)^2 <= 4 g^2 q^k.
    pub fn weil_bound_holds(&self, q: u64, genus: u64) -> bool {
        self.counts.iter().enumerate().all(|(i, &nk)| {
            let k = i as u32 + 1;
            let qk = BigInt::from(q).pow(k);
            let dev = BigInt::from(nk) - &qk - 1;
            &dev * &dev <= BigInt::from(4 * genus * genus) * qk
        })
    }
}

/// Number of points of the smooth projective model over F_{q^k}, by
/// exhaustive enumeration with closed-form fiber sizes.
pub fn count_points(curve: &CurveInstance, k: u32) -> Result<u64> {
    let ctx = shared_field(curve.p, curve.r * k)?;
    Ok(match curve.family {
        CurveFamily::ArtinSchreier { qas, n } => count_artin_schreier(&ctx, qas, n),
        CurveFamily::FermatCurve { n } => count_fermat(&ctx, n),
        CurveFamily::ThreePointCover { n, a, b } => count_three_point(&ctx, n, a, b),
    })
}

/// Artin-Schreier, enumerated from the y side: the smooth model has exactly
/// one point at infinity, and the affine count is
/// Σ_y #\{x : x^n = y^qas - y\}.
fn count_artin_schreier(ctx: &FieldCtx, qas: u64, n: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let n0 = gcd(n, q1);
    let (power, dlog) = ctx.power_dlog_tables();
    let affine: u64 = (0..q)
        .into_par_iter()
        .map(|y_idx| {
            let w_idx = if y_idx == 0 {
                0
            } else {
                let t = dlog[y_idx as usize] as u64;
                let tq = (t as u128 * (qas % q1.max(1)) as u128 % q1 as u128) as u64;
                ctx.index_sub(power[tq as usize] as u64, y_idx)
            };
            if w_idx == 0 {
                1 // x = 0 is the only n-th root of 0
            } else if dlog[w_idx as usize] as u64 % n0 == 0 {
                n0
            } else {
                0
            }
        })
        .sum();
    affine + 1
}

/// Fermat curve x^n + y^n + z^n = 0: affine chart z = 1 fiber-by-fiber, plus
/// the line z = 0 which meets the curve in #\{x : x^n = -1\} points.
fn count_fermat(ctx: &FieldCtx, n: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let n0 = gcd(n, q1);
    let (power, dlog) = ctx.power_dlog_tables();
    let minus_one = ctx.index_of(&ctx.neg(&ctx.one()));
    let nth_root_count = |c_idx: u64| -> u64 {
        if c_idx == 0 {
            1
        } else if dlog[c_idx as usize] as u64 % n0 == 0 {
            n0
        } else {
            0
        }
    };
    // x = 0 contributes the fiber over c = -1 - 0 = -1
    let mut total = nth_root_count(minus_one);
    total += (0..q1)
        .into_par_iter()
        .map(|t| {
            let xn = power[(t as u128 * (n % q1) as u128 % q1 as u128) as usize] as u64;
            nth_root_count(ctx.index_sub(minus_one, xn))
        })
        .sum::<u64>();
    // points at infinity: x^n = -1 with y normalized to 1
    total + nth_root_count(minus_one)
}

/// Three-point cover y^n = x^a (1-x)^b: unramified fibers via dlog
/// divisibility, branch fibers from the standard smooth-model data.
fn count_three_point(ctx: &FieldCtx, n: u64, a: u64, b: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let n0 = gcd(n, q1);
    let (power, dlog) = ctx.power_dlog_tables();
    let one = ctx.index_of(&ctx.one());
    // x ranges over F_q \ {0, 1}; x = g^t with t = 0 giving x = 1 is skipped
    let affine: u64 = (1..q1)
        .into_par_iter()
        .map(|t| {
            let u_idx = ctx.index_sub(one, power[t as usize] as u64);
            let tu = dlog[u_idx as usize] as u64;
            let tc = (a as u128 * t as u128 + b as u128 * tu as u128) % q1 as u128;
            if tc as u64 % n0 == 0 {
                n0
            } else {
                0
            }
        })
        .sum();
    // rational points above the three branch points; above x = 0 and x = 1
    // the unit value is 1, above infinity it is (-1)^b
    let d0 = gcd(gcd(a, n), q1);
    let d1 = gcd(gcd(b, n), q1);
    let dinf = gcd(gcd(a + b, n), q1);
    let minus_one_dlog = if q % 2 == 0 { 0 } else { q1 / 2 };
    let u_inf_dlog = b % 2 * minus_one_dlog;
    let above_inf = if u_inf_dlog % dinf == 0 { dinf } else { 0 };
    affine + d0 + d1 + above_inf
}

/// Same totals as [`count_points`], but every fiber is recounted through an
/// exact character sum (additive characters for Artin-Schreier fibers,
/// multiplicative for n-th power fibers). Must agree with the enumeration —
/// the harness enforces this wherever both run.
pub fn count_points_charsum(curve: &CurveInstance, k: u32) -> Result<u64> {
    let ctx = shared_field(curve.p, curve.r * k)?;
    let total = match curve.family {
        CurveFamily::ArtinSchreier { qas, n } => charsum_artin_schreier(&ctx, curve.p, qas, n),
        CurveFamily::FermatCurve { n } => charsum_fermat(&ctx, n),
        CurveFamily::ThreePointCover { n, a, b } => charsum_three_point(&ctx, n, a, b),
    };
    Ok(total)
}

/// Reduce a ζ-exponent histogram that must collapse to a rational integer.
fn integral_sum(acc: ZetaAccumulator) -> u64 {
    let value = acc.finish();
    let int = value
        .as_integer()
        .expect("character sum over a full fiber decomposition must be rational");
    let (sign, digits) = int.to_u64_digits();
    assert!(sign != num_bigint::Sign::Minus && digits.len() <= 1);
    digits.first().copied().unwrap_or(0)
}

fn charsum_artin_schreier(ctx: &FieldCtx, p: u64, qas: u64, n: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let k = ctx.k();
    let j = qas.ilog(p);
    let d = gcd(j as u64, k as u64) as u32;
    let pd = p.pow(d);
    let (power, dlog) = ctx.power_dlog_tables();

    // dlogs of the nonzero elements of the subfield F_{p^d}
    let step = q1 / (pd - 1).max(1);
    let sub_dlogs: Vec<u64> = (0..pd.saturating_sub(1)).map(|u| u * step).collect();

    // fiber over c: Σ_{b in F_{p^d}} ψ_b(c), accumulated over all x at once
    let mut acc = ZetaAccumulator::new(p);
    let mut push_fiber = |c_idx: u64| {
        acc.push(0); // b = 0
        if c_idx == 0 {
            for _ in &sub_dlogs {
                acc.push(0);
            }
            return;
        }
        let tc = dlog[c_idx as usize] as u64;
        if k == 1 {
            for &tb in &sub_dlogs {
                let prod = power[((tb + tc) % q1) as usize] as u64;
                acc.push(prod % p);
            }
        } else {
            let trace = ctx.trace_table();
            for &tb in &sub_dlogs {
                let prod = power[((tb + tc) % q1) as usize];
                acc.push(trace[prod as usize] as u64);
            }
        }
    };

    push_fiber(0); // x = 0 => c = 0
    for t in 0..q1 {
        let tc = t as u128 * (n % q1) as u128 % q1 as u128;
        push_fiber(power[tc as usize] as u64);
    }
    integral_sum(acc) + 1
}

fn charsum_fermat(ctx: &FieldCtx, n: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let n0 = gcd(n, q1);
    let (power, dlog) = ctx.power_dlog_tables();
    let minus_one = ctx.index_of(&ctx.neg(&ctx.one()));

    let mut acc = ZetaAccumulator::new(n0);
    let mut push_fiber = |c_idx: u64| {
        if c_idx == 0 {
            acc.push(0); // y = 0 only
            return;
        }
        let tc = dlog[c_idx as usize] as u64;
        for i in 0..n0 {
            acc.push(i * (tc % n0) % n0);
        }
    };
    push_fiber(minus_one); // x = 0
    for t in 0..q1 {
        let xn = power[(t as u128 * (n % q1) as u128 % q1 as u128) as usize] as u64;
        push_fiber(ctx.index_sub(minus_one, xn));
    }
    push_fiber(minus_one); // line z = 0
    integral_sum(acc)
}

fn charsum_three_point(ctx: &FieldCtx, n: u64, a: u64, b: u64) -> u64 {
    let q = ctx.order();
    let q1 = q - 1;
    let n0 = gcd(n, q1);
    let (power, dlog) = ctx.power_dlog_tables();
    let one = ctx.index_of(&ctx.one());
    let minus_one_dlog = if q % 2 == 0 { 0 } else { q1 / 2 };

    let mut acc = ZetaAccumulator::new(n0.max(1));
    for t in 1..q1 {
        let u_idx = ctx.index_sub(one, power[t as usize] as u64);
        let tu = dlog[u_idx as usize] as u64;
        let tc = ((a as u128 * t as u128 + b as u128 * tu as u128) % q1 as u128) as u64;
        for i in 0..n0 {
            acc.push(i * (tc % n0) % n0);
        }
    }
    let mut total = integral_sum(acc);
    // branch fibers as character sums Σ_{η^d = 1} η(u0)
    for (d, u0_dlog) in [
        (gcd(a, n), 0),
        (gcd(b, n), 0),
        (gcd(a + b, n), b % 2 * minus_one_dlog),
    ] {
        let d0 = gcd(d, q1);
        let mut acc = ZetaAccumulator::new(d0);
        for i in 0..d0 {
            acc.push(i * (u0_dlog % d0) % d0);
        }
        total += integral_sum(acc);
    }
    total
}

/// N_1, ..., N_upto by repeated [`count_points`].
pub fn point_counts(curve: &CurveInstance, upto: u32) -> Result<PointCounts> {
    let counts = (1..=upto)
        .map(|k| count_points(curve, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointCounts { counts })
}

/// Integer-coefficient numerator of the zeta function, carrier of the
/// Frobenius eigenvalues. a_0 = 1, degree 2·genus, weight 1 for curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    coeffs: Vec<BigInt>,
    q: u64,
    weight: u32,
}

impl LPolynomial {
    pub fn new(coeffs: Vec<BigInt>, q: u64) -> Self {
        assert!(!coeffs.is_empty() && coeffs[0].is_one(), "a_0 must be 1");
        assert!(coeffs.len() % 2 == 1, "degree must be even");
        LPolynomial {
            coeffs,
            q,
            weight: 1,
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn genus(&self) -> u64 {
        (self.degree() / 2) as u64
    }

    /// a_{2g-i} = q^{g-i} a_i for 0 <= i <= g.
    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus() as usize;
        (0..=g).all(|i| {
            self.coeffs[2 * g - i] == BigInt::from(self.q).pow((g - i) as u32) * &self.coeffs[i]
        })
    }

    /// Power sums Σ_i α_i^k of the reciprocal roots, k = 1..=upto, by
    /// Newton's identities run forward from the coefficients.
    pub fn power_sums(&self, upto: u32) -> Vec<BigInt> {
        let deg = self.degree();
        let e: Vec<BigInt> = (0..=deg)
            .map(|i| if i % 2 == 0 { self.coeffs[i].clone() } else { -&self.coeffs[i] })
            .collect();
        // p_k = Σ_{i=1}^{min(k-1, deg)} (-1)^{i-1} e_i p_{k-i}  [+ (-1)^{k-1} k e_k if k <= deg]
        let mut p: Vec<BigInt> = vec![BigInt::zero(); upto as usize + 1];
        for k in 1..=upto as usize {
            let mut acc = BigInt::zero();
            for i in 1..=(k - 1).min(deg) {
                let term = &e[i] * &p[k - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if k <= deg {
                let ke = BigInt::from(k as u64) * &e[k];
                if k % 2 == 1 {
                    acc += ke;
                } else {
                    acc -= ke;
                }
            }
            p[k] = acc;
        }
        p.remove(0);
        p
    }

    /// Expected point count over F_{q^k}: q^k + 1 - p_k.
    pub fn expected_count(&self, k: u32) -> BigInt {
        let pk = self.power_sums(k).pop().unwrap();
        BigInt::from(self.q).pow(k) + 1 - pk
    }

    /// L-polynomial of the same curve after base change to F_{q^m}: the
    /// reciprocal roots are the m-th powers of the originals.
    pub fn base_change(&self, m: u32) -> LPolynomial {
        let deg = self.degree();
        if deg == 0 {
            return LPolynomial::new(vec![BigInt::one()], self.q.pow(m));
        }
        let big = self.power_sums(m * deg as u32);
        let p_new: Vec<BigInt> = (1..=deg)
            .map(|j| big[m as usize * j - 1].clone())
            .collect();
        let coeffs = coeffs_from_power_sums(&p_new, deg);
        LPolynomial::new(coeffs, self.q.pow(m))
    }

    /// Reciprocal roots (the Frobenius eigenvalues) as complex numbers.
    /// Multiplicities are dropped: the roots come from the square-free part,
    /// where double precision can actually locate them.
    pub fn eigenvalues_complex(&self) -> Vec<num_complex::Complex64> {
        if self.degree() == 0 {
            return vec![];
        }
        let reversed: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        poly::complex_roots(&poly::squarefree_part(&reversed))
    }

    /// All eigenvalues on the |α| = sqrt(q) circle, numerically.
    pub fn archimedean_weil_holds(&self, tol: f64) -> bool {
        let target = (self.q as f64).sqrt();
        self.eigenvalues_complex()
            .iter()
            .all(|z| (z.norm() - target).abs() < tol * target)
    }
}

/// Elementary-symmetric recovery: given p_1..p_deg, produce the coefficient
/// vector of ∏ (1 - α_i T). Non-integrality is a hard error — it signals a
/// genus or infinity-count bug upstream.
fn coeffs_from_power_sums(p: &[BigInt], deg: usize) -> Vec<BigInt> {
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=deg {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, rem) = num_integer::Integer::div_rem(&acc, &BigInt::from(k as u64));
        assert!(
            rem.is_zero(),
            "Newton's identities produced a non-integer e_{k}: counts are inconsistent"
        );
        e.push(q);
    }
    (0..=deg)
        .map(|i| if i % 2 == 0 { e[i].clone() } else { -&e[i] })
        .collect()
}

/// Reconstruct the L-polynomial from counts N_1..N_g plus the functional
/// equation. `counts` must hold at least genus entries.
pub fn l_polynomial_from_counts(q: u64, genus: u64, counts: &[u64]) -> LPolynomial {
    let g = genus as usize;
    assert!(counts.len() >= g, "need N_1..N_g");
    if g == 0 {
        return LPolynomial::new(vec![BigInt::one()], q);
    }
    // power sums of the reciprocal roots: p_k = q^k + 1 - N_k
    let p: Vec<BigInt> = (1..=g)
        .map(|k| BigInt::from(q).pow(k as u32) + 1 - BigInt::from(counts[k - 1]))
        .collect();
    // first g elementary symmetric functions from Newton's identities
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=g {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = num_integer::Integer::div_rem(&acc, &BigInt::from(k as u64));
        assert!(
            rem.is_zero(),
            "Newton's identities produced a non-integer e_{k}: counts are inconsistent"
        );
        e.push(quot);
    }
    let mut coeffs: Vec<BigInt> = (0..=g)
        .map(|i| if i % 2 == 0 { e[i].clone() } else { -&e[i] })
        .collect();
    coeffs.resize(2 * g + 1, BigInt::zero());
    for i in 0..g {
        coeffs[2 * g - i] = BigInt::from(q).pow((g - i) as u32) * &coeffs[i];
    }
    LPolynomial::new(coeffs, q)
}

/// Count, reconstruct, and validate the L-polynomial of a curve instance.
pub fn l_polynomial(curve: &CurveInstance) -> Result<LPolynomial> {
    l_polynomial_with_cap(curve, DEFAULT_POINTS_CAP)
}

/// [`l_polynomial`] with an explicit cap on q^genus.
pub fn l_polynomial_with_cap(curve: &CurveInstance, points_cap: u64) -> Result<LPolynomial> {
    l_polynomial_with_counter(curve, points_cap, &mut |c, k| count_points(c, k))
}

/// L-polynomial computation with a pluggable counter, so callers can route
/// individual counts through a cache.
pub fn l_polynomial_with_counter(
    curve: &CurveInstance,
    points_cap: u64,
    count: &mut dyn FnMut(&CurveInstance, u32) -> Result<u64>,
) -> Result<LPolynomial> {
    let g = curve.genus();
    let q = curve.q();
    if g > 0 {
        let mut qg: u64 = 1;
        for _ in 0..g {
            qg = qg.checked_mul(q).filter(|&v| v <= points_cap).ok_or(
                Error::FieldTooLarge {
                    p: q,
                    k: g as u32,
                    cap: points_cap,
                },
            )?;
        }
    }
    let mut counts = Vec::with_capacity(g as usize);
    for k in 1..=g as u32 {
        counts.push(count(curve, k)?);
    }
    let lpoly = l_polynomial_from_counts(q, g, &counts);
    debug_assert!(lpoly.functional_equation_holds());

    // round-trip: the zeta expansion must reproduce every count we can
    // afford to recompute, including fields beyond N_g when they fit the cap
    let mut k = 1u32;
    let mut qk: u128 = 1;
    while k <= 2 * g as u32 {
        qk = qk.saturating_mul(q as u128);
        if qk > points_cap as u128 {
            break;
        }
        let observed = if k <= g as u32 {
            counts[k as usize - 1]
        } else {
            count(curve, k)?
        };
        let expected = lpoly.expected_count(k);
        assert_eq!(
            expected,
            BigInt::from(observed),
            "zeta round-trip failed at k = {k} for {curve:?}"
        );
        k += 1;
    }
    Ok(lpoly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(family: CurveFamily, p: u64, r: u32) -> CurveInstance {
        CurveInstance::new(family, p, r).unwrap()
    }

    #[test]
    fn genus_formulas() {
        assert_eq!(curve(CurveFamily::ArtinSchreier { qas: 2, n: 3 }, 2, 1).genus(), 1);
        assert_eq!(curve(CurveFamily::FermatCurve { n: 4 }, 3, 1).genus(), 3);
        assert_eq!(curve(CurveFamily::FermatCurve { n: 1 }, 5, 1).genus(), 0);
        assert_eq!(
            curve(CurveFamily::ThreePointCover { n: 5, a: 1, b: 1 }, 11, 1).genus(),
            2
        );
        assert_eq!(
            curve(CurveFamily::ThreePointCover { n: 4, a: 1, b: 1 }, 5, 1).genus(),
            1
        );
    }

    #[test]
    fn parameter_validation() {
        assert!(CurveInstance::new(CurveFamily::ArtinSchreier { qas: 2, n: 4 }, 2, 1).is_err());
        assert!(CurveInstance::new(CurveFamily::ArtinSchreier { qas: 6, n: 5 }, 2, 1).is_err());
        assert!(CurveInstance::new(CurveFamily::ArtinSchreier { qas: 4, n: 3 }, 2, 2).is_err());
        assert!(CurveInstance::new(CurveFamily::ThreePointCover { n: 4, a: 2, b: 2 }, 3, 1).is_err());
        assert!(CurveInstance::new(CurveFamily::ThreePointCover { n: 3, a: 0, b: 2 }, 5, 1).is_err());
        assert!(CurveInstance::new(CurveFamily::FermatCurve { n: 3 }, 3, 1).is_err());
        // a + b divisible by n only drops the branch point over infinity
        assert!(CurveInstance::new(CurveFamily::ThreePointCover { n: 3, a: 1, b: 2 }, 5, 1).is_ok());
    }

    #[test]
    fn artin_schreier_2_3_counts() {
        let c = curve(CurveFamily::ArtinSchreier { qas: 2, n: 3 }, 2, 1);
        assert_eq!(count_points(&c, 1).unwrap(), 3);
        assert_eq!(count_points(&c, 2).unwrap(), 9); // maximal: 4 + 1 + 2*2
        assert_eq!(count_points_charsum(&c, 1).unwrap(), 3);
        assert_eq!(count_points_charsum(&c, 2).unwrap(), 9);
    }

    #[test]
    fn fermat_cubic_over_f4() {
        let c = curve(CurveFamily::FermatCurve { n: 3 }, 2, 2);
        assert_eq!(count_points(&c, 1).unwrap(), 9);
        assert_eq!(count_points_charsum(&c, 1).unwrap(), 9);
    }

    #[test]
    fn fermat_line_is_projective_line() {
        let c = curve(CurveFamily::FermatCurve { n: 1 }, 5, 1);
        for k in 1..=3 {
            assert_eq!(count_points(&c, k).unwrap(), 5u64.pow(k) + 1);
        }
    }

    #[test]
    fn oracle_equals_charsum_on_a_matrix() {
        let instances = [
            curve(CurveFamily::ArtinSchreier { qas: 2, n: 5 }, 2, 1),
            curve(CurveFamily::ArtinSchreier { qas: 4, n: 3 }, 2, 1),
            curve(CurveFamily::ArtinSchreier { qas: 3, n: 4 }, 3, 1),
            curve(CurveFamily::ArtinSchreier { qas: 9, n: 2 }, 3, 1),
            curve(CurveFamily::FermatCurve { n: 5 }, 3, 1),
            curve(CurveFamily::FermatCurve { n: 4 }, 5, 1),
            curve(CurveFamily::ThreePointCover { n: 2, a: 1, b: 1 }, 5, 1),
            curve(CurveFamily::ThreePointCover { n: 5, a: 1, b: 2 }, 11, 1),
            curve(CurveFamily::ThreePointCover { n: 6, a: 1, b: 2 }, 5, 2),
        ];
        for c in &instances {
            for k in 1..=3u32 {
                if c.q().pow(k) > 1 << 14 {
                    continue;
                }
                assert_eq!(
                    count_points(c, k).unwrap(),
                    count_points_charsum(c, k).unwrap(),
                    "disagreement for {c:?} k={k}"
                );
            }
        }
    }

    #[test]
    fn smooth_conic_has_q_plus_one_points() {
        // y^2 = x(1-x) is a genus-0 conic
        let c = curve(CurveFamily::ThreePointCover { n: 2, a: 1, b: 1 }, 5, 1);
        assert_eq!(c.genus(), 0);
        for k in 1..=4 {
            assert_eq!(count_points(&c, k).unwrap(), 5u64.pow(k) + 1);
        }
    }

    #[test]
    fn anchor_l_polynomials() {
        let c = curve(CurveFamily::ArtinSchreier { qas: 2, n: 3 }, 2, 1);
        let l = l_polynomial(&c).unwrap();
        assert_eq!(l.coeffs(), &[BigInt::from(1), BigInt::from(0), BigInt::from(2)]);
        assert!(l.functional_equation_holds());

        let f = curve(CurveFamily::FermatCurve { n: 3 }, 2, 2);
        let l = l_polynomial(&f).unwrap();
        assert_eq!(
            l.coeffs(),
            &[BigInt::from(1), BigInt::from(4), BigInt::from(4)]
        );

        let line = curve(CurveFamily::FermatCurve { n: 1 }, 7, 1);
        assert_eq!(l_polynomial(&line).unwrap().coeffs(), &[BigInt::from(1)]);
    }

    #[test]
    fn ordinary_three_point_cover_over_f7() {
        // y^3 = x(1-x) over F_7: 9 points, trace -1, ordinary elliptic curve
        let c = curve(CurveFamily::ThreePointCover { n: 3, a: 1, b: 1 }, 7, 1);
        assert_eq!(count_points(&c, 1).unwrap(), 9);
        let l = l_polynomial(&c).unwrap();
        assert_eq!(
            l.coeffs(),
            &[BigInt::from(1), BigInt::from(1), BigInt::from(7)]
        );
    }

    #[test]
    fn weil_bound_and_round_trip_on_a_sweep() {
        for (fam, p, r) in [
            (CurveFamily::ArtinSchreier { qas: 2, n: 5 }, 2u64, 1u32),
            (CurveFamily::ArtinSchreier { qas: 3, n: 2 }, 3, 1),
            (CurveFamily::FermatCurve { n: 4 }, 3, 1),
            (CurveFamily::ThreePointCover { n: 5, a: 1, b: 1 }, 11, 1),
        ] {
            let c = curve(fam, p, r);
            let g = c.genus();
            let counts = point_counts(&c, (2 * g) as u32).unwrap();
            assert!(counts.weil_bound_holds(c.q(), g));
            let l = l_polynomial(&c).unwrap();
            for k in 1..=2 * g as u32 {
                assert_eq!(
                    l.expected_count(k),
                    BigInt::from(counts.counts[k as usize - 1]),
                    "{c:?} k={k}"
                );
            }
            assert!(l.archimedean_weil_holds(1e-6));
        }
    }

    #[test]
    fn base_change_matches_recount() {
        let c = curve(CurveFamily::ArtinSchreier { qas: 2, n: 3 }, 2, 1);
        let l = l_polynomial(&c).unwrap();
        let l2 = l.base_change(2);
        // the base-changed polynomial predicts counts over F_{4^k} = F_{2^{2k}}
        for k in 1..=2u32 {
            assert_eq!(
                l2.expected_count(k),
                BigInt::from(count_points(&c, 2 * k).unwrap())
            );
        }
    }

    #[test]
    fn over_cap_is_rejected() {
        let c = curve(CurveFamily::FermatCurve { n: 11 }, 5, 1); // genus 45
        assert!(matches!(
            l_polynomial(&c),
            Err(Error::FieldTooLarge { .. })
        ));
    }
}
