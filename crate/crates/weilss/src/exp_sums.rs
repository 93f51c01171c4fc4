//! Exact Gauss and Jacobi sums over finite fields, valued in Z[ζ].
//!
//! Characters are evaluated through the context's dense dlog tables, so a sum
//! over F_q is one pass that histograms root-of-unity exponents and reduces
//! once at the end. Degenerate inputs (trivial characters) fall out of the
//! same summation and return the classical values rather than errors, since
//! family builders iterate over full character ranges.

use num_bigint::BigInt;

use crate::cyclotomic::{self, lcm, CyclotomicInt};
use crate::error::{Error, Result};
use crate::finite_field::{make_field, ExtFieldElem, FieldCtx};

/// Multiplicative character of F_{p^k}^*: x -> ζ_n^{j·dlog(x)}, extended by
/// χ(0) = 0. Has exact order n / gcd(j, n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultChar {
    field: (u64, u32),
    order: u64,
    index: u64,
}

impl MultChar {
    pub fn new(ctx: &FieldCtx, order: u64, index: u64) -> Result<Self> {
        if order == 0 || (ctx.order() - 1) % order != 0 {
            return Err(Error::BadCharOrder {
                n: order,
                q: ctx.order(),
            });
        }
        Ok(MultChar {
            field: (ctx.p(), ctx.k()),
            order,
            index: index % order,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// The conjugate character χ^{-1}.
    pub fn inverse(&self) -> MultChar {
        MultChar {
            field: self.field,
            order: self.order,
            index: if self.index == 0 { 0 } else { self.order - self.index },
        }
    }

    /// Exponent e with χ(x) = ζ_n^e, or None at x = 0.
    pub fn eval_exponent(&self, ctx: &FieldCtx, x: &ExtFieldElem) -> Result<Option<u64>> {
        self.check_field(ctx)?;
        if x.is_zero() {
            return Ok(None);
        }
        let t = ctx.dlog(x)?;
        Ok(Some(self.index * t % self.order))
    }

    /// χ(x) as an exact cyclotomic integer at conductor n.
    pub fn eval(&self, ctx: &FieldCtx, x: &ExtFieldElem) -> Result<CyclotomicInt> {
        Ok(match self.eval_exponent(ctx, x)? {
            None => CyclotomicInt::zero(self.order),
            Some(e) => cyclotomic::zeta_power(self.order, e as i64),
        })
    }

    /// χ(-1) as a sign (+1 or -1).
    pub fn sign_at_minus_one(&self, ctx: &FieldCtx) -> Result<i64> {
        self.check_field(ctx)?;
        let q = ctx.order();
        if q % 2 == 0 {
            return Ok(1);
        }
        // dlog(-1) = (q-1)/2
        let e = self.index * ((q - 1) / 2) % self.order;
        Ok(if e == 0 { 1 } else { -1 }) // e is 0 or n/2
    }

    fn check_field(&self, ctx: &FieldCtx) -> Result<()> {
        if self.field != (ctx.p(), ctx.k()) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

/// Additive character ψ_a(x) = ζ_p^{Tr(a·x)}; nontrivial iff a ≠ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddChar {
    field: (u64, u32),
    shift: ExtFieldElem,
}

impl AddChar {
    pub fn new(ctx: &FieldCtx, shift: ExtFieldElem) -> Self {
        AddChar {
            field: (ctx.p(), ctx.k()),
            shift,
        }
    }

    /// The standard character with shift 1.
    pub fn standard(ctx: &FieldCtx) -> Self {
        Self::new(ctx, ctx.one())
    }

    pub fn shift(&self) -> &ExtFieldElem {
        &self.shift
    }

    pub fn is_trivial(&self) -> bool {
        self.shift.is_zero()
    }

    /// Exponent e with ψ(x) = ζ_p^e.
    pub fn eval_exponent(&self, ctx: &FieldCtx, x: &ExtFieldElem) -> Result<u64> {
        self.check_field(ctx)?;
        Ok(ctx.trace(&ctx.mul(&self.shift, x)))
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &ExtFieldElem) -> Result<CyclotomicInt> {
        Ok(cyclotomic::zeta_power(
            ctx.p(),
            self.eval_exponent(ctx, x)? as i64,
        ))
    }

    fn check_field(&self, ctx: &FieldCtx) -> Result<()> {
        if self.field != (ctx.p(), ctx.k()) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

/// Histogram of ζ_m exponents, reduced to a canonical cyclotomic integer at
/// the end. The workhorse behind every exponential sum here.
pub(crate) struct ZetaAccumulator {
    m: u64,
    hist: Vec<i64>,
}

impl ZetaAccumulator {
    pub fn new(m: u64) -> Self {
        ZetaAccumulator {
            m,
            hist: vec![0i64; m as usize],
        }
    }

    #[inline]
    pub fn push(&mut self, exponent: u64) {
        self.hist[exponent as usize] += 1;
    }

    pub fn finish(self) -> CyclotomicInt {
        let raw: Vec<BigInt> = self.hist.into_iter().map(BigInt::from).collect();
        CyclotomicInt::from_zeta_poly(self.m, &raw)
    }
}

/// g(χ, ψ) = Σ_{x ≠ 0} χ(x) ψ(x), exact, at conductor lcm(order(χ), p).
pub fn gauss_sum(ctx: &FieldCtx, chi: &MultChar, psi: &AddChar) -> Result<CyclotomicInt> {
    chi.check_field(ctx)?;
    psi.check_field(ctx)?;
    let p = ctx.p();
    let q = ctx.order();
    let n = chi.order;
    let m = lcm(n, p);
    let mult_scale = m / n;
    let add_scale = m / p;

    let mut acc = ZetaAccumulator::new(m);
    if psi.is_trivial() {
        // Σ χ(x) over the full multiplicative group
        for t in 0..q - 1 {
            acc.push(chi.index * t % n * mult_scale % m);
        }
        return Ok(acc.finish());
    }

    let (power, _) = ctx.power_dlog_tables();
    let shift_t = ctx.dlog(&psi.shift)? as usize;
    if ctx.k() == 1 {
        for t in 0..(q - 1) as usize {
            let x = power[t] as u64;
            let tr = psi.shift.coeffs()[0] * x % p;
            let e = (chi.index * t as u64 % n) * mult_scale + tr * add_scale;
            acc.push(e % m);
        }
    } else {
        let trace = ctx.trace_table();
        let q1 = (q - 1) as usize;
        for t in 0..q1 {
            // ψ(shift · g^t) through dlog arithmetic
            let prod_idx = power[(shift_t + t) % q1] as usize;
            let tr = trace[prod_idx] as u64;
            let e = (chi.index * t as u64 % n) * mult_scale + tr * add_scale;
            acc.push(e % m);
        }
    }
    Ok(acc.finish())
}

/// J(χ1, χ2) = Σ_{x ≠ 0, 1} χ1(x) χ2(1-x), exact, at conductor
/// lcm(order(χ1), order(χ2)).
pub fn jacobi_sum(ctx: &FieldCtx, chi1: &MultChar, chi2: &MultChar) -> Result<CyclotomicInt> {
    chi1.check_field(ctx)?;
    chi2.check_field(ctx)?;
    let m = lcm(chi1.order, chi2.order);
    let s1 = m / chi1.order;
    let s2 = m / chi2.order;
    let (_, dlog) = ctx.power_dlog_tables();
    let one = ctx.one();
    let mut acc = ZetaAccumulator::new(m);
    for idx in 2..ctx.order() {
        let x = ctx.elem_from_index(idx);
        let y = ctx.sub(&one, &x);
        if y.is_zero() {
            continue; // x = 1 is excluded from the sum
        }
        let tx = dlog[idx as usize] as u64;
        let ty = dlog[ctx.index_of(&y) as usize] as u64;
        let e = (chi1.index * tx % chi1.order) * s1 + (chi2.index * ty % chi2.order) * s2;
        acc.push(e % m);
    }
    Ok(acc.finish())
}

/// Gauss sum of the lifted pair (χ∘Norm, ψ∘Tr) over the degree-r extension
/// of χ's field — the Hasse–Davenport lift.
pub fn gauss_sum_lifted(
    ctx: &FieldCtx,
    chi: &MultChar,
    psi: &AddChar,
    r: u32,
) -> Result<CyclotomicInt> {
    chi.check_field(ctx)?;
    psi.check_field(ctx)?;
    assert!(r >= 1);
    if r == 1 {
        return gauss_sum(ctx, chi, psi);
    }
    let big = make_field(ctx.p(), ctx.k() * r)?;
    let q = ctx.order();
    let big_q = big.order();
    let norm_exp = (big_q - 1) / (q - 1);

    // Embed F_q into the big field: canonical for prime fields, otherwise by
    // sending t to the first root of the modulus in index order.
    let embed: Vec<ExtFieldElem> = if ctx.k() == 1 {
        (0..q).map(|c| big.from_residue(c)).collect()
    } else {
        let root = find_root_of_modulus(ctx, &big);
        (0..q)
            .map(|idx| {
                let x = ctx.elem_from_index(idx);
                let mut acc = big.zero();
                let mut rp = big.one();
                for &c in x.coeffs() {
                    acc = big.add(&acc, &big.mul(&big.from_residue(c), &rp));
                    rp = big.mul(&rp, &root);
                }
                acc
            })
            .collect()
    };
    // index in the big field -> index in the small field
    let mut preimage = vec![u64::MAX; big_q as usize];
    for (small_idx, im) in embed.iter().enumerate() {
        preimage[big.index_of(im) as usize] = small_idx as u64;
    }

    let n = chi.order;
    let p = ctx.p();
    let m = lcm(n, p);
    let mult_scale = m / n;
    let add_scale = m / p;
    let (bpower, _) = big.power_dlog_tables();
    let (_, sdlog) = ctx.power_dlog_tables();
    let big_q1 = big_q - 1;
    let mut acc = ZetaAccumulator::new(m);
    for t in 0..big_q1 {
        // Norm(g^t) = g^{t·norm_exp} lies in the embedded subfield
        let norm_idx = bpower[(t as u128 * norm_exp as u128 % big_q1 as u128) as usize];
        let small_idx = preimage[norm_idx as usize];
        debug_assert_ne!(small_idx, u64::MAX, "norm landed outside the subfield");
        let e1 = chi.index * (sdlog[small_idx as usize] as u64) % n;

        // relative trace down to F_q, evaluated in the big field
        let mut rel = big.zero();
        let mut e = t;
        for _ in 0..r {
            rel = big.add(&rel, &big.elem_from_index(bpower[e as usize] as u64));
            e = (e as u128 * q as u128 % big_q1 as u128) as u64;
        }
        let rel_small = ctx.elem_from_index(preimage[big.index_of(&rel) as usize]);
        let e2 = ctx.trace(&ctx.mul(psi.shift(), &rel_small));
        acc.push((e1 * mult_scale + e2 * add_scale) % m);
    }
    Ok(acc.finish())
}

fn find_root_of_modulus(ctx: &FieldCtx, big: &FieldCtx) -> ExtFieldElem {
    for idx in 0..big.order() {
        let cand = big.elem_from_index(idx);
        let mut acc = big.zero();
        let mut pw = big.one();
        for &c in ctx.modulus() {
            acc = big.add(&acc, &big.mul(&big.from_residue(c), &pw));
            pw = big.mul(&pw, &cand);
        }
        if acc.is_zero() {
            return cand;
        }
    }
    unreachable!("the modulus splits in any extension of degree divisible by k")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_gauss_sums() {
        let ctx = make_field(7, 1).unwrap();
        let trivial = MultChar::new(&ctx, 6, 0).unwrap();
        let psi = AddChar::standard(&ctx);
        // χ trivial, ψ nontrivial -> -1
        assert_eq!(
            gauss_sum(&ctx, &trivial, &psi).unwrap().as_integer().unwrap(),
            BigInt::from(-1)
        );
        // χ nontrivial, ψ trivial -> 0
        let chi = MultChar::new(&ctx, 6, 1).unwrap();
        let psi0 = AddChar::new(&ctx, ctx.zero());
        assert!(gauss_sum(&ctx, &chi, &psi0).unwrap().is_zero());
    }

    #[test]
    fn f3_quadratic_gauss_sum_squares_to_minus_three() {
        let ctx = make_field(3, 1).unwrap();
        let chi = MultChar::new(&ctx, 2, 1).unwrap();
        let psi = AddChar::standard(&ctx);
        let g = gauss_sum(&ctx, &chi, &psi).unwrap();
        // g = ζ_3 - ζ_3^2 at conductor 6; check against a direct construction
        let z3 = cyclotomic::embed(&cyclotomic::zeta_power(3, 1), 6).unwrap();
        let z3sq = cyclotomic::embed(&cyclotomic::zeta_power(3, 2), 6).unwrap();
        assert_eq!(g, cyclotomic::sub(&z3, &z3sq).unwrap());
        let g2 = cyclotomic::mul(&g, &g).unwrap();
        assert_eq!(g2.as_integer().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn gauss_sum_absolute_value_squared_is_q() {
        for (p, k, n) in [
            (3u64, 1u32, 2u64),
            (7, 1, 3),
            (7, 1, 6),
            (2, 4, 5),
            (5, 2, 8),
            (13, 1, 4),
        ] {
            let ctx = make_field(p, k).unwrap();
            for j in 1..n {
                let chi = MultChar::new(&ctx, n, j).unwrap();
                let psi = AddChar::standard(&ctx);
                let g = gauss_sum(&ctx, &chi, &psi).unwrap();
                let gbar = cyclotomic::conj(&g);
                let prod = cyclotomic::mul(&g, &gbar).unwrap();
                assert_eq!(
                    prod.as_integer().unwrap(),
                    BigInt::from(ctx.order()),
                    "p={p} k={k} n={n} j={j}"
                );
            }
        }
    }

    #[test]
    fn gauss_conjugate_identity() {
        // g(χ̄, ψ) = χ(-1) · conj(g(χ, ψ))
        for (p, k, n, j) in [(5u64, 1u32, 4u64, 1u64), (7, 1, 6, 1), (3, 2, 8, 3), (13, 1, 12, 5)] {
            let ctx = make_field(p, k).unwrap();
            let chi = MultChar::new(&ctx, n, j).unwrap();
            let psi = AddChar::standard(&ctx);
            let lhs = gauss_sum(&ctx, &chi.inverse(), &psi).unwrap();
            let g = gauss_sum(&ctx, &chi, &psi).unwrap();
            let mut rhs = cyclotomic::conj(&g);
            if chi.sign_at_minus_one(&ctx).unwrap() == -1 {
                rhs = cyclotomic::neg(&rhs);
            }
            assert_eq!(lhs, rhs, "p={p} k={k} n={n} j={j}");
        }
    }

    #[test]
    fn jacobi_degenerate_and_small_cases() {
        // χ1 χ2 trivial, both nontrivial: J = -χ1(-1)
        let ctx = make_field(5, 1).unwrap();
        let chi = MultChar::new(&ctx, 2, 1).unwrap();
        let j = jacobi_sum(&ctx, &chi, &chi).unwrap();
        assert_eq!(j.as_integer().unwrap(), BigInt::from(-1));

        // F_4 cubic characters: J(χ,χ) = 2, so |J|^2 = 4 = q
        let f4 = make_field(2, 2).unwrap();
        let chi3 = MultChar::new(&f4, 3, 1).unwrap();
        let j = jacobi_sum(&f4, &chi3, &chi3).unwrap();
        assert_eq!(j.as_integer().unwrap(), BigInt::from(2));
        let jj = cyclotomic::mul(&j, &cyclotomic::conj(&j)).unwrap();
        assert_eq!(jj.as_integer().unwrap(), BigInt::from(4));
    }

    #[test]
    fn jacobi_gauss_factorization() {
        // J(χ1, χ2) g(χ1 χ2) = g(χ1) g(χ2) whenever χ1 χ2 is nontrivial
        for (p, k, n, j1, j2) in [
            (7u64, 1u32, 6u64, 1u64, 2u64),
            (5, 1, 4, 1, 1),
            (2, 2, 3, 1, 1),
            (3, 2, 8, 1, 3),
            (13, 1, 12, 2, 3),
        ] {
            let ctx = make_field(p, k).unwrap();
            let chi1 = MultChar::new(&ctx, n, j1).unwrap();
            let chi2 = MultChar::new(&ctx, n, j2).unwrap();
            let chi12 = MultChar::new(&ctx, n, (j1 + j2) % n).unwrap();
            assert!(!chi12.is_trivial());
            let psi = AddChar::standard(&ctx);
            let m = lcm(n, p);
            let j = cyclotomic::embed(&jacobi_sum(&ctx, &chi1, &chi2).unwrap(), m).unwrap();
            let lhs = cyclotomic::mul(&j, &gauss_sum(&ctx, &chi12, &psi).unwrap()).unwrap();
            let rhs = cyclotomic::mul(
                &gauss_sum(&ctx, &chi1, &psi).unwrap(),
                &gauss_sum(&ctx, &chi2, &psi).unwrap(),
            )
            .unwrap();
            assert_eq!(lhs, rhs, "p={p} k={k} n={n} j1={j1} j2={j2}");
        }
    }

    #[test]
    fn hasse_davenport_lift() {
        // -g_r = (-g_1)^r for the F_3 quadratic character, r = 2: g_2 = 3
        let ctx = make_field(3, 1).unwrap();
        let chi = MultChar::new(&ctx, 2, 1).unwrap();
        let psi = AddChar::standard(&ctx);
        let g1 = gauss_sum(&ctx, &chi, &psi).unwrap();
        let g2 = gauss_sum_lifted(&ctx, &chi, &psi, 2).unwrap();
        assert_eq!(g2.as_integer().unwrap(), BigInt::from(3));
        let minus_g1 = cyclotomic::neg(&g1);
        let sq = cyclotomic::mul(&minus_g1, &minus_g1).unwrap();
        assert_eq!(cyclotomic::neg(&g2), sq);
        // r = 1 lift is the plain sum
        assert_eq!(gauss_sum_lifted(&ctx, &chi, &psi, 1).unwrap(), g1);
    }

    #[test]
    fn hasse_davenport_from_extension_base() {
        // lift from F_4 to F_16; exercises the subfield embedding
        let ctx = make_field(2, 2).unwrap();
        let chi = MultChar::new(&ctx, 3, 1).unwrap();
        let psi = AddChar::standard(&ctx);
        let g1 = gauss_sum(&ctx, &chi, &psi).unwrap();
        let g2 = gauss_sum_lifted(&ctx, &chi, &psi, 2).unwrap();
        let minus_g1 = cyclotomic::neg(&g1);
        let hd = cyclotomic::mul(&minus_g1, &minus_g1).unwrap();
        assert_eq!(cyclotomic::neg(&g2), hd);
        let norm = cyclotomic::mul(&g2, &cyclotomic::conj(&g2)).unwrap();
        assert_eq!(norm.as_integer().unwrap(), BigInt::from(16));
    }

    #[test]
    fn lifted_norm_numeric_check() {
        // |g_r|^2 = p^{rk} numerically for the F_9 lift of the F_3 quadratic
        let ctx = make_field(3, 1).unwrap();
        let chi = MultChar::new(&ctx, 2, 1).unwrap();
        let psi = AddChar::standard(&ctx);
        let g = gauss_sum_lifted(&ctx, &chi, &psi, 2).unwrap();
        let norm = g.to_complex().norm_sqr();
        assert!((norm - 9.0).abs() < 1e-6);
    }

    #[test]
    fn field_mismatch_is_detected() {
        let ctx = make_field(5, 1).unwrap();
        let other = make_field(7, 1).unwrap();
        let chi = MultChar::new(&ctx, 4, 1).unwrap();
        let psi = AddChar::standard(&other);
        assert_eq!(gauss_sum(&ctx, &chi, &psi), Err(Error::FieldMismatch));
        assert!(MultChar::new(&ctx, 3, 1).is_err());
    }
}
