//! Exact arithmetic in F_p and its extensions F_{p^k}, with the discrete-log
//! machinery needed to evaluate multiplicative characters.
//!
//! A [`FieldCtx`] is built once per (p, k) and then shared; elements are plain
//! coefficient vectors with no back-reference, so every operation takes the
//! context explicitly. Fields are capped in size (default 2^24 elements) and
//! get dense dlog/power tables, which is what keeps character evaluation and
//! point counting O(1) per element.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default cap on the number of field elements, p^k.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 24;

/// Element of F_{p^k} as coefficients in the basis 1, t, ..., t^{k-1} modulo
/// the context's modulus. Trailing zeros are trimmed, so equality is
/// coefficient equality and zero is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtFieldElem {
    coeffs: Vec<u64>,
}

impl ExtFieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn from_raw(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ExtFieldElem { coeffs }
    }
}

/// Dense multiplicative tables: `power[t]` is the element index of g^t and
/// `dlog[power[t]] = t`. Index 0 (the zero element) has no dlog.
struct MulTables {
    power: Vec<u32>,
    dlog: Vec<u32>,
}

/// Context for arithmetic in F_{p^k}.
pub struct FieldCtx {
    p: u64,
    k: u32,
    order: u64,
    modulus: Vec<u64>,
    generator: ExtFieldElem,
    q1_factors: Vec<u64>,
    tables: OnceLock<MulTables>,
    trace_table: OnceLock<Vec<u16>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Build the context for F_{p^k} under the default size cap.
///
/// The modulus is the first monic irreducible polynomial of degree k in the
/// constant-coefficient-first counting order, and the generator is the lowest
/// element index of full multiplicative order, so contexts are reproducible
/// across runs.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    make_field_with_cap(p, k, DEFAULT_FIELD_CAP)
}

/// Same as [`make_field`] with an explicit cap on p^k.
pub fn make_field_with_cap(p: u64, k: u32, cap: u64) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(k >= 1, "extension degree must be at least 1");
    let order = checked_pow(p, k)
        .filter(|&q| q <= cap)
        .ok_or(Error::FieldTooLarge { p, k, cap })?;

    let modulus = first_irreducible(p, k);
    let q1_factors = prime_factors(order - 1);

    let mut ctx = FieldCtx {
        p,
        k,
        order,
        modulus,
        generator: ExtFieldElem::from_raw(vec![]),
        q1_factors,
        tables: OnceLock::new(),
        trace_table: OnceLock::new(),
    };
    ctx.generator = ctx.find_generator();
    Ok(ctx)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of elements, q = p^k.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of the monic irreducible modulus, constant first, length k+1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &ExtFieldElem {
        &self.generator
    }

    pub fn zero(&self) -> ExtFieldElem {
        ExtFieldElem { coeffs: vec![] }
    }

    pub fn one(&self) -> ExtFieldElem {
        self.from_residue(1)
    }

    /// Constant element from a residue mod p.
    pub fn from_residue(&self, r: u64) -> ExtFieldElem {
        ExtFieldElem::from_raw(vec![r % self.p])
    }

    /// Element from arbitrary coefficients (reduced mod p; length must be ≤ k).
    pub fn elem(&self, coeffs: &[u64]) -> ExtFieldElem {
        assert!(coeffs.len() <= self.k as usize, "too many coefficients");
        ExtFieldElem::from_raw(coeffs.iter().map(|c| c % self.p).collect())
    }

    /// Mixed-radix index of an element: sum of coeffs[i] * p^i.
    pub fn index_of(&self, a: &ExtFieldElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn elem_from_index(&self, mut idx: u64) -> ExtFieldElem {
        debug_assert!(idx < self.order);
        let mut coeffs = Vec::with_capacity(self.k as usize);
        while idx > 0 {
            coeffs.push(idx % self.p);
            idx /= self.p;
        }
        ExtFieldElem::from_raw(coeffs)
    }

    pub fn add(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.coeffs.get(i).copied().unwrap_or(0);
            let y = b.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (x + y) % self.p;
        }
        ExtFieldElem::from_raw(out)
    }

    pub fn neg(&self, a: &ExtFieldElem) -> ExtFieldElem {
        let out = a
            .coeffs
            .iter()
            .map(|&c| if c == 0 { 0 } else { self.p - c })
            .collect();
        ExtFieldElem::from_raw(out)
    }

    pub fn sub(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ExtFieldElem, b: &ExtFieldElem) -> ExtFieldElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut prod = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.reduce(&mut prod);
        ExtFieldElem::from_raw(prod)
    }

    /// Reduce a coefficient vector modulo the field modulus, in place.
    fn reduce(&self, v: &mut Vec<u64>) {
        let k = self.k as usize;
        while v.len() > k {
            let top = v.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = v.len() - k;
            // v[shift..shift+k] -= top * modulus[0..k]
            for i in 0..k {
                let m = self.modulus[i];
                if m != 0 {
                    let sub = (top * m) % self.p;
                    v[shift + i] = (v[shift + i] + self.p - sub) % self.p;
                }
            }
        }
    }

    pub fn pow(&self, a: &ExtFieldElem, mut e: u64) -> ExtFieldElem {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ExtFieldElem) -> Result<ExtFieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// The field automorphism x -> x^p.
    pub fn frobenius(&self, a: &ExtFieldElem) -> ExtFieldElem {
        self.pow(a, self.p)
    }

    /// Absolute trace to F_p: x + x^p + ... + x^{p^{k-1}}, returned as a residue.
    pub fn trace(&self, a: &ExtFieldElem) -> u64 {
        let mut acc = a.clone();
        let mut pow = a.clone();
        for _ in 1..self.k {
            pow = self.frobenius(&pow);
            acc = self.add(&acc, &pow);
        }
        debug_assert!(acc.coeffs.len() <= 1, "trace landed outside F_p");
        acc.coeffs.first().copied().unwrap_or(0)
    }

    /// Discrete logarithm with respect to the context generator.
    pub fn dlog(&self, a: &ExtFieldElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let (_, dlog) = self.power_dlog_tables();
        Ok(dlog[self.index_of(a) as usize] as u64)
    }

    /// g^t for 0 <= t, reduced mod q-1.
    pub fn generator_pow(&self, t: u64) -> ExtFieldElem {
        let t = t % (self.order - 1);
        let (power, _) = self.power_dlog_tables();
        self.elem_from_index(power[t as usize] as u64)
    }

    fn find_generator(&self) -> ExtFieldElem {
        let q1 = self.order - 1;
        'cand: for idx in 1..self.order {
            let cand = self.elem_from_index(idx);
            for &f in &self.q1_factors {
                if self.pow(&cand, q1 / f) == self.one() {
                    continue 'cand;
                }
            }
            return cand;
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    /// Dense (power, dlog) tables for hot counting loops. `power[t]` is the
    /// element index of g^t; `dlog` is its inverse (undefined at index 0).
    pub(crate) fn power_dlog_tables(&self) -> (&[u32], &[u32]) {
        let t = self.raw_tables();
        (&t.power, &t.dlog)
    }

    /// Subtraction on mixed-radix element indices; the hot-loop sibling of
    /// [`FieldCtx::sub`]. Characteristic 2 is a plain xor.
    #[inline]
    pub(crate) fn index_sub(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut base = 1u64;
        for _ in 0..self.k {
            let (da, db) = (a % self.p, b % self.p);
            out += (da + self.p - db) % self.p * base;
            base *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn raw_tables(&self) -> &MulTables {
        self.tables.get_or_init(|| {
            let q = self.order as usize;
            let mut power = vec![0u32; q - 1];
            let mut dlog = vec![u32::MAX; q];
            let mut cur = self.one();
            for (t, slot) in power.iter_mut().enumerate() {
                let idx = self.index_of(&cur) as u32;
                *slot = idx;
                dlog[idx as usize] = t as u32;
                cur = self.mul(&cur, &self.generator);
            }
            debug_assert_eq!(cur, self.one(), "generator order is not q-1");
            MulTables { power, dlog }
        })
    }

    /// Absolute-trace lookup table indexed by element index. Values fit u16
    /// because every extension field under the cap has p <= 4096; for k = 1
    /// the trace is the identity and the table is skipped.
    pub(crate) fn trace_table(&self) -> &[u16] {
        self.trace_table.get_or_init(|| {
            assert!(self.k >= 2, "trace table is only built for extensions");
            let q = self.order as usize;
            let k = self.k as usize;
            let basis: Vec<u64> = (0..k)
                .map(|i| {
                    let mut c = vec![0u64; i + 1];
                    c[i] = 1;
                    self.trace(&ExtFieldElem::from_raw(c))
                })
                .collect();
            let mut table = vec![0u16; q];
            let mut digits = vec![0u64; k];
            let mut tr = 0u64;
            for slot in table.iter_mut() {
                *slot = tr as u16;
                // mixed-radix increment, maintaining the running trace mod p
                for pos in 0..k {
                    digits[pos] += 1;
                    tr = (tr + basis[pos]) % self.p;
                    if digits[pos] == self.p {
                        digits[pos] = 0;
                        continue;
                    }
                    break;
                }
            }
            table
        })
    }
}

/// Process-wide context cache under the default cap. Sweeps hit the same
/// (p, k) from point counting, character-sum cross-checks and eigenvalue
/// sums; rebuilding multi-million-entry dlog tables each time would dominate
/// the runtime. Small fields are kept for the process lifetime, large ones
/// in a short LRU.
pub fn shared_field(p: u64, k: u32) -> Result<Arc<FieldCtx>> {
    const SMALL: u64 = 1 << 16;
    const BIG_SLOTS: usize = 8;
    struct Cache {
        small: HashMap<(u64, u32), Arc<FieldCtx>>,
        big: Vec<((u64, u32), Arc<FieldCtx>)>,
    }
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        Mutex::new(Cache {
            small: HashMap::new(),
            big: Vec::new(),
        })
    });
    let mut guard = cache.lock().unwrap();
    if let Some(hit) = guard.small.get(&(p, k)) {
        return Ok(hit.clone());
    }
    if let Some(pos) = guard.big.iter().position(|(key, _)| *key == (p, k)) {
        let entry = guard.big.remove(pos);
        guard.big.push(entry.clone());
        return Ok(entry.1);
    }
    let ctx = Arc::new(make_field(p, k)?);
    if ctx.order() <= SMALL {
        guard.small.insert((p, k), ctx.clone());
    } else {
        if guard.big.len() == BIG_SLOTS {
            guard.big.remove(0);
        }
        guard.big.push(((p, k), ctx.clone()));
    }
    Ok(ctx)
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Deterministic primality by trial division; inputs are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic irreducible polynomial of degree k over F_p, scanning the
/// non-leading coefficients as a base-p counter with the constant digit first.
fn first_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut low = vec![0u64; k];
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly_is_irreducible(p, &f) {
            return f;
        }
        for d in low.iter_mut() {
            *d += 1;
            if *d == p {
                *d = 0;
            } else {
                break;
            }
        }
    }
}

/// Distinct-degree irreducibility test: f of degree k is irreducible over F_p
/// iff gcd(T^{p^i} - T, f) = 1 for all 1 <= i <= k/2.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by T
    }
    // x^{p^i} mod f, iterating i
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=(k / 2) {
        xp = poly_powmod(p, &xp, p, f);
        // gcd(xp - x, f)
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(p, &diff, f);
        if poly_deg(&g) != 0 {
            return false;
        }
    }
    true
}

fn poly_deg(f: &[u64]) -> usize {
    let mut d = f.len();
    while d > 0 && f[d - 1] == 0 {
        d -= 1;
    }
    d.saturating_sub(1)
}

fn poly_trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(p, prod, m)
}

fn poly_rem(p: u64, mut v: Vec<u64>, m: &[u64]) -> Vec<u64> {
    let md = poly_deg(m);
    let lead_inv = modinv(m[md], p);
    while poly_trimmed_len(&v) > md {
        let deg = poly_trimmed_len(&v) - 1;
        let c = (v[deg] * lead_inv) % p;
        let shift = deg - md;
        for i in 0..=md {
            if m[i] != 0 {
                let sub = (c * m[i]) % p;
                v[shift + i] = (v[shift + i] + p - sub) % p;
            }
        }
    }
    poly_trim(v)
}

fn poly_trimmed_len(f: &[u64]) -> usize {
    let mut d = f.len();
    while d > 0 && f[d - 1] == 0 {
        d -= 1;
    }
    d
}

fn poly_powmod(p: u64, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(p, base.to_vec(), m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &b, m);
        }
        b = poly_mulmod(p, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(p, a, &b);
        a = b;
        b = r;
    }
    a
}

fn modinv(a: u64, p: u64) -> u64 {
    // p prime, a nonzero
    modpow(a % p, p - 2, p)
}

pub(crate) fn modpow(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mm = m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    acc as u64
}
