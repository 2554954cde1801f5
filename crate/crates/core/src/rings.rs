//! Coefficient rings: F_p, Z/p^e, big integers, and sparse Laurent monomial algebras.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_u64(base: u64, e: u32) -> u64 {
    base.checked_pow(e).expect("integer power overflow")
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Reduce a signed integer into [0, m).
pub fn rem_i(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn rem_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Inverse of a unit modulo m.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(rem_i(g.x, m))
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp(x: i128, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.abs();
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

pub fn vp_big(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Generalized binomial m(m-1)...(m-r+1)/r! as an exact integer.
pub fn binom_big(m: i64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 0..r {
        acc *= BigInt::from(m - k as i64);
        acc /= BigInt::from(k + 1);
    }
    acc
}

/// Generalized binomial coefficient reduced mod p^e, computed by splitting
/// every factor into a p-power and a unit.
pub fn binom_mod(m: i64, r: u64, p: u64, e: u32) -> u64 {
    let modulus = pow_u64(p, e);
    if r == 0 {
        return 1 % modulus;
    }
    if m >= 0 && (m as u64) < r {
        return 0;
    }
    let mut v: i64 = 0;
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 1..=r {
        let a = m as i128 - r as i128 + k as i128;
        let b = k as i128;
        let (va, ua) = split_p(a, p);
        let (vb, ub) = split_p(b, p);
        v += va as i64 - vb as i64;
        num = ((num as u128 * rem_i(ua, modulus) as u128) % modulus as u128) as u64;
        den = ((den as u128 * rem_i(ub, modulus) as u128) % modulus as u128) as u64;
    }
    debug_assert!(v >= 0);
    if v >= e as i64 {
        return 0;
    }
    let unit = (num as u128 * inv_mod(den, modulus).unwrap() as u128 % modulus as u128) as u64;
    (unit * pow_u64(p, v as u32)) % modulus
}

/// p-adic valuation of the generalized binomial, `None` when it is zero.
pub fn binom_vp(m: i64, r: u64, p: u64) -> Option<u32> {
    if m >= 0 && (m as u64) < r {
        return None;
    }
    let mut v: i64 = 0;
    for k in 1..=r {
        let a = m as i128 - r as i128 + k as i128;
        v += split_p(a, p).0 as i64 - split_p(k as i128, p).0 as i64;
    }
    Some(v as u32)
}

fn split_p(x: i128, p: u64) -> (u32, i128) {
    let mut x = x;
    let mut v = 0;
    let p = p as i128;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// Element of the prime field F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PrimeFieldElem {
    pub p: u64,
    pub value: u64,
}

impl PrimeFieldElem {
    pub fn new(p: u64, v: i64) -> Self {
        PrimeFieldElem { p, value: rem_i(v as i128, p) }
    }
    pub fn pow(&self, e: u64) -> Self {
        PrimeFieldElem { p: self.p, value: pow_mod(self.value, e, self.p) }
    }
    pub fn inv(&self) -> Option<Self> {
        inv_mod(self.value, self.p).map(|value| PrimeFieldElem { p: self.p, value })
    }
}

/// Minimal commutative-ring interface used by the Witt vector machinery.
/// Constructors take `self` as a template so that context (modulus,
/// variable count) travels with the value.
pub trait CommRing: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn from_big_like(&self, c: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn pow(&self, mut e: u64) -> Self {
        let mut r = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }
    /// Characteristic of the ring if it is a prime, used to pick fast Frobenius paths.
    fn char_p(&self) -> Option<u64> {
        None
    }
    /// x^p; rings of characteristic p may override with a cheaper formula.
    fn pth_power(&self, p: u64) -> Self {
        self.pow(p)
    }
    /// The residue, when the ring is the prime field itself.
    fn as_fp(&self) -> Option<u64> {
        None
    }
    fn from_fp_like(&self, v: u64) -> Self {
        self.from_big_like(&BigInt::from(v))
    }
    /// Σ c_i x_i for small nonnegative integers c_i.
    fn lin_comb(&self, items: &[(u64, &Self)]) -> Self {
        items.iter().fold(self.zero_like(), |acc, (c, x)| {
            let t = if *c == 1 { (*x).clone() } else { x.mul(&self.from_big_like(&BigInt::from(*c))) };
            acc.add(&t)
        })
    }
}

/// Largest supported degree of the modulus of a `PolyQuotient`.
pub const QUOTIENT_MAX_DEGREE: usize = 4;

/// Element of F_p[t]/(f) for a monic f of degree 1 ≤ m ≤ 4; with f
/// irreducible this is the field with p^m elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PolyQuotient {
    p: u64,
    m: usize,
    /// f = t^m + Σ_{i<m} modulus[i] t^i
    modulus: [u64; QUOTIENT_MAX_DEGREE],
    coeffs: [u64; QUOTIENT_MAX_DEGREE],
}

impl PolyQuotient {
    /// Zero of F_p[t]/(t^m + Σ low[i] t^i), m = low.len().
    pub fn zero(p: u64, low: &[u64]) -> Self {
        assert!(!low.is_empty() && low.len() <= QUOTIENT_MAX_DEGREE);
        // products are accumulated unreduced in mul
        assert!(p < 1 << 28);
        let mut modulus = [0; QUOTIENT_MAX_DEGREE];
        for (a, &c) in modulus.iter_mut().zip(low) {
            *a = c % p;
        }
        PolyQuotient { p, m: low.len(), modulus, coeffs: [0; QUOTIENT_MAX_DEGREE] }
    }
    /// Zero of F_{p^3}, presented with the first irreducible t^3 + a t + b.
    pub fn cubic_field(p: u64) -> Self {
        for a in 0..p {
            for b in 1..p {
                if (0..p).all(|x| !(x * x % p * x + a * x + b).is_multiple_of(p)) {
                    return Self::zero(p, &[b, a, 0]);
                }
            }
        }
        unreachable!("an irreducible cubic exists over every prime field")
    }
    pub fn from_coeffs(&self, c: &[u64]) -> Self {
        let mut r = self.zero_like();
        for (i, &x) in c.iter().enumerate().take(self.m) {
            r.coeffs[i] = x % self.p;
        }
        r
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs[..self.m]
    }
    pub fn degree(&self) -> usize {
        self.m
    }
}

impl CommRing for PolyQuotient {
    fn zero_like(&self) -> Self {
        PolyQuotient { coeffs: [0; QUOTIENT_MAX_DEGREE], ..*self }
    }
    fn one_like(&self) -> Self {
        let mut r = self.zero_like();
        r.coeffs[0] = 1 % self.p;
        r
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..self.m {
            r.coeffs[i] = (r.coeffs[i] + o.coeffs[i]) % self.p;
        }
        r
    }
    fn neg(&self) -> Self {
        let mut r = *self;
        for i in 0..self.m {
            r.coeffs[i] = (self.p - r.coeffs[i]) % self.p;
        }
        r
    }
    fn mul(&self, o: &Self) -> Self {
        let (p, m) = (self.p, self.m);
        let mut prod = [0u64; 2 * QUOTIENT_MAX_DEGREE];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] += self.coeffs[i] * o.coeffs[j];
            }
        }
        // t^m ≡ −Σ low[i] t^i
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            if c != 0 {
                for i in 0..m {
                    prod[k - m + i] += (p - c) * self.modulus[i];
                }
            }
        }
        let mut r = self.zero_like();
        for i in 0..m {
            r.coeffs[i] = prod[i] % p;
        }
        r
    }
    fn from_big_like(&self, c: &BigInt) -> Self {
        let mut r = self.zero_like();
        r.coeffs[0] = rem_big(c, self.p);
        r
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.p)
    }
    fn lin_comb(&self, items: &[(u64, &Self)]) -> Self {
        let mut r = self.zero_like();
        for (c, x) in items {
            for i in 0..self.m {
                r.coeffs[i] = (r.coeffs[i] + c * x.coeffs[i]) % self.p;
            }
        }
        r
    }
}

impl CommRing for PrimeFieldElem {
    fn zero_like(&self) -> Self {
        PrimeFieldElem { p: self.p, value: 0 }
    }
    fn one_like(&self) -> Self {
        PrimeFieldElem { p: self.p, value: 1 % self.p }
    }
    fn add(&self, o: &Self) -> Self {
        PrimeFieldElem { p: self.p, value: (self.value + o.value) % self.p }
    }
    fn neg(&self) -> Self {
        PrimeFieldElem { p: self.p, value: (self.p - self.value) % self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        PrimeFieldElem { p: self.p, value: (self.value * o.value) % self.p }
    }
    fn from_big_like(&self, c: &BigInt) -> Self {
        PrimeFieldElem { p: self.p, value: rem_big(c, self.p) }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.p)
    }
    fn pth_power(&self, _p: u64) -> Self {
        *self
    }
    fn as_fp(&self) -> Option<u64> {
        Some(self.value)
    }
    fn from_fp_like(&self, v: u64) -> Self {
        PrimeFieldElem { p: self.p, value: v % self.p }
    }
}

/// Rational integers as a ring (torsion-free base for ghost computations).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Zz(pub BigInt);

impl Zz {
    pub fn from_i64(x: i64) -> Self {
        Zz(BigInt::from(x))
    }
}

impl CommRing for Zz {
    fn zero_like(&self) -> Self {
        Zz(BigInt::zero())
    }
    fn one_like(&self) -> Self {
        Zz(BigInt::one())
    }
    fn add(&self, o: &Self) -> Self {
        Zz(&self.0 + &o.0)
    }
    fn neg(&self) -> Self {
        Zz(-&self.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Zz(&self.0 * &o.0)
    }
    fn from_big_like(&self, c: &BigInt) -> Self {
        Zz(c.clone())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

pub type Mono = Vec<i64>;

/// Sparse Laurent polynomial with coefficients in Z/p^e.
///
/// Only variables listed in the negative mask may carry negative exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    p: u64,
    e: u32,
    modulus: u64,
    nvars: usize,
    neg: u64,
    terms: BTreeMap<Mono, u64>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &x) in m.iter().enumerate() {
                if x != 0 {
                    write!(f, "*z{}^{}", i, x)?;
                }
            }
        }
        Ok(())
    }
}

fn mask_of(neg: &[usize]) -> u64 {
    neg.iter().fold(0u64, |a, &i| a | (1 << i))
}

impl Laurent {
    /// The zero element of (Z/p^e)[z_0^{±}, …] with the given negative mask.
    pub fn zero(p: u64, e: u32, nvars: usize, neg: &[usize]) -> Self {
        assert!(e >= 1 && pow_u64(p, e) < (1 << 31), "modulus too large");
        Laurent { p, e, modulus: pow_u64(p, e), nvars, neg: mask_of(neg), terms: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        Laurent { terms: BTreeMap::new(), ..self.clone_header() }
    }

    fn clone_header(&self) -> Self {
        Laurent {
            p: self.p,
            e: self.e,
            modulus: self.modulus,
            nvars: self.nvars,
            neg: self.neg,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, e: u32, nvars: usize, neg: &[usize], c: i64) -> Self {
        let mut z = Self::zero(p, e, nvars, neg);
        z.insert(vec![0; nvars], rem_i(c as i128, z.modulus));
        z
    }

    pub fn monomial(p: u64, e: u32, neg: &[usize], exps: &[i64], c: i64) -> Result<Self> {
        let mut z = Self::zero(p, e, exps.len(), neg);
        z.check_mono(exps)?;
        z.insert(exps.to_vec(), rem_i(c as i128, z.modulus));
        Ok(z)
    }

    /// Build from (exponent, coefficient) pairs; duplicate exponents add up.
    pub fn from_terms(
        p: u64,
        e: u32,
        nvars: usize,
        neg: &[usize],
        terms: impl IntoIterator<Item = (Mono, i64)>,
    ) -> Result<Self> {
        let mut z = Self::zero(p, e, nvars, neg);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::VariableMismatch(format!("expected {} exponents", nvars)));
            }
            z.check_mono(&m)?;
            z.add_term(m, rem_i(c as i128, z.modulus));
        }
        Ok(z)
    }

    /// Same ring, monomial c·z^m (coefficient taken mod p^e).
    pub fn mono_like(&self, m: Mono, c: i64) -> Self {
        let mut z = self.empty_like();
        z.insert(m, rem_i(c as i128, self.modulus));
        z
    }

    fn check_mono(&self, m: &[i64]) -> Result<()> {
        for (i, &x) in m.iter().enumerate() {
            if x < 0 && self.neg & (1 << i) == 0 {
                return Err(Error::NegativeExponentViolation(format!(
                    "variable {} has exponent {}",
                    i, x
                )));
            }
        }
        Ok(())
    }

    fn insert(&mut self, m: Mono, c: u64) {
        if !c.is_multiple_of(self.modulus) {
            self.terms.insert(m, c % self.modulus);
        }
    }

    fn add_term(&mut self, m: Mono, c: u64) {
        let md = self.modulus;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = (*v + c) % md;
                if *v == 0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                if !c.is_multiple_of(md) {
                    self.terms.insert(m, c % md);
                }
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn exp(&self) -> u32 {
        self.e
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn neg_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|i| self.neg & (1 << i) != 0).collect()
    }
    pub fn neg_mask(&self) -> u64 {
        self.neg
    }
    pub fn terms(&self) -> &BTreeMap<Mono, u64> {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, m: &[i64]) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&x| x >= 0))
    }

    /// Same ring structure (modulus, variables, mask).
    pub fn same_ring(&self, o: &Self) -> bool {
        self.p == o.p && self.e == o.e && self.nvars == o.nvars && self.neg == o.neg
    }

    fn compat(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars || self.neg != o.neg {
            return Err(Error::VariableMismatch(format!(
                "{} vars/mask {:b} vs {} vars/mask {:b}",
                self.nvars, self.neg, o.nvars, o.neg
            )));
        }
        if self.p != o.p || self.e != o.e {
            return Err(Error::Mismatch(format!(
                "modulus {}^{} vs {}^{}",
                self.p, self.e, o.p, o.e
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.compat(o)?;
        let mut r = self.clone();
        for (m, &c) in &o.terms {
            match r.terms.get_mut(m) {
                Some(v) => {
                    *v = (*v + c) % self.modulus;
                    if *v == 0 {
                        r.terms.remove(m);
                    }
                }
                None => {
                    r.terms.insert(m.clone(), c);
                }
            }
        }
        Ok(r)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.compat(o)?;
        if self.terms.is_empty() || o.terms.is_empty() {
            return Ok(self.empty_like());
        }
        let md = self.modulus as u128;
        // pack exponent vectors of the product into one integer index
        let nv = self.nvars;
        let (mut lo, mut hi) = (vec![0i64; nv], vec![0i64; nv]);
        for i in 0..nv {
            let r1 = self.terms.keys().map(|m| m[i]);
            let r2 = o.terms.keys().map(|m| m[i]);
            lo[i] = r1.clone().min().unwrap() + r2.clone().min().unwrap();
            hi[i] = r1.max().unwrap() + r2.max().unwrap();
        }
        let mut strides = vec![0u64; nv];
        let mut size: u64 = 1;
        let mut packable = true;
        for i in 0..nv {
            strides[i] = size;
            match size.checked_mul((hi[i] - lo[i] + 1) as u64) {
                Some(s) if s < 1 << 62 => size = s,
                _ => {
                    packable = false;
                    break;
                }
            }
        }
        let mut r = self.empty_like();
        if !packable {
            let mut acc: HashMap<Mono, u64> = HashMap::with_capacity(self.terms.len() * o.terms.len());
            for (m1, &c1) in &self.terms {
                for (m2, &c2) in &o.terms {
                    let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                    let ent = acc.entry(m).or_insert(0);
                    *ent = ((*ent as u128 + c1 as u128 * c2 as u128) % md) as u64;
                }
            }
            r.terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
            return Ok(r);
        }
        let lo1: Vec<i64> = (0..nv).map(|i| self.terms.keys().map(|m| m[i]).min().unwrap()).collect();
        let lo2: Vec<i64> = (0..nv).map(|i| lo[i] - lo1[i]).collect();
        let pack = |m: &Mono, base: &[i64]| -> u64 { (0..nv).map(|i| (m[i] - base[i]) as u64 * strides[i]).sum() };
        let a: Vec<(u64, u128)> = self.terms.iter().map(|(m, &c)| (pack(m, &lo1), c as u128)).collect();
        let b: Vec<(u64, u128)> = o.terms.iter().map(|(m, &c)| (pack(m, &lo2), c as u128)).collect();
        let work = (a.len() * b.len()) as u64;
        let unpack = |mut k: u64| -> Mono {
            let mut m = vec![0i64; nv];
            for i in (0..nv).rev() {
                m[i] = (k / strides[i]) as i64 + lo[i];
                k %= strides[i];
            }
            m
        };
        // each slot receives at most min(|a|, |b|) products
        let lazy = (md - 1) * (md - 1) * (a.len().min(b.len()) as u128) < 1 << 63;
        if size <= 4 * work + 1024 && size <= 1 << 24 {
            let mut dense = vec![0u64; size as usize];
            if lazy {
                let bb: Vec<(usize, u64)> = b.iter().map(|&(k, c)| (k as usize, c as u64)).collect();
                for &(k1, c1) in &a {
                    let (k1, c1) = (k1 as usize, c1 as u64);
                    for &(k2, c2) in &bb {
                        dense[k1 + k2] += c1 * c2;
                    }
                }
            } else {
                for &(k1, c1) in &a {
                    for &(k2, c2) in &b {
                        let slot = &mut dense[(k1 + k2) as usize];
                        *slot = ((*slot as u128 + c1 * c2) % md) as u64;
                    }
                }
            }
            let md64 = md as u64;
            for (k, &c) in dense.iter().enumerate() {
                let c = c % md64;
                if c != 0 {
                    r.terms.insert(unpack(k as u64), c);
                }
            }
        } else {
            let mut acc: HashMap<u64, u128> = HashMap::with_capacity(a.len() * b.len());
            for &(k1, c1) in &a {
                for &(k2, c2) in &b {
                    let ent = acc.entry(k1 + k2).or_insert(0);
                    *ent = (*ent + c1 * c2) % md;
                }
            }
            for (k, c) in acc {
                if c != 0 {
                    r.terms.insert(unpack(k), c as u64);
                }
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = rem_i(c as i128, self.modulus);
        let mut r = self.empty_like();
        for (m, &v) in &self.terms {
            r.insert(m.clone(), ((v as u128 * c as u128) % self.modulus as u128) as u64);
        }
        r
    }

    /// Multiply by the monomial c·z^m; the product must respect the negative mask.
    pub fn shift(&self, m: &[i64], c: i64) -> Result<Self> {
        let c = rem_i(c as i128, self.modulus);
        let mut r = self.empty_like();
        for (k, &v) in &self.terms {
            let k2: Mono = k.iter().zip(m).map(|(a, b)| a + b).collect();
            r.check_mono(&k2)?;
            r.insert(k2, ((v as u128 * c as u128) % self.modulus as u128) as u64);
        }
        Ok(r)
    }

    /// Substitute z_i ↦ z_i^k for all i.
    pub fn inflate(&self, k: i64) -> Self {
        let mut r = self.empty_like();
        for (m, &c) in &self.terms {
            r.terms.insert(m.iter().map(|x| x * k).collect(), c);
        }
        r
    }

    /// Inverse of `inflate`, when every exponent is divisible by k.
    pub fn deflate(&self, k: i64) -> Option<Self> {
        let mut r = self.empty_like();
        for (m, &c) in &self.terms {
            if m.iter().any(|x| x % k != 0) {
                return None;
            }
            r.terms.insert(m.iter().map(|x| x / k).collect(), c);
        }
        Some(r)
    }

    /// Reduce coefficients to Z/p^e' with e' ≤ e.
    pub fn reduce_to(&self, e2: u32) -> Self {
        assert!(e2 >= 1 && e2 <= self.e);
        let m2 = pow_u64(self.p, e2);
        let mut r = Laurent { e: e2, modulus: m2, ..self.clone_header() };
        for (m, &c) in &self.terms {
            r.insert(m.clone(), c % m2);
        }
        r
    }

    /// Reinterpret coefficient representatives in [0, p^e) inside Z/p^e' with e' ≥ e.
    pub fn lift_to(&self, e2: u32) -> Self {
        assert!(e2 >= self.e);
        let mut r = Laurent { e: e2, modulus: pow_u64(self.p, e2), ..self.clone_header() };
        r.terms = self.terms.clone();
        r
    }

    /// Divide every coefficient by p, landing in Z/p^{e-1}; fails if some
    /// coefficient is a unit.
    pub fn div_p(&self) -> Option<Self> {
        if self.e == 1 {
            return if self.terms.is_empty() { Some(self.clone()) } else { None };
        }
        let mut r = Laurent { e: self.e - 1, modulus: self.modulus / self.p, ..self.clone_header() };
        for (m, &c) in &self.terms {
            if c % self.p != 0 {
                return None;
            }
            r.insert(m.clone(), c / self.p);
        }
        Some(r)
    }

    /// Multiply by p^k, viewed in the same ring.
    pub fn mul_p_pow(&self, k: u32) -> Self {
        if k >= self.e {
            return self.empty_like();
        }
        self.scale(pow_u64(self.p, k) as i64)
    }

    /// Total degree if all terms share one, `None` for the zero element or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.iter().sum::<i64>());
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Change the negative mask (checked).
    pub fn with_neg(&self, neg: &[usize]) -> Result<Self> {
        let mut r = self.clone();
        r.neg = mask_of(neg);
        for m in r.terms.keys() {
            r.check_mono(m)?;
        }
        Ok(r)
    }

    /// Apply f to each exponent vector (f must be injective on the support).
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Mono) -> Result<Self> {
        let mut r = self.empty_like();
        for (m, &c) in &self.terms {
            let m2 = f(m);
            r.check_mono(&m2)?;
            r.add_term(m2, c);
        }
        Ok(r)
    }

    pub fn retain(&self, f: impl Fn(&[i64]) -> bool) -> Self {
        let mut r = self.empty_like();
        for (m, &c) in &self.terms {
            if f(m) {
                r.terms.insert(m.clone(), c);
            }
        }
        r
    }
}

impl CommRing for Laurent {
    fn zero_like(&self) -> Self {
        self.empty_like()
    }
    fn one_like(&self) -> Self {
        self.mono_like(vec![0; self.nvars], 1)
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("Laurent add")
    }
    fn neg(&self) -> Self {
        let mut r = self.empty_like();
        for (m, &c) in &self.terms {
            r.terms.insert(m.clone(), self.modulus - c);
        }
        r
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("Laurent mul")
    }
    fn from_big_like(&self, c: &BigInt) -> Self {
        let mut r = self.empty_like();
        r.insert(vec![0; self.nvars], rem_big(c, self.modulus));
        r
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn char_p(&self) -> Option<u64> {
        if self.e == 1 {
            Some(self.p)
        } else {
            None
        }
    }
    fn lin_comb(&self, items: &[(u64, &Self)]) -> Self {
        let md = self.modulus as u128;
        let mut acc: HashMap<&Mono, u128> = HashMap::new();
        for (c, x) in items {
            let c = *c as u128 % md;
            for (m, &v) in &x.terms {
                let e = acc.entry(m).or_insert(0);
                *e = (*e + c * v as u128) % md;
            }
        }
        let mut r = self.empty_like();
        r.terms = acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m.clone(), c as u64)).collect();
        r
    }
    fn pth_power(&self, p: u64) -> Self {
        if self.e == 1 && p == self.p {
            // Frobenius over F_p: coefficients are fixed
            self.inflate(p as i64)
        } else {
            self.pow(p)
        }
    }
}

/// A finite graded slice of a monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    pub degree: i64,
    pub bounds: Vec<(i64, i64)>,
    pub basis: Vec<Mono>,
}

/// All exponent vectors with total degree m inside the box, lexicographically sorted.
pub fn graded_basis(d: usize, m: i64, bounds: &[(i64, i64)]) -> GradedSlice {
    assert_eq!(bounds.len(), d);
    let mut out = Vec::new();
    let mut cur = vec![0i64; d];
    // suffix min/max sums prune the search
    let mut smin = vec![0i64; d + 1];
    let mut smax = vec![0i64; d + 1];
    for i in (0..d).rev() {
        smin[i] = smin[i + 1] + bounds[i].0;
        smax[i] = smax[i + 1] + bounds[i].1;
    }
    fn rec(
        i: usize,
        rest: i64,
        b: &[(i64, i64)],
        smin: &[i64],
        smax: &[i64],
        cur: &mut Vec<i64>,
        out: &mut Vec<Mono>,
    ) {
        if i == b.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in b[i].0..=b[i].1 {
            let r = rest - x;
            if r < smin[i + 1] || r > smax[i + 1] {
                continue;
            }
            cur[i] = x;
            rec(i + 1, r, b, smin, smax, cur, out);
        }
    }
    if d > 0 {
        rec(0, m, bounds, &smin, &smax, &mut cur, &mut out);
    } else if m == 0 {
        out.push(vec![]);
    }
    GradedSlice { degree: m, bounds: bounds.to_vec(), basis: out }
}

/// Plain binomial C(n, k) for small nonnegative arguments, 0 when k > n or n < 0.
pub fn binom_u(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    binom_big(n, k as u64).to_u64().expect("binomial overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_field_units() {
        for p in [2u64, 3, 5] {
            let z = PolyQuotient::cubic_field(p);
            let q = p * p * p;
            // every nonzero element has multiplicative order dividing q − 1
            for code in 1..q {
                let x = z.from_coeffs(&[code % p, code / p % p, code / (p * p)]);
                assert_eq!(x.pow(q - 1), z.one_like());
            }
        }
        let trunc = PolyQuotient::zero(3, &[0, 0]);
        let eps = trunc.from_coeffs(&[0, 1]);
        assert!(eps.mul(&eps).is_zero());
    }

    #[test]
    fn inverse_monomial_cancels() {
        let a = Laurent::monomial(3, 1, &[0], &[1], 1).unwrap();
        let b = Laurent::monomial(3, 1, &[0], &[-1], 1).unwrap();
        assert_eq!(a.mul(&b), a.one_like());
    }

    #[test]
    fn frobenius_of_binomial_char_two() {
        let z = Laurent::from_terms(2, 1, 1, &[], vec![(vec![1], 1), (vec![0], 1)]).unwrap();
        let sq = z.mul(&z);
        let want = Laurent::from_terms(2, 1, 1, &[], vec![(vec![2], 1), (vec![0], 1)]).unwrap();
        assert_eq!(sq, want);
        assert_eq!(z.pth_power(2), want);
    }

    #[test]
    fn exponent_addition() {
        let a = Laurent::monomial(5, 1, &[1], &[2, -1], 1).unwrap();
        let b = Laurent::monomial(5, 1, &[1], &[0, -1], 1).unwrap();
        assert_eq!(a.mul(&b).terms().keys().next().unwrap(), &vec![2, -2]);
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(matches!(
            Laurent::monomial(3, 1, &[0], &[0, -1], 1),
            Err(Error::NegativeExponentViolation(_))
        ));
        let a = Laurent::monomial(3, 1, &[0], &[1, 0], 1).unwrap();
        let b = Laurent::monomial(3, 1, &[], &[1, 0], 1).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn graded_basis_examples() {
        assert_eq!(graded_basis(2, 1, &[(0, 1), (0, 1)]).basis, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            graded_basis(2, 0, &[(-1, 1), (-1, 1)]).basis,
            vec![vec![-1, 1], vec![0, 0], vec![1, -1]]
        );
        assert_eq!(graded_basis(3, 2, &[(0, 2); 3]).basis.len(), 6);
    }

    #[test]
    fn fermat_exhaustive() {
        for p in [2u64, 3, 5, 7] {
            for v in 0..p {
                let a = PrimeFieldElem::new(p, v as i64);
                assert_eq!(a.pow(p), a);
            }
        }
    }

    #[test]
    fn binomials_mod_prime_powers() {
        for m in -30i64..30 {
            for r in 0..12u64 {
                let exact = binom_big(m, r);
                for (p, e) in [(2u64, 3u32), (3, 2), (5, 2)] {
                    assert_eq!(binom_mod(m, r, p, e), rem_big(&exact, pow_u64(p, e)), "{} {}", m, r);
                    assert_eq!(binom_vp(m, r, p), vp_big(&exact, p));
                }
            }
        }
        assert_eq!(binom_mod(-1, 1, 3, 1), 2);
    }
}
