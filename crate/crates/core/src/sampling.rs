//! Seeded random samples shared by tests, suites and the CLI.

use crate::rings::{Laurent, PolyQuotient, PrimeFieldElem};
use crate::witt_core::WittVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial over F_p with at most `max_terms` terms of degree ≤ `max_deg` per variable.
pub fn random_poly(rng: &mut SampleRng, p: u64, nvars: usize, max_terms: usize, max_deg: i64) -> Laurent {
    let zero = Laurent::zero(p, 1, nvars, &[]);
    let k = rng.gen_range(0..=max_terms);
    let mut f = zero;
    for _ in 0..k {
        let m: Vec<i64> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = rng.gen_range(1..p) as i64;
        f = crate::rings::CommRing::add(&f, &f.mono_like(m, c));
    }
    f
}

/// Random Laurent polynomial over F_p, negative exponents allowed in every variable.
pub fn random_laurent(rng: &mut SampleRng, p: u64, nvars: usize, max_terms: usize, span: i64) -> Laurent {
    let neg: Vec<usize> = (0..nvars).collect();
    let mut f = Laurent::zero(p, 1, nvars, &neg);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let m: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-span..=span)).collect();
        let c = rng.gen_range(1..p) as i64;
        f = crate::rings::CommRing::add(&f, &f.mono_like(m, c));
    }
    f
}

pub fn random_witt_poly(
    rng: &mut SampleRng,
    p: u64,
    len: usize,
    nvars: usize,
    max_terms: usize,
    max_deg: i64,
) -> WittVector<Laurent> {
    WittVector::new(p, (0..len).map(|_| random_poly(rng, p, nvars, max_terms, max_deg)).collect())
}

pub fn random_witt_fp(rng: &mut SampleRng, p: u64, len: usize) -> WittVector<PrimeFieldElem> {
    WittVector::new(p, (0..len).map(|_| PrimeFieldElem::new(p, rng.gen_range(0..p) as i64)).collect())
}

/// Random Witt vector over F_p[t]/(f), the quotient given by `proto`.
pub fn random_witt_quotient(rng: &mut SampleRng, proto: &PolyQuotient, len: usize) -> WittVector<PolyQuotient> {
    let p = proto.p();
    WittVector::new(
        p,
        (0..len)
            .map(|_| proto.from_coeffs(&(0..proto.degree()).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>()))
            .collect(),
    )
}
