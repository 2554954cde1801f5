//! Deterministic verification suites. Each check returns a `CaseResult`;
//! a suite is a list of them. All randomness flows from the config seed.

use crate::error::{Error, Result};
use crate::rings::{pow_u64, CommRing, Laurent, PolyQuotient, PrimeFieldElem};
use crate::sampling::{random_laurent, random_witt_poly, random_witt_quotient, rng, SampleRng};
use crate::weyl::{apply_word, normal_form, p1_monomial_is_global, theta, WordToken};
use crate::witt_core::{teichmuller, tilde_f, tilde_w, tilde_w_inverse, universal_polys, witt_fp_to_int, WittVector};
use rand::Rng;
use std::collections::BTreeSet;
use std::time::Instant;

/// One named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Informational lines (coverage, sizes); deterministic.
    pub notes: Vec<String>,
    pub millis: u128,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects pass/fail events for one case.
struct Tally {
    name: String,
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
    start: Instant,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), checks: 0, failures: Vec::new(), notes: Vec::new(), start: Instant::now() }
    }
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
    fn error(&mut self, e: Error) {
        self.checks += 1;
        self.failures.push(format!("error: {}", e));
    }
    fn finish(self) -> CaseResult {
        CaseResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            notes: self.notes,
            millis: self.start.elapsed().as_millis(),
        }
    }
}

macro_rules! attempt {
    ($t:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                $t.error(err);
                return $t.finish();
            }
        }
    };
}

// ---------------------------------------------------------------------------
// Witt vectors

fn ring_axioms<R: CommRing>(x: &WittVector<R>, y: &WittVector<R>, z: &WittVector<R>) -> Result<Vec<bool>> {
    let zero = x.zero_like();
    let one = x.one_like();
    Ok(vec![
        x.add(y)? == y.add(x)?,
        x.mul(y)? == y.mul(x)?,
        x.add(y)?.add(z)? == x.add(&y.add(z)?)?,
        x.mul(y)?.mul(z)? == x.mul(&y.mul(z)?)?,
        x.mul(&y.add(z)?)? == x.mul(y)?.add(&x.mul(z)?)?,
        x.add(&zero)? == *x && x.mul(&one)? == *x,
        x.add(&x.neg()?)?.is_zero(),
    ])
}

/// Polynomial evaluation over F_p[t] is dense in degree p^{n−1}·deg, so the
/// polynomial-ring samples are limited to p^{n−1} ≤ 27.
pub fn poly_ring_samples_feasible(p: u64, n: usize) -> bool {
    pow_u64(p, n.saturating_sub(1) as u32) <= 27
}

/// Universal polynomials are integral and ghost-compatible; ring axioms on
/// random triples over F_{p^3} and, where feasible, over F_p[t].
pub fn witt_ring_axioms(p: u64, n: usize, samples: usize, g: &mut SampleRng) -> CaseResult {
    let mut t = Tally::new(format!("witt ring axioms p={} n={}", p, n));
    let u = attempt!(t, universal_polys(p, n));
    t.check(u.verify_ghost_symbolic(), || "ghost compatibility fails symbolically".into());
    let field = PolyQuotient::cubic_field(p);
    let poly = poly_ring_samples_feasible(p, n);
    for k in 0..samples {
        let mut runs = vec![(
            "F_p^3",
            ring_axioms(
                &random_witt_quotient(g, &field, n),
                &random_witt_quotient(g, &field, n),
                &random_witt_quotient(g, &field, n),
            ),
        )];
        if poly {
            let x = random_witt_poly(g, p, n, 1, 2, 2);
            let y = random_witt_poly(g, p, n, 1, 2, 2);
            let z = random_witt_poly(g, p, n, 1, 2, 2);
            runs.push(("F_p[t]", ring_axioms(&x, &y, &z)));
        }
        for (base, r) in runs {
            match r {
                Ok(v) => {
                    for (i, ok) in v.into_iter().enumerate() {
                        t.check(ok, || format!("{} sample {} axiom {}", base, k, i));
                    }
                }
                Err(e) => t.error(e),
            }
        }
    }
    t.finish()
}

/// W_n(F_p) ≅ Z/p^n: the ghost-of-lift map is a bijection carrying Witt
/// addition and multiplication to integer arithmetic (all pairs).
pub fn witt_fp_iso(p: u64, n: usize) -> CaseResult {
    let mut t = Tally::new(format!("W_{}(F_{}) = Z/{}^{}", n, p, p, n));
    let q = pow_u64(p, n as u32);
    let all: Vec<WittVector<PrimeFieldElem>> = (0..q)
        .map(|code| {
            let mut c = code;
            WittVector::new(
                p,
                (0..n)
                    .map(|_| {
                        let d = c % p;
                        c /= p;
                        PrimeFieldElem::new(p, d as i64)
                    })
                    .collect(),
            )
        })
        .collect();
    let ints: Vec<u64> = all.iter().map(witt_fp_to_int).collect();
    let distinct: BTreeSet<u64> = ints.iter().copied().collect();
    t.check(distinct.len() as u64 == q, || "not a bijection".into());
    for (x, &a) in all.iter().zip(&ints) {
        for (y, &b) in all.iter().zip(&ints) {
            let s = attempt!(t, x.add(y));
            let m = attempt!(t, x.mul(y));
            t.check(witt_fp_to_int(&s) == (a + b) % q, || format!("{} + {}", a, b));
            t.check(witt_fp_to_int(&m) == a * b % q, || format!("{} * {}", a, b));
        }
    }
    t.finish()
}

fn identities_over<R: CommRing>(
    t: &mut Tally,
    p: u64,
    n: usize,
    samples: usize,
    g: &mut SampleRng,
    sample: &dyn Fn(&mut SampleRng, usize) -> WittVector<R>,
) -> Result<()> {
    for k in 0..samples {
        let x = sample(g, n);
        let fv = x.verschiebung().frobenius()?;
        t.check(fv == x.scalar_mul(p as i64)?, || format!("FV = p, sample {}", k));
        let parts = x.decompose();
        let back = WittVector::recompose(p, n, &x.coords[0], &parts)?;
        t.check(back == x, || format!("decomposition, sample {}", k));
        if n < 2 {
            continue;
        }
        let y = sample(g, n - 1);
        let fx = x.frobenius()?;
        t.check(x.mul(&y.verschiebung())? == fx.mul(&y)?.verschiebung(), || format!("xV(y) = V(F(x)y), sample {}", k));
        t.check(fx.verschiebung() == x.scalar_mul(p as i64)?, || format!("VF = p, sample {}", k));
        let a = sample(g, 1).coords[0].clone();
        let fa = teichmuller(p, &a, n).frobenius()?;
        t.check(fa == teichmuller(p, &a.pow(p), n - 1), || format!("F[a] = [a^p], sample {}", k));
        // 0 → W_r → W_{m+r} → W_m → 0 with m + r = n
        let m = g.gen_range(1..n);
        let z = sample(g, n - m);
        let vz = z.verschiebung_pow(m);
        t.check(vz.restrict_to(m)?.is_zero(), || format!("R∘V = 0, sample {}", k));
        t.check(z.is_zero() || !vz.is_zero(), || format!("V^m injective, sample {}", k));
        let mut w = sample(g, n);
        for c in w.coords[..m].iter_mut() {
            *c = c.zero_like();
        }
        let pre = WittVector::new(p, w.coords[m..].to_vec()).verschiebung_pow(m);
        t.check(pre == w, || format!("ker R ⊆ im V, sample {}", k));
    }
    Ok(())
}

/// F V = p, x V(y) = V(F(x) y), F[a] = [a^p], V F = p, the V/R exact
/// sequence and the decomposition x = Σ V^l([x_l]). Samples live in
/// W_n(F_p[t]) where that is feasible and in W_n(F_{p^3}) otherwise.
pub fn witt_identities(p: u64, n: usize, samples: usize, g: &mut SampleRng) -> CaseResult {
    let mut t = Tally::new(format!("witt identities p={} n={}", p, n));
    let r = if poly_ring_samples_feasible(p, n) {
        identities_over(&mut t, p, n, samples, g, &|g, len| random_witt_poly(g, p, len, 1, 2, 3))
    } else {
        let field = PolyQuotient::cubic_field(p);
        identities_over(&mut t, p, n, samples, g, &|g, len| random_witt_quotient(g, &field, len))
    };
    if let Err(e) = r {
        t.error(e);
    }
    t.finish()
}

fn divisible_by(f: &Laurent, k: u32) -> bool {
    let m = pow_u64(f.p(), k);
    f.terms().values().all(|&c| c % m == 0)
}

/// w̃: roundtrip, ring homomorphism, and image ∩ p^i = w̃(V^i W) on samples.
pub fn tilde_w_checks(p: u64, n: usize, samples: usize, g: &mut SampleRng) -> CaseResult {
    let mut t = Tally::new(format!("w~ p={} n={}", p, n));
    let len = n + 1;
    for k in 0..samples {
        let x = random_witt_poly(g, p, len, 2, 3, 3);
        let y = random_witt_poly(g, p, len, 2, 3, 3);
        let wx = tilde_w(&x);
        t.check(attempt!(t, tilde_w_inverse(&wx, n)) == x, || format!("roundtrip, sample {}", k));
        t.check(tilde_w(&attempt!(t, x.add(&y))) == wx.add(&tilde_w(&y)), || format!("additive, sample {}", k));
        t.check(tilde_w(&attempt!(t, x.mul(&y))) == wx.mul(&tilde_w(&y)), || format!("multiplicative, sample {}", k));
        let i = g.gen_range(0..=len);
        let z = if g.gen_bool(0.5) && i < len {
            random_witt_poly(g, p, len - i, 2, 3, 3).verschiebung_pow(i)
        } else {
            x.clone()
        };
        let in_vi = z.coords[..i.min(len)].iter().all(|c| c.is_zero());
        t.check(in_vi == divisible_by(&tilde_w(&z), i as u32), || format!("image ∩ p^{} on sample {}", i, k));
    }
    t.finish()
}

/// F̃² on W_2(F_2[t]): image of degree ≤ 6 equals the closed elements of
/// (Z/4)[t] of degree ≤ 6, hit exactly once.
pub fn tilde_f_closed_forms() -> CaseResult {
    let mut t = Tally::new("F~^2 onto closed forms, p=2, deg ≤ 6");
    let p = 2;
    let polys = |maxdeg: i64| -> Vec<Laurent> {
        (0u32..1 << (maxdeg + 1))
            .map(|mask| {
                let z = Laurent::zero(p, 1, 1, &[]);
                (0..=maxdeg).filter(|i| mask >> i & 1 == 1).fold(z.clone(), |acc, i| acc.add(&z.mono_like(vec![i], 1)))
            })
            .collect()
    };
    let mut images = BTreeSet::new();
    let mut hits = 0usize;
    for a in polys(2) {
        for b in polys(4) {
            let f = tilde_f(&WittVector::new(p, vec![a.clone(), b.clone()]));
            let deg = f.terms().keys().map(|m| m[0]).max().unwrap_or(0);
            if deg > 6 {
                continue;
            }
            t.check(crate::witt_core::is_closed(&f), || format!("F~({}, {}) not closed", a, b));
            hits += 1;
            images.insert(f.terms().iter().map(|(m, &c)| (m[0], c)).collect::<Vec<_>>());
        }
    }
    t.check(images.len() == hits, || "not injective".into());
    // closed f = Σ c_k t^k with k c_k ≡ 0 mod 4
    let mut closed = BTreeSet::new();
    for code in 0..4u64.pow(7) {
        let cs: Vec<u64> = (0..7).map(|k| code / 4u64.pow(k) % 4).collect();
        if cs.iter().enumerate().all(|(k, &c)| (k as u64 * c).is_multiple_of(4)) {
            closed.insert(cs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as i64, c)).collect::<Vec<_>>());
        }
    }
    t.check(images == closed, || format!("image has {} elements, closed set {}", images.len(), closed.len()));
    t.finish()
}

// ---------------------------------------------------------------------------
// Weyl algebra

fn random_word(g: &mut SampleRng, p: u64, nvars: usize) -> Vec<WordToken> {
    let len = g.gen_range(1..=5);
    (0..len)
        .map(|_| {
            let i = g.gen_range(0..nvars);
            match g.gen_range(0..3) {
                0 => WordToken::Z(i, g.gen_range(-2..=3)),
                1 => WordToken::D(i, g.gen_range(0..=p + 1)),
                _ => WordToken::DPow(i, g.gen_range(1..=3)),
            }
        })
        .collect()
}

/// normal_form(w) applied to f equals applying w letter by letter.
pub fn weyl_normal_form(p: u64, samples: usize, g: &mut SampleRng) -> CaseResult {
    let mut t = Tally::new(format!("weyl normal form p={}", p));
    for k in 0..samples {
        let nvars = g.gen_range(1..=2);
        let e = g.gen_range(1..=2u32);
        let w = random_word(g, p, nvars);
        let f = random_laurent(g, p, nvars, 3, 3).lift_to(e);
        let nf = attempt!(t, normal_form(&w, p, e, nvars));
        let lhs = attempt!(t, nf.apply(&f));
        let rhs = attempt!(t, apply_word(&w, p, e, &f));
        t.check(lhs == rhs, || format!("sample {}: {:?} on {}", k, w, f));
    }
    t.finish()
}

/// θ_{ij}(z^s) = δ_{sj} z^i for all i, j, s ∈ [0, p^n)^m.
pub fn theta_matrix_units(p: u64, n: u32, m: usize) -> CaseResult {
    let mut t = Tally::new(format!("theta matrix units p={} n={} m={}", p, n, m));
    let q = pow_u64(p, n) as i64;
    let boxv: Vec<Vec<i64>> = (0..q.pow(m as u32)).map(|c| (0..m).map(|k| c / q.pow(k as u32) % q).collect()).collect();
    let monos: Vec<Laurent> = boxv.iter().map(|s| Laurent::monomial(p, 1, &[], s, 1).unwrap()).collect();
    for i in &boxv {
        for j in &boxv {
            let th = attempt!(t, theta(p, n, i, j));
            for (s, zs) in boxv.iter().zip(&monos) {
                let got = attempt!(t, th.apply(zs));
                let want = if s == j { Laurent::monomial(p, 1, &[], i, 1).unwrap() } else { zs.zero_like() };
                t.check(got == want, || format!("theta_{:?},{:?} on z^{:?}", i, j, s));
            }
        }
    }
    t.finish()
}

/// The exhaustive set of global z^r ∂^{[s]} on P^1, r ∈ [−2, 10], s ≤ 10.
pub fn p1_global_set(p: u64) -> BTreeSet<(i64, u64)> {
    let mut out = BTreeSet::new();
    for r in -2..=10i64 {
        for s in 0..=10u64 {
            if p1_monomial_is_global(p, r, s, 24) {
                out.insert((r, s));
            }
        }
    }
    out
}

/// Compare the computed P^1 globality set with {0 ≤ r ≤ 2s}.
pub fn p1_globality(p: u64) -> CaseResult {
    let mut t = Tally::new(format!("P^1 globality vs 0 ≤ r ≤ 2s, p={}", p));
    let got = p1_global_set(p);
    for r in -2..=10i64 {
        for s in 0..=10u64 {
            let claimed = 0 <= r && r <= 2 * s as i64;
            let actual = got.contains(&(r, s));
            t.check(claimed == actual, || format!("z^{}∂^[{}]: claimed {}, computed {}", r, s, claimed, actual));
        }
    }
    t.finish()
}

// ---------------------------------------------------------------------------
// Witt differential operators

/// The four relations at one (p, n, d) for every r ≤ p², plus engineered
/// lift pairs.
pub fn wdiff_relations(p: u64, n: usize, d: usize, samples: usize, lifts: usize, g: &mut SampleRng) -> CaseResult {
    use crate::witt_diff::{check_relation, engineered_lift, partial, Relation, SampleShape};
    let mut t = Tally::new(format!("witt differential relations p={} n={} d={}", p, n, d));
    for r in 1..=p * p {
        for rel in Relation::all() {
            if n == 0 && matches!(rel, Relation::Restriction | Relation::Verschiebung) {
                continue;
            }
            let rep = attempt!(t, check_relation(rel, p, n, d, r, samples, SampleShape::default(), g));
            t.checks += rep.cases.saturating_sub(1);
            t.check(rep.failures.is_empty(), || format!("{} r={}: {:?}", rel.name(), r, rep.failures));
        }
    }
    // a second lift exists only when p^{v_p(r)+1} is nonzero mod p^{n+1}
    let admissible: Vec<u64> = (1..=p * p).filter(|&r| crate::rings::vp(r as i128, p).unwrap() < n as u32).collect();
    if admissible.is_empty() {
        return t.finish();
    }
    for k in 0..lifts {
        let r = admissible[g.gen_range(0..admissible.len())];
        let j = g.gen_range(0..d);
        let op = partial(p, n, d, j, r);
        let alt = (0..16).map(|_| engineered_lift(&op, g)).find(|alt| alt.lift != op.lift);
        let Some(alt) = alt else {
            t.check(false, || format!("lift pair {}: no distinct lift found", k));
            continue;
        };
        let rb = attempt!(t, alt.restrict_to_base());
        t.check(rb == attempt!(t, op.restrict_to_base()), || format!("lift pair {}: base differs", k));
        let x = random_witt_poly(g, p, n + 1, d, 2, 3);
        t.check(attempt!(t, alt.apply_witt(&x)) == attempt!(t, op.apply_witt(&x)), || format!("lift pair {}: actions differ", k));
    }
    t.finish()
}

// ---------------------------------------------------------------------------
// Remaining modules

pub fn drw_identities(p: u64, n: u32, d: usize, bound: u64) -> CaseResult {
    let mut t = Tally::new(format!("de Rham-Witt identities p={} n={} d={}", p, n, d));
    for i in 0..=d {
        let rep = attempt!(t, crate::derham_witt::check_identities(p, n, d, i, bound));
        t.checks += rep.checks.saturating_sub(1);
        t.check(rep.failures.is_empty(), || format!("i={}: {:?}", i, rep.failures));
    }
    t.finish()
}

pub fn cohomology_sweep(p: u64, n: usize, d: usize, a_min: i64, a_max: i64) -> CaseResult {
    let mut t = Tally::new(format!("line bundle sweep p={} n={} d={}", p, n, d));
    let rows = attempt!(t, crate::proj_cech::sweep(p, n, d, a_min, a_max));
    for row in rows {
        let got: Vec<u64> = row.modules.iter().map(|m| m.length()).collect();
        t.check(row.agrees(), || format!("a={}: computed {:?}, closed form {:?}", row.a, got, row.closed_form));
    }
    t.finish()
}

/// length H^1(P^1, W_2 O(−2)) = 4 and H^2(P^2, W_2 O(−1)) = 0 at p = 2.
pub fn cohomology_specifics() -> CaseResult {
    let mut t = Tally::new("specific Witt line bundle values, p=2");
    let h = attempt!(t, crate::proj_cech::witt_cohomology(2, 1, 2, -2));
    t.check(h[1].length() == 4, || format!("length H^1(P^1, W_2 O(-2)) = {}", h[1].length()));
    let h = attempt!(t, crate::proj_cech::witt_cohomology(2, 2, 2, -1));
    t.check(h[2].is_zero(), || format!("H^2(P^2, W_2 O(-1)) has length {}", h[2].length()));
    t.finish()
}

pub fn localgen(p: u64, d: usize, j: usize, bound: i64) -> CaseResult {
    let mut t = Tally::new(format!("generation p={} d={} j={} bound={}", p, d, j, bound));
    let rep = attempt!(t, crate::local_cohomology::generation_run(p, d, j, bound));
    let total = crate::local_cohomology::enumerate_index(d, j, bound).len();
    let covered = total - rep.missing.len();
    t.notes.push(format!(
        "coverage {}% ({}/{} indices, {} steps)",
        if total == 0 { 100 } else { 100 * covered / total },
        covered,
        total,
        rep.steps.len()
    ));
    t.check(rep.complete(), || format!("missing {:?}", rep.missing));
    t.check(rep.rounds.iter().all(|r| r.1), || format!("round coverage {:?}", rep.rounds));
    t.check(rep.operators_global, || "an operator is not global".into());
    t.finish()
}

pub fn stability(p: u64, n: usize, d: usize, j: usize) -> CaseResult {
    let mut t = Tally::new(format!("N stability p={} n={} d={} j={}", p, n, d, j));
    let rep = attempt!(t, crate::local_cohomology::check_stability(p, n, d, j));
    t.notes.push(format!("{} generators, {} group elements", rep.generators, rep.group_elements));
    t.checks += rep.checks.saturating_sub(1);
    t.check(rep.failures.is_empty(), || format!("{} failures, first: {}", rep.failures.len(), rep.failures[0]));
    t.finish()
}

pub fn steinberg(q: u64, d: usize, expected: Option<usize>) -> CaseResult {
    use crate::steinberg::{acyclicity_check, build_complex, Coeffs};
    let mut t = Tally::new(format!("Steinberg GL_{}(F_{})", d + 1, q));
    let cx = attempt!(t, build_complex(q, d, &BTreeSet::new()));
    t.check(cx.d_squared_zero, || "d∘d ≠ 0".into());
    t.check(cx.cosets.iter().all(|c| c.partition_ok), || "cosets do not partition G".into());
    let mut rings = vec![Coeffs::Z];
    for p in [2u64, 3] {
        for n in 1..=2 {
            rings.push(Coeffs::ModPn(p, n));
        }
    }
    for c in rings {
        let rep = acyclicity_check(&cx, c);
        t.check(rep.acyclic(), || format!("{:?}: {:?}", c, rep));
        if let Some(r) = expected {
            t.check(rep.cokernel_rank == r, || format!("{:?}: rank {} (expected {})", c, rep.cokernel_rank, r));
        }
    }
    t.finish()
}

// ---------------------------------------------------------------------------
// Acceptance criteria

/// Number of acceptance criteria.
pub const CRITERIA: usize = 12;

/// One-line description of each acceptance criterion.
pub fn criterion_title(k: usize) -> &'static str {
    match k {
        1 => "universal Witt polynomials and ring axioms, p in {2,3,5}, n <= 4",
        2 => "W_n(F_p) = Z/p^n exhaustively, p in {2,3}, n <= 3",
        3 => "F V = p, xV(y) = V(F(x)y), F[a] = [a^p], V F = p, V/R sequence",
        4 => "w~ roundtrip and image, F~^2 onto closed forms over F_2[t]",
        5 => "restriction, Frobenius, Verschiebung, filtration relations; lift independence",
        6 => "crystalline Weyl normal form; theta matrix units",
        7 => "global z^r d^[s] on P^1 equals {0 <= r <= 2s}",
        8 => "de Rham-Witt identities on enumerated bases",
        9 => "Witt line bundle cohomology sweep on P^d",
        10 => "generation algorithm exhausts I",
        11 => "N_{n,j} stable under P_j, p = 3, d = 2, n <= 2",
        12 => "Steinberg induction complexes acyclic, ranks 2, 3, 8",
        _ => "unknown",
    }
}

/// Run acceptance criterion k (1-based) at full size.
pub fn criterion(k: usize, seed: u64) -> Vec<CaseResult> {
    let mut g = rng(seed.wrapping_add(k as u64));
    let mut out = Vec::new();
    match k {
        1 => {
            for p in [2, 3, 5] {
                for n in 1..=4 {
                    out.push(witt_ring_axioms(p, n, 200, &mut g));
                }
            }
        }
        2 => {
            for p in [2, 3] {
                for n in 1..=3 {
                    out.push(witt_fp_iso(p, n));
                }
            }
        }
        3 => {
            for p in [2, 3, 5] {
                for n in 1..=4 {
                    out.push(witt_identities(p, n, 100, &mut g));
                }
            }
        }
        4 => {
            for p in [2u64, 3, 5] {
                let mut len = 1;
                while pow_u64(p, len as u32) <= 27 {
                    out.push(tilde_w_checks(p, len - 1, 100, &mut g));
                    len += 1;
                }
            }
            out.push(tilde_f_closed_forms());
        }
        5 => {
            // operator parameter n acts on Witt length n + 1
            for p in [2, 3] {
                for n in 0..=3 {
                    for d in 1..=2 {
                        out.push(wdiff_relations(p, n, d, 100, 50, &mut g));
                    }
                }
            }
        }
        6 => {
            for p in [2, 3, 5] {
                out.push(weyl_normal_form(p, 200, &mut g));
            }
            for p in [2, 3] {
                for n in 1..=2 {
                    for m in 1..=2 {
                        out.push(theta_matrix_units(p, n, m));
                    }
                }
            }
        }
        7 => {
            for p in [2, 3, 5] {
                out.push(p1_globality(p));
            }
        }
        8 => {
            for p in [2, 3] {
                for n in 1..=3 {
                    for d in 1..=3 {
                        out.push(drw_identities(p, n, d, 3 * p * p));
                    }
                }
            }
        }
        9 => {
            for p in [2, 3] {
                for n in 1..=3 {
                    for d in 1..=3 {
                        out.push(cohomology_sweep(p, n, d, -4, 4));
                    }
                }
            }
            out.push(cohomology_specifics());
        }
        10 => {
            for (d, j, p) in [(2, 0, 3), (2, 1, 3), (3, 1, 3), (2, 0, 5)] {
                out.push(localgen(p, d, j, 2 * p as i64 + 1));
            }
        }
        11 => {
            for n in 1..=2 {
                for j in 0..2 {
                    out.push(stability(3, n, 2, j));
                }
            }
        }
        12 => {
            for (q, d, r) in [(2, 1, 2), (3, 1, 3), (2, 2, 8)] {
                out.push(steinberg(q, d, Some(r)));
            }
        }
        _ => {}
    }
    out
}

// ---------------------------------------------------------------------------
// Named suites

pub const SUITES: &[&str] = &[
    "witt-axioms",
    "wdiff-relations",
    "weyl",
    "globality",
    "drw-identities",
    "cohomology-sweep",
    "localgen",
    "stability",
    "steinberg",
];

/// Everything needed to reproduce a suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: String,
    pub p: Option<u64>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub j: Option<usize>,
    pub bound: Option<i64>,
    pub samples: usize,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig { suite: suite.into(), p: None, n: None, d: None, j: None, bound: None, samples: 100, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed())
    }
    pub fn failures(&self) -> usize {
        self.cases.iter().map(|c| c.failures.len()).sum()
    }
}

fn scale(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ScaleExceeded(what.into()))
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut g = rng(cfg.seed);
    let s = cfg.samples;
    let ps: Vec<u64> = cfg.p.map(|p| vec![p]).unwrap_or_default();
    for &p in &ps {
        if !crate::rings::is_prime(p) {
            return Err(Error::RangeError(format!("p = {} is not prime", p)));
        }
    }
    let pick = |default: &[u64]| if ps.is_empty() { default.to_vec() } else { ps.clone() };
    let mut cases = Vec::new();
    match cfg.suite.as_str() {
        "witt-axioms" => {
            let n = cfg.n.unwrap_or(3);
            scale(n <= 6, "witt length above 6")?;
            for p in pick(&[2, 3, 5]) {
                cases.push(witt_ring_axioms(p, n, s, &mut g));
                if pow_u64(p, n as u32) <= 729 {
                    cases.push(witt_fp_iso(p, n));
                }
                cases.push(witt_identities(p, n, s, &mut g));
                if pow_u64(p, n as u32) <= 27 {
                    cases.push(tilde_w_checks(p, n.saturating_sub(1), s, &mut g));
                }
            }
            if ps.is_empty() || ps[0] == 2 {
                cases.push(tilde_f_closed_forms());
            }
        }
        "wdiff-relations" => {
            let n = cfg.n.unwrap_or(2);
            scale(n <= 4, "witt differential operators above length 5")?;
            for p in pick(&[2, 3]) {
                for d in cfg.d.map(|d| vec![d]).unwrap_or(vec![1, 2]) {
                    cases.push(wdiff_relations(p, n, d, s, 10, &mut g));
                }
            }
        }
        "weyl" => {
            for p in pick(&[2, 3, 5]) {
                cases.push(weyl_normal_form(p, s, &mut g));
                if p <= 3 {
                    cases.push(theta_matrix_units(p, 1, 2));
                }
            }
        }
        "globality" => {
            for p in pick(&[2, 3, 5]) {
                cases.push(p1_globality(p));
            }
        }
        "drw-identities" => {
            let n = cfg.n.unwrap_or(2) as u32;
            let d = cfg.d.unwrap_or(2);
            scale(n <= 4 && d <= 4, "de Rham-Witt beyond n, d ≤ 4")?;
            for p in pick(&[2, 3]) {
                let bound = cfg.bound.map(|b| b as u64).unwrap_or(3 * p * p);
                cases.push(drw_identities(p, n, d, bound));
            }
        }
        "cohomology-sweep" => {
            let n = cfg.n.unwrap_or(2);
            let d = cfg.d.unwrap_or(1);
            scale(n <= 4 && d <= 4, "sweep beyond n, d ≤ 4")?;
            let b = cfg.bound.unwrap_or(4);
            for p in pick(&[2, 3]) {
                cases.push(cohomology_sweep(p, n, d, -b, b));
            }
            if ps.is_empty() || ps[0] == 2 {
                cases.push(cohomology_specifics());
            }
        }
        "localgen" => {
            let d = cfg.d.unwrap_or(2);
            let j = cfg.j.unwrap_or(0);
            scale(d <= 4, "generation beyond d = 4")?;
            for p in pick(&[3]) {
                cases.push(localgen(p, d, j, cfg.bound.unwrap_or(2 * p as i64 + 1)));
            }
        }
        "stability" => {
            let n = cfg.n.unwrap_or(1);
            let d = cfg.d.unwrap_or(2);
            scale(n <= 3 && d <= 3, "stability beyond n, d ≤ 3")?;
            for p in pick(&[3]) {
                match cfg.j {
                    Some(j) => cases.push(stability(p, n, d, j)),
                    None => (0..d).for_each(|j| cases.push(stability(p, n, d, j))),
                }
            }
        }
        "steinberg" => {
            for (q, d, r) in [(2u64, 1usize, 2usize), (3, 1, 3), (2, 2, 8)] {
                if ps.is_empty() || ps[0] == q {
                    cases.push(steinberg(q, d, Some(r)));
                }
            }
        }
        other => return Err(Error::UnknownSuite(other.into())),
    }
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport { config: cfg.clone(), cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let mut g = rng(1);
        assert!(witt_ring_axioms(3, 2, 10, &mut g).passed());
        assert!(witt_fp_iso(2, 2).passed());
        assert!(witt_identities(3, 3, 10, &mut g).passed());
        assert!(tilde_w_checks(2, 2, 10, &mut g).passed());
        assert!(tilde_f_closed_forms().passed());
        assert!(weyl_normal_form(3, 20, &mut g).passed());
        assert!(theta_matrix_units(2, 1, 2).passed());
        assert!(steinberg(2, 1, Some(2)).passed());
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite(&SuiteConfig::new("nope")), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let mut cfg = SuiteConfig::new("weyl");
        cfg.p = Some(2);
        cfg.samples = 15;
        cfg.seed = 9;
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        let strip = |r: &SuiteReport| r.cases.iter().map(|c| (c.name.clone(), c.checks, c.failures.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }
}
