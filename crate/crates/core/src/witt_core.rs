//! Truncated p-typical Witt vectors.
//!
//! Arithmetic goes through the universal sum/product/negation polynomials,
//! built once per prime by ghost recursion over Z. On top of that sit the
//! structural maps F, V, R, Teichmüller lifts, the comparison map
//! `tilde_w` into (Z/p^{n+1})[z] and its inverse, `tilde_f`, and the
//! Teichmüller-sum and V-product expansions.

use crate::error::{Error, Result};
use crate::rings::{inv_mod, pow_mod, pow_u64, rem_i, CommRing, Laurent, Mono, PrimeFieldElem, Zz};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Integer polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }
    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut r = Self::zero(nvars);
        if !c.is_zero() {
            r.terms.insert(vec![0; nvars], c);
        }
        r
    }
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut r = Self::zero(nvars);
        r.terms.insert(e, BigInt::one());
        r
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            let ent = r.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *ent += c;
            if ent.is_zero() {
                r.terms.remove(m);
            }
        }
        r
    }
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        IntPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::constant(self.nvars, BigInt::one());
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
    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            r.terms.insert(m.clone(), q);
        }
        Some(r)
    }
    /// Evaluate at points of an arbitrary commutative ring.
    pub fn eval<R: CommRing>(&self, x: &[R]) -> R {
        let proto = &x[0];
        let mut cache = PowCache::new(x);
        let mut acc = proto.zero_like();
        for (m, c) in &self.terms {
            let mut t = proto.from_big_like(c);
            if t.is_zero() {
                continue;
            }
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    t = t.mul(cache.get(i, k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
    /// Substitute polynomials for the variables.
    pub fn compose(&self, subs: &[IntPoly]) -> IntPoly {
        let nv = subs[0].nvars;
        let mut acc = IntPoly::zero(nv);
        let mut powc: HashMap<(usize, u32), IntPoly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = IntPoly::constant(nv, c.clone());
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    let pw = powc.entry((i, k)).or_insert_with(|| subs[i].pow(k as u64));
                    t = t.mul(pw);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// Memoized powers x_i^k.
struct PowCache<'a, R: CommRing> {
    base: &'a [R],
    cache: HashMap<(usize, u64), R>,
}

impl<'a, R: CommRing> PowCache<'a, R> {
    fn new(base: &'a [R]) -> Self {
        PowCache { base, cache: HashMap::new() }
    }
    fn get(&mut self, i: usize, k: u64) -> &R {
        if !self.cache.contains_key(&(i, k)) {
            let v = self.base[i].pow(k);
            self.cache.insert((i, k), v);
        }
        &self.cache[&(i, k)]
    }
}

/// Straight-line program evaluating a mod-p polynomial over a ring of
/// characteristic p. Terms are grouped as Σ_α X^α (Σ_β c_{αβ} Y^β), where X
/// are the even-indexed and Y the odd-indexed variables; every distinct
/// monomial is its prefix times one power, and powers are products of
/// Frobenius iterates x^{p^j} following the base-p digits of the exponent.
#[derive(Clone, Debug, Default)]
struct EvalPlan {
    /// (variable, j): x_i^{p^j}; slot (i, j) directly follows slot (i, j − 1)
    frobs: Vec<(usize, u32)>,
    /// products of frob slots raised to digits
    powers: Vec<Vec<(usize, u64)>>,
    /// (prefix monomial, power); None stands for 1
    monos: Vec<(Option<usize>, Option<usize>)>,
    groups: Vec<(usize, Vec<(usize, u64)>)>,
}

struct PlanBuilder {
    p: u64,
    plan: EvalPlan,
    max_frob: BTreeMap<usize, u32>,
    frob_idx: HashMap<(usize, u32), usize>,
    pow_idx: HashMap<(usize, u64), usize>,
    mono_idx: HashMap<Vec<u32>, usize>,
}

impl PlanBuilder {
    fn power(&mut self, i: usize, k: u64) -> usize {
        if let Some(&s) = self.pow_idx.get(&(i, k)) {
            return s;
        }
        let mut digits = Vec::new();
        let (mut kk, mut j) = (k, 0u32);
        while kk > 0 {
            if kk % self.p > 0 {
                digits.push((self.frob_idx[&(i, j)], kk % self.p));
            }
            kk /= self.p;
            j += 1;
        }
        self.plan.powers.push(digits);
        self.pow_idx.insert((i, k), self.plan.powers.len() - 1);
        self.plan.powers.len() - 1
    }

    fn mono(&mut self, m: &[u32]) -> usize {
        if let Some(&s) = self.mono_idx.get(m) {
            return s;
        }
        let entry = match m.iter().rposition(|&k| k > 0) {
            None => (None, None),
            Some(i) => {
                let mut pre = m.to_vec();
                pre[i] = 0;
                let parent = if pre.iter().all(|&k| k == 0) { None } else { Some(self.mono(&pre)) };
                (parent, Some(self.power(i, m[i] as u64)))
            }
        };
        self.plan.monos.push(entry);
        self.mono_idx.insert(m.to_vec(), self.plan.monos.len() - 1);
        self.plan.monos.len() - 1
    }
}

impl EvalPlan {
    fn new(p: u64, terms: &[(Vec<u32>, u64)]) -> Self {
        let mut b = PlanBuilder {
            p,
            plan: EvalPlan::default(),
            max_frob: BTreeMap::new(),
            frob_idx: HashMap::new(),
            pow_idx: HashMap::new(),
            mono_idx: HashMap::new(),
        };
        for (m, _) in terms {
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    let top = (k as f64).log(p as f64).floor() as u32 + 1;
                    let e = b.max_frob.entry(i).or_insert(0);
                    *e = (*e).max(top);
                }
            }
        }
        for (&i, &top) in &b.max_frob {
            for j in 0..=top {
                b.frob_idx.insert((i, j), b.plan.frobs.len());
                b.plan.frobs.push((i, j));
            }
        }
        let mut grouped: BTreeMap<Vec<u32>, Vec<(usize, u64)>> = BTreeMap::new();
        for (m, c) in terms {
            let xm: Vec<u32> = m.iter().enumerate().map(|(i, &k)| if i % 2 == 0 { k } else { 0 }).collect();
            let ym: Vec<u32> = m.iter().enumerate().map(|(i, &k)| if i % 2 == 1 { k } else { 0 }).collect();
            let y = b.mono(&ym);
            grouped.entry(xm).or_default().push((y, *c));
        }
        for (xm, inner) in grouped {
            let xs = b.mono(&xm);
            b.plan.groups.push((xs, inner));
        }
        b.plan
    }

    fn run<R: CommRing>(&self, p: u64, x: &[R]) -> R {
        let proto = &x[0];
        let mut frobs: Vec<R> = Vec::with_capacity(self.frobs.len());
        for &(i, j) in &self.frobs {
            let v = if j == 0 { x[i].clone() } else { frobs[frobs.len() - 1].pth_power(p) };
            frobs.push(v);
        }
        let powers: Vec<R> = self
            .powers
            .iter()
            .map(|digits| {
                let mut v: Option<R> = None;
                for &(s, d) in digits {
                    for _ in 0..d {
                        v = Some(match v {
                            None => frobs[s].clone(),
                            Some(v) => v.mul(&frobs[s]),
                        });
                    }
                }
                v.unwrap_or_else(|| proto.one_like())
            })
            .collect();
        let mut monos: Vec<R> = Vec::with_capacity(self.monos.len());
        for &(parent, pw) in &self.monos {
            let v = match (parent, pw) {
                (None, None) => proto.one_like(),
                (Some(a), None) => monos[a].clone(),
                (None, Some(b)) => powers[b].clone(),
                (Some(a), Some(b)) => {
                    if monos[a].is_zero() {
                        monos[a].clone()
                    } else {
                        monos[a].mul(&powers[b])
                    }
                }
            };
            monos.push(v);
        }
        let mut products: Vec<R> = Vec::with_capacity(self.groups.len());
        for (xs, inner) in &self.groups {
            if monos[*xs].is_zero() {
                continue;
            }
            let items: Vec<(u64, &R)> =
                inner.iter().filter(|(y, _)| !monos[*y].is_zero()).map(|&(y, c)| (c, &monos[y])).collect();
            if items.is_empty() {
                continue;
            }
            let s = proto.lin_comb(&items);
            if !s.is_zero() {
                products.push(monos[*xs].mul(&s));
            }
        }
        proto.lin_comb(&products.iter().map(|v| (1, v)).collect::<Vec<_>>())
    }
}

/// A polynomial with coefficients already reduced mod p, with a compiled
/// evaluation plan for rings of characteristic p.
#[derive(Clone, Debug)]
pub struct ModPPoly {
    pub terms: Vec<(Vec<u32>, u64)>,
    plan: EvalPlan,
}

impl ModPPoly {
    fn from_int(p: u64, f: &IntPoly) -> Self {
        let pb = BigInt::from(p);
        let terms: Vec<(Vec<u32>, u64)> = f
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&pb);
                if r.is_zero() {
                    None
                } else {
                    Some((m.clone(), r.try_into().unwrap()))
                }
            })
            .collect();
        let plan = EvalPlan::new(p, &terms);
        ModPPoly { terms, plan }
    }
    /// Evaluate at residues in F_p with a dense power table.
    fn eval_fp(&self, p: u64, x: &[u64]) -> u64 {
        let mut acc = 0u64;
        let mut table: Vec<Vec<u64>> = vec![Vec::new(); x.len()];
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let row = &mut table[i];
                if row.len() <= k as usize {
                    if row.is_empty() {
                        row.push(1);
                    }
                    while row.len() <= k as usize {
                        let last = *row.last().unwrap();
                        row.push(last * x[i] % p);
                    }
                }
                t = t * row[k as usize] % p;
                if t == 0 {
                    break;
                }
            }
            acc += t;
        }
        acc % p
    }
    /// Evaluate over a ring of characteristic p.
    fn eval<R: CommRing>(&self, p: u64, x: &[R]) -> R {
        self.plan.run(p, x)
    }
}

/// Universal Witt polynomials for one prime, up to length n.
///
/// Variables of the binary polynomials are interleaved (X_1, Y_1, X_2, Y_2, …)
/// so that the k-th polynomial only involves the first 2(k+1) variables.
#[derive(Clone, Debug)]
pub struct UniversalWittPolys {
    pub p: u64,
    pub n: usize,
    pub sum_polys: Vec<IntPoly>,
    pub prod_polys: Vec<IntPoly>,
    pub neg_polys: Vec<IntPoly>,
    sum_mod: Vec<ModPPoly>,
    prod_mod: Vec<ModPPoly>,
    neg_mod: Vec<ModPPoly>,
}

/// Ghost polynomial w_k in the given variables (one per Witt coordinate).
pub fn ghost_poly(p: u64, k: usize, vars: &[IntPoly]) -> IntPoly {
    let mut acc = IntPoly::zero(vars[0].nvars);
    for j in 0..=k {
        let t = vars[j].pow(pow_u64(p, (k - j) as u32)).scale(&BigInt::from(pow_u64(p, j as u32)));
        acc = acc.add(&t);
    }
    acc
}

fn ghost_recursion(
    p: u64,
    n: usize,
    nvars: usize,
    target: impl Fn(usize) -> IntPoly,
    label: &str,
) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::new();
    for k in 0..n {
        let mut rest = target(k);
        for (j, sj) in out.iter().enumerate() {
            let t = sj.pow(pow_u64(p, (k - j) as u32)).scale(&BigInt::from(pow_u64(p, j as u32)));
            rest = rest.add(&t.scale(&BigInt::from(-1)));
        }
        let d = BigInt::from(pow_u64(p, k as u32));
        let sk = rest
            .div_exact(&d)
            .ok_or_else(|| Error::IntegralityFailure(format!("{} polynomial {} at p={}", label, k, p)))?;
        debug_assert_eq!(sk.nvars, nvars);
        out.push(sk);
    }
    Ok(out)
}

impl UniversalWittPolys {
    /// Build S, P, N for lengths up to n by ghost recursion, asserting integrality.
    pub fn build(p: u64, n: usize) -> Result<Self> {
        if !crate::rings::is_prime(p) || n == 0 {
            return Err(Error::RangeError(format!("p={} n={}", p, n)));
        }
        let nv2 = 2 * n;
        let xs: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(nv2, 2 * i)).collect();
        let ys: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(nv2, 2 * i + 1)).collect();
        let sum_polys =
            ghost_recursion(p, n, nv2, |k| ghost_poly(p, k, &xs).add(&ghost_poly(p, k, &ys)), "sum")?;
        let prod_polys =
            ghost_recursion(p, n, nv2, |k| ghost_poly(p, k, &xs).mul(&ghost_poly(p, k, &ys)), "product")?;
        let xn: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(n, i)).collect();
        let neg_polys =
            ghost_recursion(p, n, n, |k| ghost_poly(p, k, &xn).scale(&BigInt::from(-1)), "negation")?;
        let sum_mod = sum_polys.iter().map(|f| ModPPoly::from_int(p, f)).collect();
        let prod_mod = prod_polys.iter().map(|f| ModPPoly::from_int(p, f)).collect();
        let neg_mod = neg_polys.iter().map(|f| ModPPoly::from_int(p, f)).collect();
        Ok(UniversalWittPolys { p, n, sum_polys, prod_polys, neg_polys, sum_mod, prod_mod, neg_mod })
    }

    /// Symbolic check over Z: w_k(S) = w_k(X) + w_k(Y), w_k(P) = w_k(X)w_k(Y),
    /// w_k(N) = −w_k(X) for every k < n, with the ghost side recomputed by
    /// composing the ghost polynomials with the universal ones.
    pub fn verify_ghost_symbolic(&self) -> bool {
        let p = self.p;
        let n = self.n;
        let nv2 = 2 * n;
        let xs: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(nv2, 2 * i)).collect();
        let ys: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(nv2, 2 * i + 1)).collect();
        let xn: Vec<IntPoly> = (0..n).map(|i| IntPoly::var(n, i)).collect();
        for k in 0..n {
            let gx = ghost_poly(p, k, &xs);
            let gy = ghost_poly(p, k, &ys);
            if ghost_poly(p, k, &self.sum_polys) != gx.add(&gy) {
                return false;
            }
            if ghost_poly(p, k, &self.prod_polys) != gx.mul(&gy) {
                return false;
            }
            if ghost_poly(p, k, &self.neg_polys) != ghost_poly(p, k, &xn).scale(&BigInt::from(-1)) {
                return false;
            }
        }
        true
    }

    fn eval_binary<R: CommRing>(&self, polys: &[IntPoly], fast: &[ModPPoly], x: &[R], y: &[R]) -> Vec<R> {
        let n = x.len();
        let mut inp = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            if i < n {
                inp.push(x[i].clone());
                inp.push(y[i].clone());
            } else {
                inp.push(x[0].zero_like());
                inp.push(x[0].zero_like());
            }
        }
        if let Some(vals) = inp.iter().map(|a| a.as_fp()).collect::<Option<Vec<u64>>>() {
            if x[0].char_p() == Some(self.p) {
                return (0..n).map(|k| x[0].from_fp_like(fast[k].eval_fp(self.p, &vals))).collect();
            }
        }
        (0..n)
            .map(|k| match x[0].char_p() {
                Some(q) if q == self.p => fast[k].eval(self.p, &inp),
                _ => polys[k].eval(&inp),
            })
            .collect()
    }
}

static CACHE: Lazy<Mutex<HashMap<u64, Arc<UniversalWittPolys>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached universal polynomials for p, covering at least length n.
pub fn universal_polys(p: u64, n: usize) -> Result<Arc<UniversalWittPolys>> {
    {
        let c = CACHE.lock().unwrap();
        if let Some(u) = c.get(&p) {
            if u.n >= n {
                return Ok(u.clone());
            }
        }
    }
    let u = Arc::new(UniversalWittPolys::build(p, n)?);
    let mut c = CACHE.lock().unwrap();
    match c.get(&p) {
        Some(old) if old.n >= n => Ok(old.clone()),
        _ => {
            c.insert(p, u.clone());
            Ok(u)
        }
    }
}

/// Truncated Witt vector (a_1, …, a_n) over a commutative ring.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<R: CommRing> {
    pub p: u64,
    pub coords: Vec<R>,
}

impl<R: CommRing> WittVector<R> {
    pub fn new(p: u64, coords: Vec<R>) -> Self {
        assert!(!coords.is_empty(), "Witt vectors have length at least 1");
        WittVector { p, coords }
    }
    pub fn len(&self) -> usize {
        self.coords.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn zero_like(&self) -> Self {
        WittVector { p: self.p, coords: vec![self.coords[0].zero_like(); self.len()] }
    }
    pub fn one_like(&self) -> Self {
        teichmuller(self.p, &self.coords[0].one_like(), self.len())
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p || self.len() != o.len() {
            return Err(Error::Mismatch(format!(
                "p={} n={} vs p={} n={}",
                self.p,
                self.len(),
                o.p,
                o.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let u = universal_polys(self.p, self.len())?;
        Ok(WittVector { p: self.p, coords: u.eval_binary(&u.sum_polys, &u.sum_mod, &self.coords, &o.coords) })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let u = universal_polys(self.p, self.len())?;
        Ok(WittVector { p: self.p, coords: u.eval_binary(&u.prod_polys, &u.prod_mod, &self.coords, &o.coords) })
    }

    pub fn neg(&self) -> Result<Self> {
        let u = universal_polys(self.p, self.len())?;
        let mut inp: Vec<R> = self.coords.clone();
        while inp.len() < u.n {
            inp.push(self.coords[0].zero_like());
        }
        let coords = (0..self.len())
            .map(|k| match self.coords[0].char_p() {
                Some(q) if q == self.p => u.neg_mod[k].eval(self.p, &inp),
                _ => u.neg_polys[k].eval(&inp),
            })
            .collect();
        Ok(WittVector { p: self.p, coords })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg()?)
    }

    /// Frobenius of a characteristic-p base: (a_1^p, …, a_{n−1}^p).
    pub fn frobenius(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::LengthUnderflow);
        }
        Ok(WittVector {
            p: self.p,
            coords: self.coords[..self.len() - 1].iter().map(|a| a.pth_power(self.p)).collect(),
        })
    }

    /// Length-preserving coordinate-wise Frobenius Φ_A (characteristic p base).
    pub fn phi(&self) -> Self {
        WittVector { p: self.p, coords: self.coords.iter().map(|a| a.pth_power(self.p)).collect() }
    }

    /// Verschiebung: prepends a zero, length n+1.
    pub fn verschiebung(&self) -> Self {
        let mut c = vec![self.coords[0].zero_like()];
        c.extend(self.coords.iter().cloned());
        WittVector { p: self.p, coords: c }
    }

    /// V^k, length n+k.
    pub fn verschiebung_pow(&self, k: usize) -> Self {
        let mut c = vec![self.coords[0].zero_like(); k];
        c.extend(self.coords.iter().cloned());
        WittVector { p: self.p, coords: c }
    }

    /// Restriction: drops the last coordinate.
    pub fn restrict(&self) -> Result<Self> {
        self.restrict_to(self.len().checked_sub(1).ok_or(Error::LengthUnderflow)?)
    }

    pub fn restrict_to(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return Err(Error::LengthUnderflow);
        }
        Ok(WittVector { p: self.p, coords: self.coords[..m].to_vec() })
    }

    /// x = Σ_l V^l([x_{l+1}]): the nonzero (level, coordinate) pairs.
    pub fn decompose(&self) -> Vec<(usize, R)> {
        self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(l, a)| (l, a.clone())).collect()
    }

    /// Rebuild from a decomposition with Witt addition.
    pub fn recompose(p: u64, n: usize, proto: &R, parts: &[(usize, R)]) -> Result<Self> {
        let mut acc = WittVector { p, coords: vec![proto.zero_like(); n] };
        for (l, a) in parts {
            let t = teichmuller(p, a, n - l).verschiebung_pow(*l);
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Integer multiple by double-and-add.
    pub fn scalar_mul(&self, k: i64) -> Result<Self> {
        let neg = k < 0;
        let mut k = k.unsigned_abs();
        let mut acc = self.zero_like();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.add(&b)?;
            }
        }
        if neg {
            acc.neg()
        } else {
            Ok(acc)
        }
    }

    /// Integer multiple in characteristic p through Teichmüller digits:
    /// k = Σ p^j ω(c_j) gives k·x = Σ V^j([c_j]·F^j x).
    pub fn scalar_mul_char_p(&self, k: i64) -> Result<Self> {
        let n = self.len();
        let p = self.p;
        let digits = teichmuller_digits(p, n as u32, rem_i(k as i128, pow_u64(p, n as u32)));
        let mut acc = self.zero_like();
        for (j, &c) in digits.iter().enumerate() {
            if c == 0 || j >= n {
                continue;
            }
            let coords: Vec<R> = self.coords[..n - j]
                .iter()
                .map(|a| {
                    let mut b = a.clone();
                    for _ in 0..j {
                        b = b.pth_power(p);
                    }
                    b.mul(&a.from_big_like(&BigInt::from(c)))
                })
                .collect();
            let t = WittVector { p, coords }.verschiebung_pow(j);
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

/// Teichmüller lift [a] = (a, 0, …, 0).
pub fn teichmuller<R: CommRing>(p: u64, a: &R, n: usize) -> WittVector<R> {
    let mut c = vec![a.zero_like(); n];
    c[0] = a.clone();
    WittVector { p, coords: c }
}

/// Ghost components of a Witt vector with integer coordinates.
pub fn ghost(x: &WittVector<Zz>) -> Vec<BigInt> {
    let p = x.p;
    (0..x.len())
        .map(|i| {
            let mut acc = BigInt::zero();
            for j in 0..=i {
                acc += BigInt::from(pow_u64(p, j as u32)) * x.coords[j].0.pow(pow_u64(p, (i - j) as u32) as u32);
            }
            acc
        })
        .collect()
}

/// Ghost map for generic bases: refuses bases in which p is a zero divisor.
pub fn ghost_checked<R: CommRing>(x: &WittVector<R>) -> Result<Vec<R>> {
    if x.coords[0].char_p().is_some() {
        return Err(Error::TorsionRing);
    }
    if let Some(c) = x.coords.first() {
        // p-power torsion shows up as a vanishing large power of p
        let pp = c.from_big_like(&num_traits::pow(BigInt::from(x.p), 64));
        if pp.is_zero() {
            return Err(Error::TorsionRing);
        }
    }
    let p = x.p;
    Ok((0..x.len())
        .map(|i| {
            let mut acc = x.coords[0].zero_like();
            for j in 0..=i {
                let t = x.coords[j].pow(pow_u64(p, (i - j) as u32));
                acc = acc.add(&t.mul(&t.from_big_like(&BigInt::from(pow_u64(p, j as u32)))));
            }
            acc
        })
        .collect())
}

/// The integer in [0, p^n) represented by a Witt vector over F_p:
/// Σ p^j ã_{j+1}^{p^{n−1−j}} mod p^n.
pub fn witt_fp_to_int(x: &WittVector<PrimeFieldElem>) -> u64 {
    let p = x.p;
    let n = x.len() as u32;
    let m = pow_u64(p, n);
    let mut acc = 0u64;
    for (j, a) in x.coords.iter().enumerate() {
        let t = pow_mod(a.value, pow_u64(p, n - 1 - j as u32), m);
        acc = (acc + t * pow_u64(p, j as u32)) % m;
    }
    acc
}

/// Teichmüller representative of c ∈ F_p inside Z/p^n.
pub fn teich_int(p: u64, n: u32, c: u64) -> u64 {
    let m = pow_u64(p, n);
    if n == 0 {
        return 0;
    }
    pow_mod(c % p, pow_u64(p, n - 1), m)
}

/// Digits c_j ∈ F_p with k ≡ Σ p^j ω(c_j) mod p^n.
pub fn teichmuller_digits(p: u64, n: u32, k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = k % pow_u64(p, n);
    for j in 0..n {
        let m = pow_u64(p, n - j);
        let c = rest % p;
        out.push(c);
        let w = teich_int(p, n - j, c);
        rest = ((rest + m - w) % m) / p;
    }
    out
}

/// Inverse of `witt_fp_to_int`.
pub fn int_to_witt_fp(p: u64, n: usize, k: u64) -> WittVector<PrimeFieldElem> {
    let digits = teichmuller_digits(p, n as u32, k);
    let one = PrimeFieldElem::new(p, 0);
    let mut acc = WittVector::new(p, vec![one; n]);
    for (j, &c) in digits.iter().enumerate() {
        let t = teichmuller(p, &PrimeFieldElem::new(p, c as i64), n - j).verschiebung_pow(j);
        acc = acc.add(&t).expect("same shape");
    }
    acc
}

// ---------------------------------------------------------------------------
// Comparison maps into (Z/p^m)[z]

/// w̃_n: W_{n+1}(F_p[z]) → (Z/p^{n+1})[z], (f_1, …, f_{n+1}) ↦ Σ p^i f̃_{i+1}^{p^{n−i}}.
/// Monomial Laurent coordinates are allowed.
pub fn tilde_w(x: &WittVector<Laurent>) -> Laurent {
    let n = x.len() - 1;
    let p = x.p;
    let e = (n + 1) as u32;
    let mut acc = x.coords[0].lift_to(e).zero_like();
    for (i, f) in x.coords.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let t = f.lift_to(e).pow(pow_u64(p, (n - i) as u32)).mul_p_pow(i as u32);
        acc = acc.add(&t);
    }
    acc
}

/// Inverse of `tilde_w` on its image, by peeling p^k-th roots layer by layer.
pub fn tilde_w_inverse(y: &Laurent, n: usize) -> Result<WittVector<Laurent>> {
    let p = y.p();
    if y.exp() != (n + 1) as u32 {
        return Err(Error::Mismatch(format!("expected modulus p^{}", n + 1)));
    }
    let mut cur = y.clone();
    let mut coords = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let k = pow_u64(p, (n - i) as u32);
        let layer = cur.reduce_to(1);
        let f = layer
            .deflate(k as i64)
            .ok_or_else(|| Error::NotInImage(format!("layer {} is not a p^{}-th power", i, n - i)))?;
        let lifted = f.lift_to(cur.exp()).pow(k);
        let rest = cur.sub(&lifted);
        coords.push(f);
        if i < n {
            cur = rest
                .div_p()
                .ok_or_else(|| Error::NotInImage(format!("layer {} does not cancel mod p", i)))?;
        } else if !rest.is_zero() {
            return Err(Error::NotInImage("nonzero remainder".into()));
        }
    }
    Ok(WittVector::new(p, coords))
}

/// F̃^n: W_n(F_p[z]) → (Z/p^n)[z], (x_1, …, x_n) ↦ Σ p^i x̃_{i+1}^{p^{n−i}}.
pub fn tilde_f(x: &WittVector<Laurent>) -> Laurent {
    let n = x.len();
    let p = x.p;
    let e = n as u32;
    let mut acc = x.coords[0].lift_to(e).zero_like();
    for (i, f) in x.coords.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let t = f.lift_to(e).pow(pow_u64(p, (n - i) as u32)).mul_p_pow(i as u32);
        acc = acc.add(&t);
    }
    acc
}

/// Formal partial derivatives of a Laurent polynomial.
pub fn formal_d(f: &Laurent) -> Vec<Laurent> {
    (0..f.nvars())
        .map(|i| {
            let mut out = f.zero_like();
            for (m, &c) in f.terms() {
                if m[i] != 0 {
                    let mut m2 = m.clone();
                    m2[i] -= 1;
                    out = out.add(&f.mono_like(m2, (c as i128 * m[i] as i128 % f.modulus() as i128) as i64));
                }
            }
            out
        })
        .collect()
}

pub fn is_closed(f: &Laurent) -> bool {
    formal_d(f).iter().all(|g| g.is_zero())
}

// ---------------------------------------------------------------------------
// Teichmüller sums and V-products

/// One term c·V^l(∏_j [a_j]^{m_j}) of a Teichmüller-sum expansion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SumTerm {
    pub level: usize,
    pub exps: Vec<u64>,
    pub coeff: u64,
}

/// W_n(k)-combination of V^l(∏[a_j]^{m_j}); coefficients mod p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub p: u64,
    pub n: usize,
    pub nsummands: usize,
    pub power: u64,
    pub terms: Vec<SumTerm>,
}

static TWO_SUM_CACHE: Lazy<Mutex<HashMap<(u64, usize, u64), Arc<Vec<SumTerm>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Expansion of [A+B]^i in W_n(F_p[A,B]) by peeling V-layers with Witt subtraction.
fn two_sum_expansion(p: u64, n: usize, i: u64) -> Result<Arc<Vec<SumTerm>>> {
    if let Some(v) = TWO_SUM_CACHE.lock().unwrap().get(&(p, n, i)) {
        return Ok(v.clone());
    }
    let ring = Laurent::zero(p, 1, 2, &[]);
    let s = ring.mono_like(vec![1, 0], 1).add(&ring.mono_like(vec![0, 1], 1));
    let mut rem = teichmuller(p, &s.pow(i), n);
    let mut terms: BTreeMap<(usize, Vec<u64>), u64> = BTreeMap::new();
    let modn = pow_u64(p, n as u32);
    for l in 0..n {
        let layer = rem.coords[l].clone();
        for (m, &c) in layer.terms() {
            let mono = ring.mono_like(m.clone(), c as i64);
            let t = teichmuller(p, &mono, n - l).verschiebung_pow(l);
            rem = rem.sub(&t)?;
            let key = (l, m.iter().map(|&x| x as u64).collect::<Vec<_>>());
            let w = teich_int(p, n as u32, c);
            let ent = terms.entry(key).or_insert(0);
            *ent = (*ent + w) % modn;
        }
        debug_assert!(rem.coords[l].is_zero());
    }
    if !rem.is_zero() {
        return Err(Error::IntegralityFailure("Teichmuller peeling left a remainder".into()));
    }
    let v: Vec<SumTerm> = terms
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((level, exps), coeff)| SumTerm { level, exps, coeff })
        .collect();
    let v = Arc::new(v);
    TWO_SUM_CACHE.lock().unwrap().insert((p, n, i), v.clone());
    Ok(v)
}

/// Expand [a_1 + … + a_r]^i into Σ c·V^l(∏[a_j]^{m_j}) with Σ m_j = p^l·i.
///
/// The expansion is formal in the summands; `summands` is only used for the
/// distinctness precondition.
pub fn teichmuller_sum_power(p: u64, summands: &[Laurent], i: u64, n: usize) -> Result<Expansion> {
    for a in 0..summands.len() {
        for b in a + 1..summands.len() {
            if summands[a] == summands[b] {
                return Err(Error::DuplicateSummand);
            }
        }
    }
    let terms = formal_sum_power(p, summands.len(), i, n)?;
    Ok(Expansion { p, n, nsummands: summands.len(), power: i, terms })
}

/// The formal expansion for r summands.
pub fn formal_sum_power(p: u64, r: usize, i: u64, n: usize) -> Result<Vec<SumTerm>> {
    if r > 2 && p == 2 {
        return Err(Error::CharTwoUnsupported);
    }
    let modn = pow_u64(p, n as u32);
    if n == 0 {
        return Ok(vec![]);
    }
    if i == 0 {
        return Ok(vec![SumTerm { level: 0, exps: vec![0; r], coeff: 1 % modn }]);
    }
    match r {
        0 => Ok(vec![]),
        1 => Ok(vec![SumTerm { level: 0, exps: vec![i], coeff: 1 % modn }]),
        2 => Ok(two_sum_expansion(p, n, i)?.as_ref().clone()),
        _ => {
            // [b + a_r]^i with b = a_1 + … + a_{r−1}
            let outer = two_sum_expansion(p, n, i)?;
            let mut acc: BTreeMap<(usize, Vec<u64>), u64> = BTreeMap::new();
            for t in outer.iter() {
                let (l, m1, m2) = (t.level, t.exps[0], t.exps[1]);
                let inner = formal_sum_power(p, r - 1, m1, n - l)?;
                for s in inner {
                    let level = l + s.level;
                    if level >= n {
                        continue;
                    }
                    let mut exps = s.exps.clone();
                    exps.push(pow_u64(p, s.level as u32) * m2);
                    let c = (t.coeff as u128 * s.coeff as u128 % modn as u128) as u64;
                    let ent = acc.entry((level, exps)).or_insert(0);
                    *ent = (*ent + c) % modn;
                }
            }
            Ok(acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|((level, exps), coeff)| SumTerm { level, exps, coeff })
                .collect())
        }
    }
}

impl Expansion {
    /// Evaluate the expansion with Witt arithmetic at concrete summands.
    pub fn evaluate(&self, summands: &[Laurent]) -> Result<WittVector<Laurent>> {
        let proto = &summands[0];
        let mut acc = WittVector::new(self.p, vec![proto.zero_like(); self.n]);
        for t in &self.terms {
            let mut prod = proto.one_like();
            for (a, &m) in summands.iter().zip(&t.exps) {
                prod = prod.mul(&a.pow(m));
            }
            let w = teichmuller(self.p, &prod, self.n - t.level).verschiebung_pow(t.level);
            acc = acc.add(&w.scalar_mul_char_p(t.coeff as i64)?)?;
        }
        Ok(acc)
    }
}

/// ∏ V^{s_i}([a]^{d_i}) = p^{Σ s_i − s_max} V^{s_max}([a]^{Σ p^{s_max − s_i} d_i}).
/// Returns (exponent of p, s_max, combined exponent vector).
pub fn v_product_normalize(p: u64, factors: &[(usize, Vec<i64>)]) -> (u32, usize, Vec<i64>) {
    assert!(!factors.is_empty());
    let smax = factors.iter().map(|f| f.0).max().unwrap();
    let ssum: usize = factors.iter().map(|f| f.0).sum();
    let len = factors[0].1.len();
    let mut e = vec![0i64; len];
    for (s, d) in factors {
        let w = pow_u64(p, (smax - s) as u32) as i64;
        for (x, y) in e.iter_mut().zip(d) {
            *x += w * y;
        }
    }
    ((ssum - smax) as u32, smax, e)
}

/// Evaluate a list of (coefficient, level, monomial) terms in W_n of a Laurent ring.
pub fn witt_from_terms(p: u64, n: usize, proto: &Laurent, terms: &[(u64, usize, Mono)]) -> Result<WittVector<Laurent>> {
    let mut acc = WittVector::new(p, vec![proto.zero_like(); n]);
    for (c, l, m) in terms {
        if *l >= n {
            continue;
        }
        let w = teichmuller(p, &proto.mono_like(m.clone(), 1), n - l).verschiebung_pow(*l);
        acc = acc.add(&w.scalar_mul_char_p(*c as i64)?)?;
    }
    Ok(acc)
}

/// Unit part and valuation of an integer modulo p^e.
pub fn split_unit(x: u64, p: u64, e: u32) -> Option<(u32, u64)> {
    let m = pow_u64(p, e);
    let x = x % m;
    if x == 0 {
        return None;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    debug_assert!(inv_mod(y % m, m).is_some());
    Some((v, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, v: i64) -> PrimeFieldElem {
        PrimeFieldElem::new(p, v)
    }

    fn poly_from(nv: usize, t: &[(&[u32], i64)]) -> IntPoly {
        let mut r = IntPoly::zero(nv);
        for (m, c) in t {
            r = r.add(&IntPoly { nvars: nv, terms: [(m.to_vec(), BigInt::from(*c))].into_iter().collect() });
        }
        r
    }

    #[test]
    fn sum_and_product_polys_small() {
        let u = UniversalWittPolys::build(2, 2).unwrap();
        // interleaved variables (X1, Y1, X2, Y2)
        assert_eq!(u.sum_polys[0], poly_from(4, &[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], 1)]));
        assert_eq!(
            u.sum_polys[1],
            poly_from(4, &[(&[0, 0, 1, 0], 1), (&[0, 0, 0, 1], 1), (&[1, 1, 0, 0], -1)])
        );
        assert_eq!(
            u.prod_polys[1],
            poly_from(4, &[(&[2, 0, 0, 1], 1), (&[0, 2, 1, 0], 1), (&[0, 0, 1, 1], 2)])
        );
        let u3 = UniversalWittPolys::build(3, 2).unwrap();
        assert_eq!(
            u3.sum_polys[1],
            poly_from(4, &[(&[0, 0, 1, 0], 1), (&[0, 0, 0, 1], 1), (&[2, 1, 0, 0], -1), (&[1, 2, 0, 0], -1)])
        );
        assert!(u.verify_ghost_symbolic());
        assert!(u3.verify_ghost_symbolic());
    }

    #[test]
    fn ghost_examples() {
        let x = WittVector::new(2, vec![Zz::from_i64(0), Zz::from_i64(1)]);
        assert_eq!(ghost(&x), vec![BigInt::from(0), BigInt::from(2)]);
        let y = WittVector::new(2, vec![Zz::from_i64(1), Zz::from_i64(1)]);
        assert_eq!(ghost(&y), vec![BigInt::from(1), BigInt::from(3)]);
        let t = teichmuller(3, &Zz::from_i64(2), 3);
        assert_eq!(ghost(&t), vec![BigInt::from(2), BigInt::from(8), BigInt::from(512)]);
        let z = WittVector::new(2, vec![fp(2, 1), fp(2, 0)]);
        assert_eq!(ghost_checked(&z), Err(Error::TorsionRing));
    }

    #[test]
    fn one_plus_one_is_two() {
        let one = teichmuller(2, &fp(2, 1), 2);
        let s = one.add(&one).unwrap();
        assert_eq!(s.coords, vec![fp(2, 0), fp(2, 1)]);
        assert_eq!(witt_fp_to_int(&s), 2);
    }

    #[test]
    fn tilde_w_examples() {
        let t = |c: i64, e: i64| Laurent::monomial(2, 1, &[], &[e], c).unwrap();
        let zero = Laurent::zero(2, 1, 1, &[]);
        let x = WittVector::new(2, vec![t(1, 1), zero.clone()]);
        assert_eq!(tilde_w(&x), Laurent::monomial(2, 2, &[], &[2], 1).unwrap());
        let y = WittVector::new(2, vec![zero.clone(), t(1, 1)]);
        assert_eq!(tilde_w(&y), Laurent::monomial(2, 2, &[], &[1], 2).unwrap());
        let z = WittVector::new(2, vec![t(1, 1), t(1, 3)]);
        let img = Laurent::from_terms(2, 2, 1, &[], vec![(vec![2], 1), (vec![3], 2)]).unwrap();
        assert_eq!(tilde_w(&z), img);
        assert_eq!(tilde_w_inverse(&img, 1).unwrap(), z);
        let bad = Laurent::monomial(2, 2, &[], &[1], 1).unwrap();
        assert!(matches!(tilde_w_inverse(&bad, 1), Err(Error::NotInImage(_))));
        let f = WittVector::new(2, vec![t(1, 1), zero]);
        assert_eq!(tilde_f(&f), Laurent::monomial(2, 2, &[], &[4], 1).unwrap());
    }

    #[test]
    fn two_summand_expansion_p2() {
        let terms = formal_sum_power(2, 2, 1, 2).unwrap();
        let want = vec![
            SumTerm { level: 0, exps: vec![0, 1], coeff: 1 },
            SumTerm { level: 0, exps: vec![1, 0], coeff: 1 },
            SumTerm { level: 1, exps: vec![1, 1], coeff: 1 },
        ];
        assert_eq!(terms, want);
    }

    #[test]
    fn expansion_refusals() {
        let r = Laurent::zero(2, 1, 3, &[]);
        let a = r.mono_like(vec![1, 0, 0], 1);
        let b = r.mono_like(vec![0, 1, 0], 1);
        let c = r.mono_like(vec![0, 0, 1], 1);
        assert_eq!(teichmuller_sum_power(2, &[a.clone(), b.clone(), c], 1, 2), Err(Error::CharTwoUnsupported));
        assert_eq!(teichmuller_sum_power(2, &[a.clone(), a], 1, 2), Err(Error::DuplicateSummand));
        let e = teichmuller_sum_power(3, &[b], 0, 2).unwrap();
        assert_eq!(e.terms, vec![SumTerm { level: 0, exps: vec![0], coeff: 1 }]);
    }

    #[test]
    fn v_product_examples() {
        assert_eq!(v_product_normalize(2, &[(1, vec![1, 0]), (1, vec![0, 1])]), (1, 1, vec![1, 1]));
        assert_eq!(v_product_normalize(2, &[(1, vec![3]), (2, vec![5])]), (1, 2, vec![11]));
        assert_eq!(v_product_normalize(3, &[(2, vec![4, 1])]), (0, 2, vec![4, 1]));
    }

    #[test]
    fn teichmuller_digit_roundtrip() {
        for p in [2u64, 3, 5] {
            for n in 1..=3usize {
                for k in 0..pow_u64(p, n as u32) {
                    assert_eq!(witt_fp_to_int(&int_to_witt_fp(p, n, k)), k);
                }
            }
        }
    }
}
