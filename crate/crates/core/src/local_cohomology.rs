//! Local cohomology H̃^{d−j}_{P^j}(P^d, W_nO) in its monomial description.
//!
//! Classes are W_n(F_p)-combinations of symbols V^l([z^u]) with u in the
//! region I (u_0..u_j ≥ 0, u_{j+1}..u_d < 0, Σu = 0); symbols with some
//! u_b ≥ 0 for b > j lie in a chart ring and vanish in the cokernel.
//! Since p·V^l([z^u]) = V^{l+1}([z^{pu}]), every symbol is a multiple of a
//! root V^{l_0}([z^{u_0}]) with l_0 = 0 or p ∤ u_0, and a class is stored as
//! root ↦ coefficient mod p^{n−l_0}.

use crate::error::{Error, Result};
use crate::linalg::rank_fp;
use crate::rings::{binom_mod, binom_vp, pow_u64, rem_i, vp, Laurent, Mono};
use crate::weyl::{is_global, y_homogeneous, ChartAtlas, ChartOp, WeylElement};
use crate::witt_core::{formal_sum_power, teich_int, witt_from_terms, WittVector};
use crate::witt_diff::{monomial_decompose, WittDiffOp};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type IndexVec = Vec<i64>;

/// u_0..u_j ≥ 0, u_{j+1}..u_d < 0 and Σ u = 0.
pub fn in_region(u: &[i64], j: usize) -> bool {
    u.iter().sum::<i64>() == 0 && u[..=j].iter().all(|&x| x >= 0) && u[j + 1..].iter().all(|&x| x < 0)
}

fn killed(u: &[i64], j: usize) -> bool {
    u[j + 1..].iter().any(|&x| x >= 0)
}

/// Elements of I with |u_b| ≤ bound for b > j (the top part is then any
/// nonnegative vector of the complementary sum).
pub fn enumerate_index(d: usize, j: usize, bound: i64) -> Vec<IndexVec> {
    let mut out = Vec::new();
    if j >= d || bound < 1 {
        return out;
    }
    let nb = d - j;
    let mut bot = vec![1i64; nb];
    loop {
        let s: i64 = bot.iter().sum();
        for top in crate::rings::graded_basis(j + 1, s, &vec![(0, s); j + 1]).basis {
            let mut u = top.clone();
            u.extend(bot.iter().map(|x| -x));
            out.push(u);
        }
        let mut k = 0;
        loop {
            if k == nb {
                out.sort();
                return out;
            }
            bot[k] += 1;
            if bot[k] <= bound {
                break;
            }
            bot[k] = 1;
            k += 1;
        }
    }
}

/// I_j: the elements of I with u_b = −1 for every b > j.
pub fn index_j(d: usize, j: usize) -> Vec<IndexVec> {
    enumerate_index(d, j, 1)
}

/// A class Σ c·V^l([z^u]) in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    pub j: usize,
    terms: BTreeMap<(usize, IndexVec), u64>,
}

impl CohClass {
    pub fn zero(p: u64, n: usize, d: usize, j: usize) -> Self {
        CohClass { p, n, d, j, terms: BTreeMap::new() }
    }

    pub fn symbol(p: u64, n: usize, d: usize, j: usize, l: usize, u: &[i64], c: i64) -> Result<Self> {
        let mut x = CohClass::zero(p, n, d, j);
        x.add_symbol(l, u, c)?;
        Ok(x)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, IndexVec), u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add c·V^l([z^u]), applying the kill rule and root normalization.
    pub fn add_symbol(&mut self, l: usize, u: &[i64], c: i64) -> Result<()> {
        if u.len() != self.d + 1 {
            return Err(Error::Mismatch(format!("index vector of length {}", u.len())));
        }
        if u.iter().sum::<i64>() != 0 {
            return Err(Error::Mismatch(format!("{:?} is not of degree 0", u)));
        }
        if l >= self.n || killed(u, self.j) {
            return Ok(());
        }
        if u[..=self.j].iter().any(|&x| x < 0) {
            return Err(Error::NegativeExponentViolation(format!("{:?}", u)));
        }
        let p = self.p;
        let (mut l, mut u) = (l, u.to_vec());
        let mut c = c as i128;
        // V^l([z^{pu}]) = p·V^{l−1}([z^u])
        while l > 0 && u.iter().all(|&x| x % p as i64 == 0) {
            u.iter_mut().for_each(|x| *x /= p as i64);
            l -= 1;
            c *= p as i128;
        }
        let m = pow_u64(p, (self.n - l) as u32);
        let key = (l, u);
        let ent = self.terms.entry(key.clone()).or_insert(0);
        *ent = ((*ent as u128 + rem_i(c, m) as u128) % m as u128) as u64;
        if *ent == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.p, self.n, self.d, self.j) != (o.p, o.n, o.d, o.j) {
            return Err(Error::Mismatch("classes in different groups".into()));
        }
        let mut out = self.clone();
        for ((l, u), &c) in &o.terms {
            out.add_symbol(*l, u, c as i64)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = CohClass::zero(self.p, self.n, self.d, self.j);
        for ((l, u), &a) in &self.terms {
            let m = pow_u64(self.p, (self.n - l) as u32) as i128;
            let v = (a as i128 * rem_i(c as i128, m as u64) as i128) % m;
            out.add_symbol(*l, u, v as i64).unwrap();
        }
        out
    }

    /// The class as a Witt vector over F_p[z_0^{±1}, …, z_d^{±1}].
    pub fn to_witt(&self) -> Result<WittVector<Laurent>> {
        let proto = self.proto();
        let terms: Vec<(u64, usize, Mono)> = self.terms.iter().map(|((l, u), &c)| (c, *l, u.clone())).collect();
        witt_from_terms(self.p, self.n, &proto, &terms)
    }

    fn proto(&self) -> Laurent {
        let neg: Vec<usize> = (0..=self.d).collect();
        Laurent::zero(self.p, 1, self.d + 1, &neg)
    }
}

/// Project a degree-0 Witt vector to its class: each coordinate [x_l] is
/// expanded as a Teichmüller sum, then symbols are killed or normalized.
pub fn class_reduce(raw: &WittVector<Laurent>, d: usize, j: usize) -> Result<CohClass> {
    let p = raw.p;
    let n = raw.len();
    let mut out = CohClass::zero(p, n, d, j);
    for (l, x) in raw.coords.iter().enumerate() {
        if x.is_empty() {
            continue;
        }
        let summands: Vec<(u64, Mono)> = x.terms().iter().map(|(m, &c)| (c, m.clone())).collect();
        for (c, l2, u) in teichmuller_sum_symbols(p, n - l, &summands)? {
            out.add_symbol(l + l2, &u, c as i64)?;
        }
    }
    Ok(out)
}

/// [Σ_t β_t z^{w_t}] in W_len as Σ c·V^s([z^u]).
fn teichmuller_sum_symbols(p: u64, len: usize, summands: &[(u64, Mono)]) -> Result<Vec<(u64, usize, Mono)>> {
    let modn = pow_u64(p, len as u32);
    if summands.len() == 1 || len == 1 {
        return Ok(summands.iter().map(|(b, w)| (teich_int(p, len as u32, *b), 0, w.clone())).collect());
    }
    let terms = formal_sum_power(p, summands.len(), 1, len)?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut c = t.coeff as u128;
        let mut u = vec![0i64; summands[0].1.len()];
        for ((b, w), &e) in summands.iter().zip(&t.exps) {
            if e == 0 {
                continue;
            }
            c = c * crate::rings::pow_mod(teich_int(p, len as u32, *b), e, modn) as u128 % modn as u128;
            for (x, y) in u.iter_mut().zip(w) {
                *x += e as i64 * y;
            }
        }
        out.push((c as u64, t.level, u));
    }
    Ok(out)
}

/// y_{ab}^{[r]} = z_a^r ∂_b^{[r]} on a class.
///
/// n = 1: z^m ↦ C(m_b, r) z^{m + r e_a − r e_b}. For n > 1 the operator is the
/// w̃-conjugate of z_a^r ∂_b^{[r]} itself (exponents not multiplied by p^{n−1},
/// which would leave degree 0): w̃(V^l([z^s])) = p^l z^{s p^{n−1−l}} goes to
/// N z^E with N = p^l C(s_b p^{n−1−l}, r), E = s p^{n−1−l} + r e_a − r e_b.
/// This commutes with V.
pub fn y_action(a: usize, b: usize, r: u64, x: &CohClass) -> Result<CohClass> {
    if a == b || a > x.d || b > x.d {
        return Err(Error::RangeError(format!("y_{{{}{}}} on P^{}", a, b, x.d)));
    }
    let p = x.p;
    let n = x.n;
    let mut out = CohClass::zero(p, n, x.d, x.j);
    let e = n as u32;
    for ((l0, s), &c) in &x.terms {
        let q = pow_u64(p, (n - 1 - l0) as u32) as i64;
        let top = s[b] * q;
        let Some(vb) = binom_vp(top, r, p) else { continue };
        let v = *l0 as u32 + vb;
        if v >= e {
            continue;
        }
        let unit = binom_mod(top, r, p, e + vb) / pow_u64(p, vb) % pow_u64(p, e);
        let mut ex: Vec<i64> = s.iter().map(|t| t * q).collect();
        ex[a] += r as i64;
        ex[b] -= r as i64;
        let k = pow_u64(p, e - 1 - v) as i64;
        if ex.iter().any(|t| t % k != 0) {
            return Err(Error::IntegralityFailure(format!("exponent {:?} not divisible by {}", ex, k)));
        }
        let root: Vec<i64> = ex.iter().map(|t| t / k).collect();
        let m = pow_u64(p, e) as u128;
        out.add_symbol(v as usize, &root, (c as u128 * unit as u128 % m) as i64)?;
    }
    Ok(out)
}

/// y_{ab}^{[r]} through conjugation by w̃ (plain application when n = 1),
/// one root term at a time, then peeled into symbols.
pub fn y_action_conjugated(a: usize, b: usize, r: u64, x: &CohClass) -> Result<CohClass> {
    let base = y_homogeneous(x.p, x.n as u32, a, b, r, x.d);
    apply_operator_conjugated(&base, x)
}

/// w̃-conjugate of an operator over Z/p^n, applied to a class.
pub fn apply_operator_conjugated(base: &WeylElement, x: &CohClass) -> Result<CohClass> {
    let op = WittDiffOp { p: x.p, n: x.n - 1, lift: base.clone(), provenance: base.reduce_to(1) };
    let mut out = CohClass::zero(x.p, x.n, x.d, x.j);
    for ((l, u), &c) in &x.terms {
        let w = witt_from_terms(x.p, x.n, &x.proto(), &[(c, *l, u.clone())])?;
        let y = op.apply_witt(&w)?;
        for (l2, m, c2) in monomial_decompose(&y)? {
            out.add_symbol(l2, &m, teich_int(x.p, x.n as u32, c2) as i64)?;
        }
    }
    Ok(out)
}

/// One applied move of the generation algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenStep {
    pub from: IndexVec,
    pub to: IndexVec,
    pub op: String,
    pub coeff: u64,
}

/// Outcome of a generation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub p: u64,
    pub d: usize,
    pub j: usize,
    pub bound: i64,
    pub reached: BTreeSet<IndexVec>,
    pub missing: Vec<IndexVec>,
    pub steps: Vec<GenStep>,
    /// (limit r·p+1 capped by the bound, all of I within that limit reached after round r)
    pub rounds: Vec<(i64, bool)>,
    /// Every operator used is a global differential operator on P^d.
    pub operators_global: bool,
}

impl GenerationReport {
    pub fn complete(&self) -> bool {
        self.missing.is_empty()
    }
}

fn falling(m: i64, k: u64, p: u64) -> u64 {
    let mut c: i128 = 1;
    for i in 0..k as i64 {
        c = c * rem_i((m - i) as i128, p) as i128 % p as i128;
    }
    c as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    /// y_{ab}^k, k < p
    Power { a: usize, b: usize, k: u64 },
    /// y_{ab}^{[p]}
    Divided { a: usize, b: usize },
    /// z_a^{p−1} z_x ∂_a^{[p]}
    Shift { a: usize, x: usize },
    /// y_{xa} = z_x ∂_a
    Lower { a: usize, x: usize },
}

impl Move {
    fn operator(&self, p: u64, d: usize) -> WeylElement {
        match *self {
            Move::Power { a, b, .. } => y_homogeneous(p, 1, a, b, 1, d),
            Move::Divided { a, b } => y_homogeneous(p, 1, a, b, p, d),
            Move::Shift { a, x } => {
                let mut z = vec![0; d + 1];
                z[a] = p as i64 - 1;
                z[x] = 1;
                let mut o = vec![0; d + 1];
                o[a] = p;
                WeylElement::term(p, 1, z, o, 1)
            }
            Move::Lower { a, x } => y_homogeneous(p, 1, x, a, 1, d),
        }
    }
    fn name(&self) -> String {
        match *self {
            Move::Power { a, b, k } => format!("y_{}{}^{}", a, b, k),
            Move::Divided { a, b } => format!("y_{}{}^[p]", a, b),
            Move::Shift { a, x } => format!("T_{}{}^(p-1) y_{}{}^[p]", a, x, x, a),
            Move::Lower { a, x } => format!("y_{}{}", x, a),
        }
    }
}

/// Moves available at m, with their targets and coefficients mod p.
fn moves_at(m: &[i64], p: u64, j: usize) -> Vec<(Move, IndexVec, u64)> {
    let d = m.len() - 1;
    let pi = p as i64;
    let mut out = Vec::new();
    for a in 0..=j {
        for b in j + 1..=d {
            if m[b].rem_euclid(pi) != pi - 1 {
                continue;
            }
            for k in 1..p {
                let mut t = m.to_vec();
                t[a] += k as i64;
                t[b] -= k as i64;
                out.push((Move::Power { a, b, k }, t, falling(m[b], k, p)));
            }
            let mut t = m.to_vec();
            t[a] += pi;
            t[b] -= pi;
            out.push((Move::Divided { a, b }, t, binom_mod(m[b], p, p, 1)));
        }
        if j > 0 {
            for x in 0..=j {
                if x == a {
                    continue;
                }
                let mut t = m.to_vec();
                t[a] -= 1;
                t[x] += 1;
                if m[a] >= pi && m[a] < 2 * pi {
                    out.push((Move::Shift { a, x }, t, binom_mod(m[a], p, p, 1)));
                } else if m[a] > 0 && m[a] < pi {
                    out.push((Move::Lower { a, x }, t, rem_i(m[a] as i128, p)));
                }
            }
        }
    }
    out
}

/// Run Steps 1–3 at n = 1 from the seeds I_j, in rounds r = 1, 2, … with
/// bottom entries capped at min(r·p + 1, bound). Every applied coefficient
/// must be a unit; a vanishing one is reported as `CoefficientVanished`.
pub fn generation_run(p: u64, d: usize, j: usize, bound: i64) -> Result<GenerationReport> {
    if j >= d {
        return Err(Error::RangeError("the module is zero for j = d".into()));
    }
    let mut reached: BTreeSet<IndexVec> = index_j(d, j).into_iter().collect();
    let mut steps = Vec::new();
    let mut rounds = Vec::new();
    let mut used: BTreeSet<Move> = BTreeSet::new();
    let mut r = 1i64;
    loop {
        let limit = (r * p as i64 + 1).min(bound);
        let mut queue: VecDeque<IndexVec> = reached.iter().cloned().collect();
        while let Some(m) = queue.pop_front() {
            for (mv, t, c) in moves_at(&m, p, j) {
                if t[j + 1..].iter().any(|&x| -x > limit) || !in_region(&t, j) {
                    continue;
                }
                if c % p == 0 {
                    return Err(Error::CoefficientVanished(format!("{} applied to {:?}", mv.name(), m)));
                }
                used.insert(match mv {
                    Move::Power { a, b, .. } => Move::Power { a, b, k: 1 },
                    other => other,
                });
                if reached.insert(t.clone()) {
                    steps.push(GenStep { from: m.clone(), to: t.clone(), op: mv.name(), coeff: c });
                    queue.push_back(t);
                }
            }
        }
        let covered = enumerate_index(d, j, limit).iter().all(|u| reached.contains(u));
        rounds.push((limit, covered));
        if limit >= bound {
            break;
        }
        r += 1;
    }
    let missing: Vec<IndexVec> = enumerate_index(d, j, bound).into_iter().filter(|u| !reached.contains(u)).collect();
    let atlas = ChartAtlas::new(d);
    let operators_global = used.iter().all(|mv| is_global(&ChartOp::Homogeneous(mv.operator(p, d)), &atlas, 2));
    Ok(GenerationReport { p, d, j, bound, reached, missing, steps, rounds, operators_global })
}

/// Elementary generators of the parabolic P_j = P_{(j+1, d−j)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParabolicGen {
    /// z^m ↦ ∏ t_i^{−m_i} z^m
    Torus(Vec<u64>),
    /// z_i ↦ z_i + c·z_k
    Unipotent { i: usize, k: usize, c: u64 },
}

impl ParabolicGen {
    pub fn in_parabolic(&self, d: usize, j: usize) -> bool {
        match self {
            ParabolicGen::Torus(t) => t.len() == d + 1 && t.iter().all(|&x| x != 0),
            ParabolicGen::Unipotent { i, k, c } => i != k && *i <= d && *k <= d && *c != 0 && (*i <= j || *k > j),
        }
    }

    /// All elementary generators over F_p.
    pub fn all(p: u64, d: usize, j: usize) -> Vec<ParabolicGen> {
        let mut out = Vec::new();
        for i in 0..=d {
            for t in 2..p {
                let mut v = vec![1; d + 1];
                v[i] = t;
                out.push(ParabolicGen::Torus(v));
            }
        }
        for i in 0..=d {
            for k in 0..=d {
                for c in 1..p {
                    let g = ParabolicGen::Unipotent { i, k, c };
                    if g.in_parabolic(d, j) {
                        out.push(g);
                    }
                }
            }
        }
        out
    }
}

/// g·z^u as a list of (coefficient in F_p, exponent). For an inverted
/// variable the geometric series is cut at the first term whose whole
/// Teichmüller contribution is killed: every product of Σe_t = p^s ≤ p^{len−1}
/// summands involving a term with t > T has z_k-exponent ≥ 0.
fn substitute(g: &ParabolicGen, u: &[i64], p: u64, len: usize) -> Vec<(u64, Mono)> {
    match g {
        ParabolicGen::Torus(t) => {
            let mut c = 1u64;
            for (i, &x) in u.iter().enumerate() {
                let inv = crate::rings::inv_mod(t[i] % p, p).unwrap();
                let base = if x >= 0 { inv } else { t[i] % p };
                c = c * crate::rings::pow_mod(base, x.unsigned_abs(), p) % p;
            }
            vec![(c, u.to_vec())]
        }
        ParabolicGen::Unipotent { i, k, c } => {
            let (i, k) = (*i, *k);
            let ui = u[i];
            let terms: Vec<i64> = if ui >= 0 {
                (0..=ui).collect()
            } else {
                let cap = if u[k] < 0 { -u[k] * pow_u64(p, len as u32 - 1) as i64 - 1 } else { 0 };
                (0..=cap.max(0)).collect()
            };
            let mut out = Vec::new();
            for t in terms {
                let b = binom_mod(ui, t as u64, p, 1) * crate::rings::pow_mod(*c % p, t as u64, p) % p;
                if b == 0 {
                    continue;
                }
                let mut w = u.to_vec();
                w[i] -= t;
                w[k] += t;
                out.push((b, w));
            }
            out
        }
    }
}

/// g acting on a class through Teichmüller-sum expansion of g·[z^u].
pub fn parabolic_action(g: &ParabolicGen, x: &CohClass) -> Result<CohClass> {
    if !g.in_parabolic(x.d, x.j) {
        return Err(Error::RangeError(format!("{:?} is not in P_{}", g, x.j)));
    }
    let p = x.p;
    let mut out = CohClass::zero(p, x.n, x.d, x.j);
    for ((l, u), &c) in &x.terms {
        let len = x.n - l;
        let summands = substitute(g, u, p, len);
        if summands.is_empty() {
            continue;
        }
        let m = pow_u64(p, len as u32) as u128;
        for (c2, s, w) in teichmuller_sum_symbols(p, len, &summands)? {
            out.add_symbol(l + s, &w, (c as u128 * c2 as u128 % m) as i64)?;
        }
    }
    Ok(out)
}

/// The same action computed with Witt arithmetic on the substituted
/// polynomial (greedy monomial peeling instead of the formal expansion).
pub fn parabolic_action_direct(g: &ParabolicGen, x: &CohClass) -> Result<CohClass> {
    let p = x.p;
    let mut out = CohClass::zero(p, x.n, x.d, x.j);
    for ((l, u), &c) in &x.terms {
        let len = x.n - l;
        let mut f = x.proto();
        for (b, w) in substitute(g, u, p, len) {
            f = crate::rings::CommRing::add(&f, &f.mono_like(w, b as i64));
        }
        let t = crate::witt_core::teichmuller(p, &f, len).verschiebung_pow(*l);
        let t = WittVector::new(p, {
            let mut v = vec![x.proto(); *l];
            v.extend(t.coords[*l..].iter().cloned());
            v
        });
        let t = t.scalar_mul_char_p(c as i64)?;
        for (l2, m, c2) in monomial_decompose(&t)? {
            out.add_symbol(l2, &m, teich_int(p, x.n as u32, c2) as i64)?;
        }
    }
    Ok(out)
}

/// N_{n,j}: spanned by V^l(∏_{m∈I_j}(T^m)^{i_m}) with Σ i_m = p^r, r ≤ l < n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorModule {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    pub j: usize,
    /// (l, u) with u = Σ i_m·m.
    pub generators: Vec<(usize, IndexVec)>,
}

fn is_generator_symbol(p: u64, d: usize, j: usize, l: usize, u: &[i64]) -> bool {
    let b = u[j + 1];
    if b >= 0 || u[j + 1..].iter().any(|&x| x != b) || u[..=j].iter().any(|&x| x < 0) {
        return false;
    }
    let k = -b as u64;
    let r = vp(k as i128, p).unwrap();
    k == pow_u64(p, r) && r as usize <= l && u.iter().sum::<i64>() == 0 && u.len() == d + 1
}

impl GeneratorModule {
    pub fn new(p: u64, n: usize, d: usize, j: usize) -> Self {
        let mut generators = Vec::new();
        for l in 0..n {
            for r in 0..=l {
                let k = pow_u64(p, r as u32) as i64;
                let s = (d - j) as i64 * k;
                for top in crate::rings::graded_basis(j + 1, s, &vec![(0, s); j + 1]).basis {
                    let mut u = top;
                    u.extend(std::iter::repeat_n(-k, d - j));
                    generators.push((l, u));
                }
            }
        }
        GeneratorModule { p, n, d, j, generators }
    }

    pub fn generator_class(&self, idx: usize) -> CohClass {
        let (l, u) = &self.generators[idx];
        CohClass::symbol(self.p, self.n, self.d, self.j, *l, u, 1).unwrap()
    }

    /// Membership: each root coefficient c at (l_0, u_0) must be divisible
    /// by p^k for some k with V^{l_0+k}([z^{p^k u_0}]) a generator.
    pub fn contains(&self, x: &CohClass) -> bool {
        let p = self.p;
        x.terms.iter().all(|((l0, u0), &c)| {
            let v = vp(c as i128, p).unwrap() as usize;
            (0..=v).any(|k| {
                let l = l0 + k;
                let q = pow_u64(p, k as u32) as i64;
                let u: Vec<i64> = u0.iter().map(|t| t * q).collect();
                l < self.n && is_generator_symbol(p, self.d, self.j, l, &u)
            })
        })
    }
}

/// Outcome of a stability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    pub j: usize,
    pub generators: usize,
    pub group_elements: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

pub fn check_stability(p: u64, n: usize, d: usize, j: usize) -> Result<StabilityReport> {
    let module = GeneratorModule::new(p, n, d, j);
    let gens = ParabolicGen::all(p, d, j);
    let mut failures = Vec::new();
    let mut checks = 0;
    for idx in 0..module.generators.len() {
        let x = module.generator_class(idx);
        for g in &gens {
            let y = parabolic_action(g, &x)?;
            checks += 1;
            if !module.contains(&y) {
                failures.push(format!("{:?} on V^{}([z^{:?}])", g, module.generators[idx].0, module.generators[idx].1));
            }
        }
    }
    Ok(StabilityReport { p, n, d, j, generators: module.generators.len(), group_elements: gens.len(), checks, failures })
}

/// Layer dimensions of the class module inside |u_i| ≤ box, computed from
/// the root normal form, against the top Čech cohomology of the cover
/// {D_+(z_b) : b > j} of P^d ∖ P^j (minus the constants when d − j = 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub class_layers: Vec<u64>,
    pub cech_layers: Vec<u64>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.class_layers == self.cech_layers
    }
}

pub fn small_case_crosscheck(p: u64, d: usize, j: usize, n: usize, bx: i64) -> Result<CrossCheck> {
    if j == d {
        return Ok(CrossCheck { class_layers: vec![0; n], cech_layers: vec![0; n] });
    }
    if !(1..=2).contains(&(d - j)) {
        return Err(Error::RangeError("cross-check needs d − j ∈ {1, 2}".into()));
    }
    let all = crate::rings::graded_basis(d + 1, 0, &vec![(-bx, bx); d + 1]).basis;
    // class side: roots in the region, pushed through the layers they occupy
    let mut class_layers = vec![0u64; n];
    for u0 in all.iter().filter(|u| in_region(u, j)) {
        // root levels l_0: 0 always, l_0 > 0 only when p ∤ u_0
        let primitive = u0.iter().any(|x| x % p as i64 != 0);
        for l0 in 0..n {
            if l0 > 0 && !primitive {
                break;
            }
            let mut k = 0;
            while l0 + k < n {
                let q = pow_u64(p, k as u32) as i64;
                if u0.iter().any(|x| (x * q).abs() > bx) {
                    break;
                }
                class_layers[l0 + k] += 1;
                k += 1;
            }
        }
    }
    // Čech side: per exponent, H^{top} of the cover complex via ranks
    let cover: Vec<usize> = (j + 1..=d).collect();
    let top = cover.len() - 1;
    let mut per_exponent = 0u64;
    for u in &all {
        if u[..=j].iter().any(|&x| x < 0) {
            continue;
        }
        let neg: Vec<usize> = (j + 1..=d).filter(|&b| u[b] < 0).collect();
        per_exponent += cover_top_cohomology(&cover, &neg, top, p) as u64;
    }
    if d - j == 1 {
        per_exponent -= 1; // W_n(k) inside H^0
    }
    Ok(CrossCheck { class_layers, cech_layers: vec![per_exponent; n] })
}

/// dim H^k of the Čech complex of faces J ⊆ cover (|J| = k+1) containing `neg`.
fn cover_top_cohomology(cover: &[usize], neg: &[usize], k: usize, p: u64) -> usize {
    let faces = |k: usize| -> Vec<Vec<usize>> {
        let n = cover.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k + 1 {
                let f: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| cover[i]).collect();
                if neg.iter().all(|x| f.contains(x)) {
                    out.push(f);
                }
            }
        }
        out
    };
    let dim = faces(k).len();
    let rk_in = if k == 0 {
        0
    } else {
        let src = faces(k - 1);
        let dst = faces(k);
        let mut m = vec![vec![0u64; src.len()]; dst.len()];
        for (r, f) in dst.iter().enumerate() {
            for t in 0..f.len() {
                let mut s = f.clone();
                s.remove(t);
                if let Some(c) = src.iter().position(|x| *x == s) {
                    m[r][c] = if t % 2 == 0 { 1 } else { p - 1 };
                }
            }
        }
        if src.is_empty() || dst.is_empty() {
            0
        } else {
            rank_fp(&m, p)
        }
    };
    dim - rk_in
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(index_j(2, 0), vec![vec![2, -1, -1]]);
        assert_eq!(index_j(2, 1), vec![vec![0, 1, -1], vec![1, 0, -1]]);
        assert!(enumerate_index(2, 2, 5).is_empty());
        let all = enumerate_index(3, 1, 4);
        assert!(all.iter().all(|u| in_region(u, 1)));
        assert!(index_j(3, 1).iter().all(|u| all.contains(u)));
    }

    #[test]
    fn normal_form_rules() {
        let x = CohClass::symbol(3, 2, 2, 0, 0, &[1, 0, -1], 1).unwrap();
        assert!(x.is_zero());
        let y = CohClass::symbol(3, 2, 2, 0, 1, &[6, -3, -3], 1).unwrap();
        let z = CohClass::symbol(3, 2, 2, 0, 0, &[2, -1, -1], 3).unwrap();
        assert_eq!(y, z);
        // p·[z^u] = V([z^{pu}])
        let w = CohClass::symbol(3, 2, 2, 0, 0, &[2, -1, -1], 1).unwrap().scale(3);
        assert_eq!(w, y);
        assert!(CohClass::symbol(3, 2, 2, 0, 0, &[2, -1, -1], 9).unwrap().is_zero());
    }

    #[test]
    fn class_reduce_matches_symbols() {
        let x = CohClass::symbol(3, 2, 2, 0, 0, &[2, -1, -1], 4).unwrap()
            .add(&CohClass::symbol(3, 2, 2, 0, 1, &[4, -1, -3], 2).unwrap())
            .unwrap();
        let w = x.to_witt().unwrap();
        assert_eq!(class_reduce(&w, 2, 0).unwrap(), x);
    }

    #[test]
    fn y_examples() {
        let x = CohClass::symbol(3, 1, 2, 0, 0, &[2, -1, -1], 1).unwrap();
        let y = y_action(0, 1, 1, &x).unwrap();
        assert_eq!(y, CohClass::symbol(3, 1, 2, 0, 0, &[3, -2, -1], -1).unwrap());
        assert_eq!(y_action(0, 1, 0, &x).unwrap(), x);
        // commutes with V at n = 2
        let v = CohClass::symbol(3, 2, 2, 0, 1, &[2, -1, -1], 1).unwrap();
        let lhs = y_action(0, 1, 1, &v).unwrap();
        assert_eq!(lhs, CohClass::symbol(3, 2, 2, 0, 1, &[3, -2, -1], -1).unwrap());
    }

    #[test]
    fn y_two_routes() {
        for (p, n) in [(3u64, 1usize), (3, 2), (2, 2), (3, 3), (5, 2)] {
            for u in enumerate_index(2, 0, 4).into_iter().take(12) {
                for l in 0..n {
                    let x = CohClass::symbol(p, n, 2, 0, l, &u, 1).unwrap();
                    for (a, b) in [(0, 1), (0, 2), (1, 2), (2, 1), (1, 0)] {
                        for r in 0..=(p + 1) {
                            let one = y_action(a, b, r, &x).unwrap();
                            let two = y_action_conjugated(a, b, r, &x).unwrap();
                            assert_eq!(one, two, "p={} n={} y_{}{}^[{}] on V^{}([z^{:?}])", p, n, a, b, r, l, u);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generation_small() {
        let rep = generation_run(3, 2, 0, 7).unwrap();
        assert!(rep.complete(), "{:?}", rep.missing);
        assert!(rep.rounds.iter().all(|r| r.1));
        assert!(rep.operators_global);
        let rep = generation_run(3, 2, 1, 7).unwrap();
        assert!(rep.complete(), "{:?}", rep.missing);
    }

    #[test]
    fn geometric_series_inverse() {
        // (z_1 + c z_2)·(z_1 + c z_2)^{−1} ≡ 1 modulo killed monomials
        let (p, j) = (5u64, 0usize);
        let u = vec![3, -1, -2];
        let g = ParabolicGen::Unipotent { i: 1, k: 2, c: 2 };
        let s = substitute(&g, &u, p, 1);
        // multiply by the substituted z_1 = z_1 + 2 z_2 and compare with z^{u + e_1}
        let mut prod: BTreeMap<Mono, u64> = BTreeMap::new();
        for (b, w) in &s {
            for (c, e) in [(1u64, 1usize), (2, 2)] {
                let mut w2 = w.clone();
                w2[e] += 1;
                *prod.entry(w2).or_insert(0) += b * c % p;
            }
        }
        let surviving: Vec<(Mono, u64)> =
            prod.into_iter().map(|(m, c)| (m, c % p)).filter(|(m, c)| *c != 0 && !killed(m, j)).collect();
        assert_eq!(surviving, vec![(vec![3, 0, -2], 1)].into_iter().filter(|(m, _)| !killed(m, j)).collect::<Vec<_>>());
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn torus_and_expansion_routes() {
        let p = 3;
        for j in 0..2 {
            let module = GeneratorModule::new(p, 2, 2, j);
            for idx in 0..module.generators.len() {
                let x = module.generator_class(idx);
                for g in ParabolicGen::all(p, 2, j) {
                    assert_eq!(parabolic_action(&g, &x).unwrap(), parabolic_action_direct(&g, &x).unwrap(), "{:?}", g);
                }
            }
        }
    }

    #[test]
    fn stability_small() {
        for j in 0..2 {
            let rep = check_stability(3, 1, 2, j).unwrap();
            assert!(rep.failures.is_empty(), "{:?}", rep.failures);
            assert!(!check_stability(3, 2, 2, j).unwrap().failures.is_empty());
        }
    }

    #[test]
    fn stability_breaks_at_length_two() {
        // [a + b + c] with b, c killed still carries V(a²b + ab²) terms
        let x = CohClass::symbol(3, 2, 2, 0, 0, &[2, -1, -1], 1).unwrap();
        let g = ParabolicGen::Unipotent { i: 0, k: 1, c: 1 };
        let y = parabolic_action(&g, &x).unwrap();
        let expect = x
            .add(&CohClass::symbol(3, 2, 2, 0, 1, &[4, -1, -3], 2).unwrap())
            .unwrap()
            .add(&CohClass::symbol(3, 2, 2, 0, 1, &[5, -2, -3], 2).unwrap())
            .unwrap();
        assert_eq!(y, expect);
        let module = GeneratorModule::new(3, 2, 2, 0);
        assert!(module.contains(&x) && !module.contains(&y));
    }

    #[test]
    fn crosscheck_small() {
        for (d, j) in [(1usize, 0usize), (2, 0), (2, 1), (3, 1)] {
            for n in 1..=2 {
                let c = small_case_crosscheck(3, d, j, n, 4).unwrap();
                assert!(c.agrees(), "{:?}", c);
            }
        }
    }
}
