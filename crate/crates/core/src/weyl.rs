//! The crystalline Weyl algebra: operators Σ c·z^e ∂^{[r]} with divided
//! powers as primitive symbols, over Z/p^k.

use crate::error::{Error, Result};
use crate::rings::{binom_mod, pow_u64, rem_i, Laurent, Mono};
use std::collections::BTreeMap;
use std::fmt;

/// Key of a normal-form term: exponent vector of z and multi-order of ∂^{[·]}.
pub type WeylKey = (Mono, Vec<u64>);

/// Normal-form element Σ c·z^e ∂^{[r]} (all z's on the left).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub p: u64,
    pub e: u32,
    pub nvars: usize,
    terms: BTreeMap<WeylKey, u64>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((z, r), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &x) in z.iter().enumerate() {
                if x != 0 {
                    write!(f, "*z{}^{}", i, x)?;
                }
            }
            for (i, &x) in r.iter().enumerate() {
                if x != 0 {
                    write!(f, "*d{}^[{}]", i, x)?;
                }
            }
        }
        Ok(())
    }
}

impl WeylElement {
    pub fn zero(p: u64, e: u32, nvars: usize) -> Self {
        WeylElement { p, e, nvars, terms: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.e)
    }

    pub fn one(p: u64, e: u32, nvars: usize) -> Self {
        Self::term(p, e, vec![0; nvars], vec![0; nvars], 1)
    }

    /// c·z^z ∂^{[r]}.
    pub fn term(p: u64, e: u32, z: Mono, r: Vec<u64>, c: i64) -> Self {
        let mut w = Self::zero(p, e, z.len());
        let c = rem_i(c as i128, w.modulus());
        if c != 0 {
            w.terms.insert((z, r), c);
        }
        w
    }

    /// z_i^k.
    pub fn z_pow(p: u64, e: u32, nvars: usize, i: usize, k: i64) -> Self {
        let mut z = vec![0; nvars];
        z[i] = k;
        Self::term(p, e, z, vec![0; nvars], 1)
    }

    /// ∂_i^{[k]}.
    pub fn d_div(p: u64, e: u32, nvars: usize, i: usize, k: u64) -> Self {
        let mut r = vec![0; nvars];
        r[i] = k;
        Self::term(p, e, vec![0; nvars], r, 1)
    }

    pub fn terms(&self) -> &BTreeMap<WeylKey, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(p: u64, e: u32, nvars: usize, t: impl IntoIterator<Item = (WeylKey, i64)>) -> Self {
        let mut w = Self::zero(p, e, nvars);
        for (k, c) in t {
            let m = w.modulus();
            w.add_term(k, rem_i(c as i128, m));
        }
        w
    }

    fn add_term(&mut self, k: WeylKey, c: u64) {
        let m = self.modulus();
        let c = c % m;
        if c == 0 {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = (*v + c) % m;
                if *v == 0 {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    fn compat(&self, o: &Self) -> Result<()> {
        if self.p != o.p || self.e != o.e || self.nvars != o.nvars {
            return Err(Error::Mismatch("Weyl operands live in different algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compat(o)?;
        let mut r = self.clone();
        for (k, &c) in &o.terms {
            r.add_term(k.clone(), c);
        }
        Ok(r)
    }

    pub fn scale(&self, c: i64) -> Self {
        let m = self.modulus();
        let c = rem_i(c as i128, m);
        let mut r = Self::zero(self.p, self.e, self.nvars);
        for (k, &v) in &self.terms {
            r.add_term(k.clone(), (v as u128 * c as u128 % m as u128) as u64);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(-1))
    }

    /// Composition self ∘ o, normalized with
    /// ∂^{[r]} z^b = Σ_k C(b,k) z^{b−k} ∂^{[r−k]} and ∂^{[a]}∂^{[s]} = C(a+s,s)∂^{[a+s]}.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.compat(o)?;
        let (p, e, m) = (self.p, self.e, self.modulus());
        let mut out = Self::zero(p, e, self.nvars);
        for ((z1, r1), &c1) in &self.terms {
            for ((z2, r2), &c2) in &o.terms {
                // per-variable expansions, then a cartesian product
                let mut partial: Vec<(Mono, Vec<u64>, u64)> = vec![(z1.clone(), vec![], (c1 as u128 * c2 as u128 % m as u128) as u64)];
                for v in 0..self.nvars {
                    let (r, b, s) = (r1[v], z2[v], r2[v]);
                    let mut opts: Vec<(i64, u64, u64)> = Vec::new();
                    for k in 0..=r {
                        let cb = binom_mod(b, k, p, e);
                        if cb == 0 {
                            continue;
                        }
                        let a = r - k;
                        let cc = binom_mod((a + s) as i64, s, p, e);
                        if cc == 0 {
                            continue;
                        }
                        opts.push((b - k as i64, a + s, (cb as u128 * cc as u128 % m as u128) as u64));
                    }
                    let mut next = Vec::with_capacity(partial.len() * opts.len());
                    for (zz, rr, c) in &partial {
                        for &(dz, ord, c2) in &opts {
                            let mut zz2 = zz.clone();
                            zz2[v] += dz;
                            let mut rr2 = rr.clone();
                            rr2.push(ord);
                            next.push((zz2, rr2, (*c as u128 * c2 as u128 % m as u128) as u64));
                        }
                    }
                    partial = next;
                }
                for (zz, rr, c) in partial {
                    out.add_term((zz, rr), c);
                }
            }
        }
        Ok(out)
    }

    /// Apply to a Laurent element with the same coefficient ring:
    /// ∂^{[r]} z^m = Π C(m_i, r_i) z^{m−r}.
    pub fn apply(&self, f: &Laurent) -> Result<Laurent> {
        if f.nvars() != self.nvars || f.p() != self.p || f.exp() != self.e {
            return Err(Error::Mismatch("operator and function live in different rings".into()));
        }
        let (p, e, m) = (self.p, self.e, self.modulus());
        let mut acc: BTreeMap<Mono, u64> = BTreeMap::new();
        for ((z, r), &c) in &self.terms {
            'mono: for (mono, &fc) in f.terms() {
                let mut coef = (c as u128 * fc as u128 % m as u128) as u64;
                let mut out = Vec::with_capacity(self.nvars);
                for v in 0..self.nvars {
                    let b = binom_mod(mono[v], r[v], p, e);
                    if b == 0 {
                        continue 'mono;
                    }
                    coef = (coef as u128 * b as u128 % m as u128) as u64;
                    out.push(mono[v] - r[v] as i64 + z[v]);
                }
                if coef != 0 {
                    let ent = acc.entry(out).or_insert(0);
                    *ent = (*ent + coef) % m;
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| *c != 0).map(|(k, c)| (k, c as i64));
        Laurent::from_terms(p, e, self.nvars, &f.neg_vars(), terms)
    }

    /// Reduce coefficients to Z/p^{e'}.
    pub fn reduce_to(&self, e2: u32) -> Self {
        let m2 = pow_u64(self.p, e2);
        let mut r = Self::zero(self.p, e2, self.nvars);
        for (k, &c) in &self.terms {
            r.add_term(k.clone(), c % m2);
        }
        r
    }

    /// Same representatives, read in Z/p^{e'} with e' ≥ e.
    pub fn lift_to(&self, e2: u32) -> Self {
        let mut r = Self::zero(self.p, e2, self.nvars);
        for (k, &c) in &self.terms {
            r.add_term(k.clone(), c);
        }
        r
    }

    /// Highest divided-power order appearing in each variable.
    pub fn max_order(&self) -> u64 {
        self.terms.keys().flat_map(|(_, r)| r.iter().copied()).max().unwrap_or(0)
    }
}

/// Parse a word such as `d0^[2] z0^2 z1^-1 d1`.
///
/// Tokens: `zI`, `zI^k` (k may be negative), `dI` (= ∂_I), `dI^[k]`
/// (divided power) and `dI^k` (k-fold composition).
pub fn parse_word(word: &str, nvars: usize) -> Result<Vec<WordToken>> {
    let mut out = Vec::new();
    for tok in word.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (head, pw) = match tok.split_once('^') {
            Some((h, pw)) => (h, Some(pw)),
            None => (tok, None),
        };
        let kind = head.chars().next().ok_or_else(|| Error::Parse(tok.into()))?;
        let idx: usize = head[1..].parse().map_err(|_| Error::Parse(format!("bad variable in {}", tok)))?;
        if idx >= nvars {
            return Err(Error::Parse(format!("variable index {} out of range", idx)));
        }
        let t = match (kind, pw) {
            ('z', None) => WordToken::Z(idx, 1),
            ('z', Some(k)) => WordToken::Z(idx, k.parse().map_err(|_| Error::Parse(tok.into()))?),
            ('d', None) => WordToken::D(idx, 1),
            ('d', Some(k)) if k.starts_with('[') && k.ends_with(']') => {
                WordToken::D(idx, k[1..k.len() - 1].parse().map_err(|_| Error::Parse(tok.into()))?)
            }
            ('d', Some(k)) => WordToken::DPow(idx, k.parse().map_err(|_| Error::Parse(tok.into()))?),
            _ => return Err(Error::Parse(tok.into())),
        };
        out.push(t);
    }
    Ok(out)
}

/// A generator of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordToken {
    Z(usize, i64),
    D(usize, u64),
    DPow(usize, u64),
}

impl WordToken {
    pub fn to_element(&self, p: u64, e: u32, nvars: usize) -> Result<WeylElement> {
        Ok(match *self {
            WordToken::Z(i, k) => WeylElement::z_pow(p, e, nvars, i, k),
            WordToken::D(i, k) => WeylElement::d_div(p, e, nvars, i, k),
            WordToken::DPow(i, k) => {
                let d = WeylElement::d_div(p, e, nvars, i, 1);
                let mut acc = WeylElement::one(p, e, nvars);
                for _ in 0..k {
                    acc = acc.compose(&d)?;
                }
                acc
            }
        })
    }
}

/// Left-normalize a word by successive composition.
pub fn normal_form(tokens: &[WordToken], p: u64, e: u32, nvars: usize) -> Result<WeylElement> {
    let mut acc = WeylElement::one(p, e, nvars);
    for t in tokens {
        acc = acc.compose(&t.to_element(p, e, nvars)?)?;
    }
    Ok(acc)
}

/// Apply the word right-to-left, one generator at a time.
pub fn apply_word(tokens: &[WordToken], p: u64, e: u32, f: &Laurent) -> Result<Laurent> {
    let mut g = f.clone();
    for t in tokens.iter().rev() {
        g = t.to_element(p, e, f.nvars())?.apply(&g)?;
    }
    Ok(g)
}

/// θ_{ij} = z^i ∂^{[p^n−1]} z^{p^n−1−j} over F_p (∂^{[q]} in every variable).
pub fn theta(p: u64, n: u32, i: &[i64], j: &[i64]) -> Result<WeylElement> {
    let q = pow_u64(p, n) as i64;
    let m = i.len();
    if j.len() != m || i.iter().chain(j).any(|&x| x < 0 || x >= q) {
        return Err(Error::RangeError(format!("theta indices must lie in [0, {})", q)));
    }
    let left = WeylElement::term(p, 1, i.to_vec(), vec![(q - 1) as u64; m], 1);
    let right = WeylElement::term(p, 1, j.iter().map(|x| q - 1 - x).collect(), vec![0; m], 1);
    left.compose(&right)
}

/// (z²∂)^{[s]} = Σ_{i<s} C(s−1, i) z^{2s−i} ∂^{[s−i]} in one variable.
pub fn z2d_divided(p: u64, e: u32, s: u64) -> WeylElement {
    if s == 0 {
        return WeylElement::one(p, e, 1);
    }
    let mut w = WeylElement::zero(p, e, 1);
    for i in 0..s {
        let c = binom_mod((s - 1) as i64, i, p, e);
        w = w.add(&WeylElement::term(p, e, vec![(2 * s - i) as i64], vec![s - i], c as i64)).unwrap();
    }
    w
}

/// The standard affine charts of P^d. Chart l has coordinates z_k/z_l for
/// k ≠ l, numbered in increasing order of k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartAtlas {
    pub d: usize,
}

impl ChartAtlas {
    pub fn new(d: usize) -> Self {
        ChartAtlas { d }
    }
    /// Position of the coordinate z_k/z_l in chart l.
    pub fn coord_index(&self, l: usize, k: usize) -> usize {
        assert!(k != l);
        if k < l {
            k
        } else {
            k - 1
        }
    }
    /// Chart exponents ↦ homogeneous degree-0 exponent vector.
    pub fn to_homogeneous(&self, l: usize, e: &[i64]) -> Mono {
        let mut h = vec![0; self.d + 1];
        let mut s = 0;
        for k in 0..=self.d {
            if k != l {
                h[k] = e[self.coord_index(l, k)];
                s += h[k];
            }
        }
        h[l] = -s;
        h
    }
    pub fn from_homogeneous(&self, l: usize, h: &[i64]) -> Mono {
        (0..=self.d).filter(|&k| k != l).map(|k| h[k]).collect()
    }
    /// A degree-0 exponent vector is regular on chart l iff all entries but the l-th are ≥ 0.
    pub fn regular_on(&self, l: usize, h: &[i64]) -> bool {
        h.iter().enumerate().all(|(k, &x)| k == l || x >= 0)
    }
    /// Check the transition z_{ij} = z_{ik}/z_{jk} on a homogeneous monomial.
    pub fn transition_roundtrip(&self, h: &[i64]) -> bool {
        (0..=self.d).all(|l| {
            let e = self.from_homogeneous(l, h);
            self.to_homogeneous(l, &e) == h
        })
    }
}

/// An operator together with the coordinates it is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartOp {
    /// Written in the coordinates of chart `chart`.
    Chart { chart: usize, op: WeylElement },
    /// Written in the homogeneous coordinates z_0, …, z_d, acting on degree-0 functions.
    Homogeneous(WeylElement),
}

impl ChartOp {
    /// Image of a homogeneous degree-0 monomial, as homogeneous exponent vectors.
    pub fn apply_homogeneous(&self, atlas: &ChartAtlas, h: &[i64]) -> Result<Vec<(Mono, u64)>> {
        match self {
            ChartOp::Chart { chart, op } => {
                let e = atlas.from_homogeneous(*chart, h);
                let neg: Vec<usize> = (0..atlas.d).collect();
                let f = Laurent::monomial(op.p, op.e, &neg, &e, 1)?;
                let g = op.apply(&f)?;
                Ok(g.terms().iter().map(|(m, &c)| (atlas.to_homogeneous(*chart, m), c)).collect())
            }
            ChartOp::Homogeneous(op) => {
                let neg: Vec<usize> = (0..=atlas.d).collect();
                let f = Laurent::monomial(op.p, op.e, &neg, h, 1)?;
                let g = op.apply(&f)?;
                Ok(g.terms().iter().map(|(m, &c)| (m.clone(), c)).collect())
            }
        }
    }
}

/// y_{ij}^{[r]} on P^d written in chart i, where it is ∂^{[r]} with respect to z_j/z_i.
pub fn y_operator(p: u64, e: u32, i: usize, j: usize, r: u64, d: usize) -> Result<ChartOp> {
    if i == j || i > d || j > d {
        return Err(Error::RangeError(format!("y_{{{}{}}} on P^{}", i, j, d)));
    }
    let atlas = ChartAtlas::new(d);
    let op = WeylElement::d_div(p, e, d, atlas.coord_index(i, j), r);
    Ok(ChartOp::Chart { chart: i, op })
}

/// y_{ij}^{[r]} on P^1 written in chart j: (−1)^r (z²∂)^{[r]} in the coordinate z_i/z_j.
pub fn y_operator_p1_other_chart(p: u64, e: u32, i: usize, j: usize, r: u64) -> Result<ChartOp> {
    if i > 1 || j > 1 || i == j {
        return Err(Error::RangeError("P^1 charts are 0 and 1".into()));
    }
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    Ok(ChartOp::Chart { chart: j, op: z2d_divided(p, e, r).scale(sign) })
}

/// Homogeneous form z_i^r ∂_j^{[r]} of y_{ij}^{[r]}.
pub fn y_homogeneous(p: u64, e: u32, i: usize, j: usize, r: u64, d: usize) -> WeylElement {
    let mut z = vec![0; d + 1];
    z[i] = r as i64;
    let mut o = vec![0; d + 1];
    o[j] = r;
    WeylElement::term(p, e, z, o, 1)
}

/// Does the operator preserve the coordinate ring of every standard chart?
///
/// Tested on all chart monomials of total degree ≤ `bound`; the verdict is
/// repeated at twice the bound and must agree (stabilization).
pub fn is_global(op: &ChartOp, atlas: &ChartAtlas, bound: i64) -> bool {
    let a = preserves_charts(op, atlas, bound);
    let b = preserves_charts(op, atlas, 2 * bound);
    debug_assert_eq!(a, b, "globality verdict did not stabilize");
    a && b
}

fn preserves_charts(op: &ChartOp, atlas: &ChartAtlas, bound: i64) -> bool {
    let d = atlas.d;
    for l in 0..=d {
        for deg in 0..=bound {
            let slice = crate::rings::graded_basis(d, deg, &vec![(0, deg); d]);
            for e in slice.basis {
                let h = atlas.to_homogeneous(l, &e);
                match op.apply_homogeneous(atlas, &h) {
                    Ok(img) => {
                        if img.iter().any(|(m, _)| !atlas.regular_on(l, m)) {
                            return false;
                        }
                    }
                    Err(_) => return false,
                }
            }
        }
    }
    true
}

/// Globality of z^r ∂^{[s]} on P^1 (written in chart 0).
pub fn p1_monomial_is_global(p: u64, r: i64, s: u64, bound: i64) -> bool {
    let op = WeylElement::term(p, 1, vec![r], vec![s], 1);
    is_global(&ChartOp::Chart { chart: 0, op }, &ChartAtlas::new(1), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::CommRing;

    fn w(p: u64, s: &str, n: usize) -> WeylElement {
        normal_form(&parse_word(s, n).unwrap(), p, 1, n).unwrap()
    }

    #[test]
    fn commutator() {
        let got = w(5, "d0 z0", 1);
        let want = WeylElement::from_terms(5, 1, 1, vec![((vec![0], vec![0]), 1), ((vec![1], vec![1]), 1)]);
        assert_eq!(got, want);
    }

    #[test]
    fn divided_square_times_z_squared() {
        let got = w(7, "d0^[2] z0^2", 1);
        let want = WeylElement::from_terms(
            7,
            1,
            1,
            vec![((vec![0], vec![0]), 1), ((vec![1], vec![1]), 2), ((vec![2], vec![2]), 1)],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn divided_powers_compose() {
        assert_eq!(w(5, "d0 d0", 1), WeylElement::d_div(5, 1, 1, 0, 2).scale(2));
        assert_eq!(w(2, "d0 d0", 1), WeylElement::zero(2, 1, 1));
        assert_eq!(w(2, "d0^2", 1), WeylElement::zero(2, 1, 1));
    }

    #[test]
    fn apply_examples() {
        let f = Laurent::monomial(3, 1, &[1, 2], &[2, -1, -1], 1).unwrap();
        let y = y_homogeneous(3, 1, 0, 1, 1, 2);
        let g = y.apply(&f).unwrap();
        assert_eq!(g, Laurent::monomial(3, 1, &[1, 2], &[3, -2, -1], -1).unwrap());
        let zp = Laurent::monomial(5, 1, &[], &[5], 1).unwrap();
        assert_eq!(WeylElement::d_div(5, 1, 1, 0, 5).apply(&zp).unwrap(), zp.mono_like(vec![0], 1));
        assert_eq!(WeylElement::one(5, 1, 1).apply(&zp).unwrap(), zp);
    }

    #[test]
    fn theta_examples() {
        let t01 = theta(2, 1, &[0], &[1]).unwrap();
        assert_eq!(t01, WeylElement::d_div(2, 1, 1, 0, 1));
        let z = |k: i64| Laurent::monomial(3, 1, &[], &[k], 1).unwrap();
        let t22 = theta(3, 1, &[2], &[2]).unwrap();
        assert_eq!(t22.apply(&z(2)).unwrap(), z(2));
        assert!(t22.apply(&z(1)).unwrap().is_zero());
        assert!(theta(2, 1, &[2], &[0]).is_err());
    }

    #[test]
    fn p1_generators() {
        assert!(p1_monomial_is_global(3, 1, 1, 8));
        assert!(!p1_monomial_is_global(3, 3, 1, 8));
        // z^{p-1} ∂^{[p]}
        assert!(p1_monomial_is_global(3, 2, 3, 8));
        // z^4 ∂^{[2]} sends 1/z to z
        assert!(!p1_monomial_is_global(3, 4, 2, 8));
        // (z²∂)^{[2]} = z⁴∂^{[2]} + z³∂ is global
        let op = ChartOp::Chart { chart: 0, op: z2d_divided(3, 1, 2) };
        assert!(is_global(&op, &ChartAtlas::new(1), 8));
    }

    #[test]
    fn chart_forms_agree_on_p1() {
        let atlas = ChartAtlas::new(1);
        for r in 0..6u64 {
            let a = y_operator(5, 1, 0, 1, r, 1).unwrap();
            let b = y_operator_p1_other_chart(5, 1, 0, 1, r).unwrap();
            let h = ChartOp::Homogeneous(y_homogeneous(5, 1, 0, 1, r, 1));
            for m in -6..6i64 {
                let v = [m, -m];
                let mut x = a.apply_homogeneous(&atlas, &v).unwrap();
                let mut y = b.apply_homogeneous(&atlas, &v).unwrap();
                let mut z = h.apply_homogeneous(&atlas, &v).unwrap();
                x.sort();
                y.sort();
                z.sort();
                assert_eq!(x, z, "r={} m={}", r, m);
                assert_eq!(y, z, "r={} m={}", r, m);
            }
        }
    }
}
