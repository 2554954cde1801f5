//! Cohomology of Witt line bundles W_nO(a) on P^d through Čech cochains.
//!
//! Sections over U_J = ∩_{j∈J} {z_j ≠ 0} are Witt vectors of Laurent
//! polynomials in z_0..z_d whose l-th coordinate is homogeneous of degree
//! p^l·a with negative exponents only in the variables of J. Lengths come
//! from the V-filtration sequences
//! 0 → F_*W_{n−1}O(pa) → W_nO(a) → O(a) → 0,
//! with connecting maps computed on Teichmüller-lifted cochains.

use crate::error::{Error, Result};
use crate::linalg::{rank_fp, solve_fp};
use crate::rings::{binom_u, pow_u64, CommRing, Laurent, Mono};
use crate::witt_core::{teichmuller, WittVector};
use std::collections::{BTreeMap, BTreeSet};

/// All (k+1)-subsets of {0..d} in lexicographic order.
pub fn faces(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = d + 1;
    if k + 1 > n {
        return out;
    }
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k + 1 {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Section of W_nO(a) over U_J.
#[derive(Clone, Debug, PartialEq)]
pub struct WittSection {
    pub open: Vec<usize>,
    pub twist: i64,
    pub value: WittVector<Laurent>,
}

impl WittSection {
    pub fn new(open: Vec<usize>, twist: i64, value: WittVector<Laurent>) -> Result<Self> {
        let s = WittSection { open, twist, value };
        s.validate()?;
        Ok(s)
    }

    /// Coordinate l homogeneous of degree p^l·a, negatives only on the open set.
    pub fn validate(&self) -> Result<()> {
        let p = self.value.p;
        for (l, c) in self.value.coords.iter().enumerate() {
            let want = pow_u64(p, l as u32) as i64 * self.twist;
            for m in c.terms().keys() {
                if m.iter().sum::<i64>() != want {
                    return Err(Error::Mismatch(format!("coordinate {} has a term of degree ≠ {}", l, want)));
                }
                if m.iter().enumerate().any(|(i, &x)| x < 0 && !self.open.contains(&i)) {
                    return Err(Error::NegativeExponentViolation(format!("{:?} on U_{:?}", m, self.open)));
                }
            }
        }
        Ok(())
    }
}

/// A Čech k-cochain of W_nO(a): one Witt vector per (k+1)-face.
#[derive(Clone, Debug, PartialEq)]
pub struct WittCochain {
    pub p: u64,
    pub len: usize,
    pub d: usize,
    pub k: usize,
    pub twist: i64,
    pub comps: BTreeMap<Vec<usize>, WittVector<Laurent>>,
}

fn zero_vec(p: u64, len: usize, d: usize, open: &[usize]) -> WittVector<Laurent> {
    WittVector::new(p, vec![Laurent::zero(p, 1, d + 1, open); len])
}

fn restrict_vec(x: &WittVector<Laurent>, open: &[usize]) -> WittVector<Laurent> {
    WittVector::new(x.p, x.coords.iter().map(|c| c.with_neg(open).expect("restriction to a smaller open")).collect())
}

impl WittCochain {
    pub fn zero(p: u64, len: usize, d: usize, k: usize, twist: i64) -> Self {
        let comps = faces(d, k).into_iter().map(|j| (j.clone(), zero_vec(p, len, d, &j))).collect();
        WittCochain { p, len, d, k, twist, comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|x| x.is_zero())
    }

    pub fn set(&mut self, face: &[usize], x: WittVector<Laurent>) -> Result<()> {
        let s = WittSection::new(face.to_vec(), self.twist, restrict_vec(&x, face))?;
        if s.value.len() != self.len {
            return Err(Error::Mismatch("Witt length".into()));
        }
        self.comps.insert(face.to_vec(), s.value);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (j, x) in &self.comps {
            WittSection { open: j.clone(), twist: self.twist, value: x.clone() }.validate()?;
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (j, x) in &o.comps {
            let s = out.comps[j].add(x)?;
            out.comps.insert(j.clone(), s);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Self> {
        let mut out = self.clone();
        for (j, x) in &self.comps {
            out.comps.insert(j.clone(), x.neg()?);
        }
        Ok(out)
    }

    /// First coordinate, i.e. R^{len−1} into O(a).
    pub fn top(&self) -> WittCochain {
        let comps = self.comps.iter().map(|(j, x)| (j.clone(), WittVector::new(self.p, vec![x.coords[0].clone()]))).collect();
        WittCochain { len: 1, comps, ..self.clone() }
    }

    /// V: C(W_{len}O(pa)) → C(W_{len+1}O(a)); the twist must be divisible by p.
    pub fn verschiebung(&self) -> Result<WittCochain> {
        if self.twist % self.p as i64 != 0 {
            return Err(Error::Mismatch("V needs a twist divisible by p".into()));
        }
        let comps = self.comps.iter().map(|(j, x)| (j.clone(), x.verschiebung())).collect();
        Ok(WittCochain { len: self.len + 1, twist: self.twist / self.p as i64, comps, ..self.clone() })
    }

    /// Inverse of V on cochains whose first coordinate vanishes.
    pub fn strip_v(&self) -> Result<WittCochain> {
        if self.len < 2 || self.comps.values().any(|x| !x.coords[0].is_zero()) {
            return Err(Error::NotInImage("first coordinate is not zero".into()));
        }
        let comps = self.comps.iter().map(|(j, x)| (j.clone(), WittVector::new(self.p, x.coords[1..].to_vec()))).collect();
        Ok(WittCochain { len: self.len - 1, twist: self.twist * self.p as i64, comps, ..self.clone() })
    }

    /// Coordinate-wise Teichmüller lift of a classical cochain.
    pub fn teichmuller_lift(&self, len: usize) -> WittCochain {
        let comps = self.comps.iter().map(|(j, x)| (j.clone(), teichmuller(self.p, &x.coords[0], len))).collect();
        WittCochain { len, comps, ..self.clone() }
    }
}

/// Čech differential with Witt-vector alternating sums.
pub fn cech_d(c: &WittCochain) -> Result<WittCochain> {
    let mut out = WittCochain::zero(c.p, c.len, c.d, c.k + 1, c.twist);
    for face in faces(c.d, c.k + 1) {
        let mut pos: Vec<WittVector<Laurent>> = Vec::new();
        let mut neg: Vec<WittVector<Laurent>> = Vec::new();
        for t in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(t);
            let x = restrict_vec(&c.comps[&sub], &face);
            if x.is_zero() {
                continue;
            }
            if t % 2 == 0 {
                pos.push(x);
            } else {
                neg.push(x);
            }
        }
        // cancel identical summands before doing Witt arithmetic
        let mut i = 0;
        while i < pos.len() {
            if let Some(k) = neg.iter().position(|y| *y == pos[i]) {
                neg.remove(k);
                pos.remove(i);
            } else {
                i += 1;
            }
        }
        let mut acc = zero_vec(c.p, c.len, c.d, &face);
        for x in &pos {
            acc = acc.add(x)?;
        }
        for x in &neg {
            acc = acc.sub(x)?;
        }
        out.comps.insert(face, acc);
    }
    Ok(out)
}

/// Negative support N(e) = {i : e_i < 0}.
fn neg_support(e: &[i64]) -> Vec<usize> {
    (0..e.len()).filter(|&i| e[i] < 0).collect()
}

/// The per-exponent Čech complex: faces of size k+1 containing N(e) and the
/// matrix of C^k_e → C^{k+1}_e (rows indexed by target faces).
fn exponent_faces(d: usize, k: usize, n: &[usize]) -> Vec<Vec<usize>> {
    faces(d, k).into_iter().filter(|f| n.iter().all(|i| f.contains(i))).collect()
}

fn exponent_matrix(d: usize, k: usize, n: &[usize], p: u64) -> (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<u64>>) {
    let src = exponent_faces(d, k, n);
    let dst = exponent_faces(d, k + 1, n);
    let mut m = vec![vec![0u64; src.len()]; dst.len()];
    for (r, f) in dst.iter().enumerate() {
        for t in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(t);
            if let Some(c) = src.iter().position(|s| *s == sub) {
                m[r][c] = if t % 2 == 0 { 1 } else { p - 1 };
            }
        }
    }
    (src, dst, m)
}

/// dim of H^k of the per-exponent complex with negative support N.
fn exponent_cohomology(d: usize, k: usize, n: &[usize], p: u64) -> usize {
    let dim = exponent_faces(d, k, n).len();
    let rk_out = if k < d { rank_fp(&exponent_matrix(d, k, n, p).2, p) } else { 0 };
    let rk_in = if k > 0 { rank_fp(&exponent_matrix(d, k - 1, n, p).2, p) } else { 0 };
    dim - rk_out - rk_in
}

/// dim H^i(P^d, O(m)) computed from the Čech complex split by multidegree.
/// Only the sign pattern of an exponent matters; patterns with nonzero
/// cohomology must have finitely many exponents of degree m.
pub fn classical_cohomology(d: usize, m: i64, i: usize) -> u64 {
    if i > d {
        return 0;
    }
    let mut total = 0u64;
    for mask in 0u32..(1 << (d + 1)) {
        let n: Vec<usize> = (0..=d).filter(|&j| mask >> j & 1 == 1).collect();
        // the rank pattern is the same for all p; use 2
        let h = exponent_cohomology(d, i, &n, 2);
        if h == 0 {
            continue;
        }
        assert!(n.is_empty() || n.len() == d + 1, "mixed sign pattern with cohomology");
        // count exponents with this sign pattern and total degree m
        let cnt = if n.is_empty() {
            binom_u(m + d as i64, d as i64)
        } else {
            // e_j = −1 − f_j with f_j ≥ 0, Σ f = −m − d − 1
            binom_u(-m - 1, d as i64)
        };
        total += h as u64 * cnt;
    }
    total
}

/// Binomial closed form for dim H^i(P^d, O(m)).
pub fn classical_closed_form(d: usize, m: i64, i: usize) -> u64 {
    if i == 0 {
        binom_u(m + d as i64, d as i64)
    } else if i == d {
        binom_u(-m - 1, d as i64)
    } else {
        0
    }
}

/// Monomial representatives of a basis of H^i(P^d, O(m)).
pub fn cohomology_basis(d: usize, m: i64, i: usize) -> Vec<Mono> {
    let n = d + 1;
    if i == 0 && m >= 0 {
        crate::rings::graded_basis(n, m, &vec![(0, m); n]).basis
    } else if i == d && m < -(d as i64) {
        let lo = m + d as i64;
        crate::rings::graded_basis(n, m, &vec![(lo, -1); n]).basis
    } else {
        Vec::new()
    }
}

/// Classical cocycle representing the basis class z^e.
pub fn representative(p: u64, d: usize, m: i64, i: usize, e: &[i64]) -> Result<WittCochain> {
    let mut c = WittCochain::zero(p, 1, d, i, m);
    let mono = |face: &[usize]| Laurent::monomial(p, 1, face, e, 1);
    if i == 0 {
        for face in faces(d, 0) {
            c.set(&face, WittVector::new(p, vec![mono(&face)?]))?;
        }
    } else {
        let top: Vec<usize> = (0..=d).collect();
        c.set(&top, WittVector::new(p, vec![mono(&top)?]))?;
    }
    Ok(c)
}

/// Class of a classical cocycle: either its coordinates on the monomial
/// basis (when nonzero) or a cochain b with ∂b equal to it.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassicalClass {
    NonZero(Vec<(Mono, u64)>),
    Zero(WittCochain),
}

pub fn classical_class(c: &WittCochain) -> Result<ClassicalClass> {
    if c.len != 1 {
        return Err(Error::Mismatch("classical cochain expected".into()));
    }
    if !cech_d(c)?.is_zero() {
        return Err(Error::NotACocycle(format!("degree {} cochain of O({})", c.k, c.twist)));
    }
    let p = c.p;
    let d = c.d;
    let k = c.k;
    // collect exponents
    let mut exps: BTreeSet<Mono> = BTreeSet::new();
    for x in c.comps.values() {
        exps.extend(x.coords[0].terms().keys().cloned());
    }
    let mut nonzero = Vec::new();
    let mut pre = if k > 0 { Some(WittCochain::zero(p, 1, d, k - 1, c.twist)) } else { None };
    for e in exps {
        let n = neg_support(&e);
        let coeff = |face: &Vec<usize>| c.comps[face].coords[0].coeff(&e);
        let h = exponent_cohomology(d, k, &n, p);
        if h > 0 {
            // H^k_e is one-dimensional, spanned by the face {0} or the top face
            let face = if k == 0 { vec![0] } else { (0..=d).collect() };
            let v = coeff(&face);
            if v != 0 {
                nonzero.push((e.clone(), v));
            }
            continue;
        }
        if k == 0 {
            // acyclic in degree 0 means the cocycle vanishes here
            continue;
        }
        let (src, dst, m) = exponent_matrix(d, k - 1, &n, p);
        let rhs: Vec<u64> = dst.iter().map(coeff).collect();
        let x = solve_fp(&m, &rhs, p).ok_or_else(|| Error::NotACocycle("per-exponent system unsolvable".into()))?;
        let b = pre.as_mut().unwrap();
        for (f, &v) in src.iter().zip(&x) {
            if v != 0 {
                let cur = b.comps[f].coords[0].clone();
                let add = Laurent::monomial(p, 1, f, &e, v as i64)?;
                b.comps.insert(f.clone(), WittVector::new(p, vec![cur.add(&add)]));
            }
        }
    }
    if !nonzero.is_empty() {
        return Ok(ClassicalClass::NonZero(nonzero));
    }
    Ok(ClassicalClass::Zero(pre.unwrap_or_else(|| WittCochain::zero(p, 1, d, 0, c.twist))))
}

/// Leading V-layer of the class of a Witt cocycle: None if the class is
/// zero, else (l, coordinates in H(O(p^l a))).
pub fn witt_class(y: &WittCochain) -> Result<Option<(usize, Vec<(Mono, u64)>)>> {
    let mut cur = y.clone();
    for l in 0..y.len {
        match classical_class(&cur.top())? {
            ClassicalClass::NonZero(v) => return Ok(Some((l, v))),
            ClassicalClass::Zero(b) => {
                if cur.len == 1 {
                    return Ok(None);
                }
                if cur.k == 0 {
                    // H^0: a zero top coordinate is already a V-image
                    cur = cur.strip_v()?;
                    continue;
                }
                let lift = b.teichmuller_lift(cur.len);
                let diff = cur.add(&cech_d(&lift)?.neg()?)?;
                cur = diff.strip_v()?;
            }
        }
    }
    Ok(None)
}

/// δ: H^i(O(a)) → H^{i+1}(W_{n−1}O(pa)) evaluated on a classical cocycle:
/// Teichmüller lift to W_n, Witt Čech differential, strip V.
pub fn connecting_image(c: &WittCochain, n: usize) -> Result<WittCochain> {
    if !cech_d(c)?.is_zero() {
        return Err(Error::NotACocycle(format!("degree {} cochain of O({})", c.k, c.twist)));
    }
    if n < 2 {
        return Err(Error::RangeError("connecting map needs n ≥ 2".into()));
    }
    cech_d(&c.teichmuller_lift(n))?.strip_v()
}

/// The connecting map on the monomial basis of H^i(O(a)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectingMap {
    pub source_basis: Vec<Mono>,
    /// Leading-layer image of each basis class (None = zero).
    pub images: Vec<Option<(usize, Vec<(Mono, u64)>)>>,
}

impl ConnectingMap {
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|x| x.is_none())
    }
    /// Rank of the layer-0 part of the map.
    pub fn rank(&self, p: u64) -> usize {
        let mut cols: BTreeSet<Mono> = BTreeSet::new();
        for (_, v) in self.images.iter().flatten() {
            cols.extend(v.iter().map(|(m, _)| m.clone()));
        }
        let cols: Vec<Mono> = cols.into_iter().collect();
        let rows: Vec<Vec<u64>> = self
            .images
            .iter()
            .map(|im| {
                cols.iter()
                    .map(|m| match im {
                        Some((0, v)) => v.iter().find(|(x, _)| x == m).map_or(0, |(_, c)| *c),
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        if cols.is_empty() {
            0
        } else {
            rank_fp(&rows, p)
        }
    }
}

pub fn connecting_map(p: u64, d: usize, i: usize, a: i64, n: usize) -> Result<ConnectingMap> {
    let basis = cohomology_basis(d, a, i);
    let mut images = Vec::with_capacity(basis.len());
    for e in &basis {
        let c = representative(p, d, a, i, e)?;
        let y = connecting_image(&c, n)?;
        images.push(if i + 1 > d { None } else { witt_class(&y)? });
    }
    Ok(ConnectingMap { source_basis: basis, images })
}

/// A finite-length Z/p^n-module described by F_p-dimensions of the graded
/// pieces of its V-filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLenModule {
    pub p: u64,
    pub n: usize,
    pub layers: Vec<u64>,
}

impl FinLenModule {
    pub fn length(&self) -> u64 {
        self.layers.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.length() == 0
    }
}

/// H^i(P^d, W_nO(a)) for i = 0..d through the sequences
/// 0 → W_{n−1}O(pa) → W_nO(a) → O(a) → 0. Each connecting map is computed
/// on basis classes; a nonzero one is reported as unsupported.
pub fn witt_cohomology(p: u64, d: usize, n: usize, a: i64) -> Result<Vec<FinLenModule>> {
    if n == 0 || d == 0 {
        return Err(Error::RangeError("need n ≥ 1 and d ≥ 1".into()));
    }
    // layers[i][l] = contribution of O(p^l a) to H^i
    let mut layers = vec![vec![0u64; n]; d + 1];
    for l in 0..n {
        let m = pow_u64(p, l as u32) as i64 * a;
        let rest = n - l;
        for i in 0..=d {
            let dim = classical_cohomology(d, m, i);
            if dim == 0 {
                continue;
            }
            if rest >= 2 {
                let delta = connecting_map(p, d, i, m, rest)?;
                if !delta.is_zero() {
                    return Err(Error::RangeError(format!("nonzero connecting map from H^{}(O({}))", i, m)));
                }
            }
            layers[i][l] = dim;
        }
    }
    Ok(layers.into_iter().map(|ls| FinLenModule { p, n, layers: ls }).collect())
}

/// Closed-form lengths: H^0 = Σ_l C(p^l a + d, d) for a ≥ 0, H^d = Σ over l
/// with −p^l a − d − 1 ≥ 0 of C(−p^l a − 1, d), everything else zero.
pub fn closed_form_lengths(p: u64, d: usize, n: usize, a: i64) -> Vec<u64> {
    let mut out = vec![0u64; d + 1];
    for l in 0..n {
        let m = pow_u64(p, l as u32) as i64 * a;
        if a >= 0 {
            out[0] += binom_u(m + d as i64, d as i64);
        }
        if -m - d as i64 > 0 {
            out[d] += binom_u(-m - 1, d as i64);
        }
    }
    out
}

pub fn witt_structure_sheaf_cohomology(p: u64, d: usize, n: usize) -> Result<Vec<FinLenModule>> {
    witt_cohomology(p, d, n, 0)
}

/// One line of a cohomology sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    pub a: i64,
    pub modules: Vec<FinLenModule>,
    pub closed_form: Vec<u64>,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        self.modules.iter().map(|m| m.length()).collect::<Vec<_>>() == self.closed_form
    }
}

pub fn sweep(p: u64, n: usize, d: usize, a_min: i64, a_max: i64) -> Result<Vec<SweepRow>> {
    (a_min..=a_max)
        .map(|a| {
            Ok(SweepRow { p, n, d, a, modules: witt_cohomology(p, d, n, a)?, closed_form: closed_form_lengths(p, d, n, a) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;
    use rand::Rng;

    #[test]
    fn classical_examples() {
        assert_eq!(classical_cohomology(1, 2, 0), 3);
        assert_eq!(classical_cohomology(2, -3, 2), 1);
        for i in 0..=2 {
            assert_eq!(classical_cohomology(2, -1, i), 0);
        }
        for d in 1..=3 {
            for m in -8..=8 {
                for i in 0..=d {
                    assert_eq!(classical_cohomology(d, m, i), classical_closed_form(d, m, i));
                    assert_eq!(cohomology_basis(d, m, i).len() as u64, classical_closed_form(d, m, i));
                }
            }
        }
    }

    #[test]
    fn witt_examples() {
        let h = witt_cohomology(2, 1, 2, -1).unwrap();
        assert_eq!(h[1].layers, vec![0, 1]);
        let h = witt_cohomology(2, 1, 2, -2).unwrap();
        assert_eq!(h[1].layers, vec![1, 3]);
        assert_eq!(h[1].length(), 4);
        let h = witt_cohomology(2, 2, 2, -1).unwrap();
        assert!(h[2].is_zero());
        let h = witt_structure_sheaf_cohomology(2, 1, 3).unwrap();
        assert_eq!(h[0].layers, vec![1, 1, 1]);
        assert!(h[1].is_zero());
        let h = witt_structure_sheaf_cohomology(3, 2, 2).unwrap();
        assert_eq!(h[0].length(), 2);
        assert!(h[1].is_zero() && h[2].is_zero());
    }

    #[test]
    fn ses_maps_on_samples() {
        let mut g = rng(4);
        let (p, d) = (3u64, 2usize);
        for _ in 0..10 {
            // random cochain of W_1 O(3a) with a = −1, then V into W_2 O(−1)
            let mut c = WittCochain::zero(p, 1, d, 0, -3);
            for face in faces(d, 0) {
                let mut e = vec![0i64; 3];
                e[face[0]] = -3 - g.gen_range(0..3);
                let rest = -3 - e[face[0]];
                let o = (face[0] + 1) % 3;
                e[o] = rest;
                c.set(&face, WittVector::new(p, vec![Laurent::monomial(p, 1, &face, &e, g.gen_range(1..3)).unwrap()])).unwrap();
            }
            let v = c.verschiebung().unwrap();
            v.validate().unwrap();
            assert!(v.top().is_zero());
            assert_eq!(v.strip_v().unwrap(), c);
            let vv = c.add(&c).unwrap().verschiebung().unwrap();
            assert_eq!(vv, v.add(&v).unwrap());
        }
        // R of a Teichmüller cochain is its top coordinate
        let r = representative(2, 1, 2, 0, &[1, 1]).unwrap();
        assert_eq!(r.teichmuller_lift(3).top(), r);
    }

    #[test]
    fn connecting_maps_vanish_and_are_well_defined() {
        for (p, d, a) in [(2u64, 1usize, -2i64), (2, 2, -3), (3, 2, -4), (2, 1, 3)] {
            for i in 0..=d {
                let cm = connecting_map(p, d, i, a, 2).unwrap();
                assert!(cm.is_zero());
                assert_eq!(cm.rank(p), 0);
            }
        }
        // coboundary inputs go to zero in H^2(W_1 O(pa)) on P^2
        let (p, d, a) = (2u64, 2usize, -3i64);
        let mut g = rng(9);
        for _ in 0..10 {
            let mut b = WittCochain::zero(p, 1, d, 0, a);
            for face in faces(d, 0) {
                let mut e = vec![1i64; 3];
                e[face[0]] = a - 2 - g.gen_range(0..2);
                e[(face[0] + 1) % 3] = a - e[face[0]] - 1;
                b.set(&face, WittVector::new(p, vec![Laurent::monomial(p, 1, &face, &e, 1).unwrap()])).unwrap();
            }
            let c = cech_d(&b).unwrap();
            let y = connecting_image(&c, 2).unwrap();
            assert_eq!(witt_class(&y).unwrap(), None);
        }
        // non-cocycles are rejected
        let mut c = WittCochain::zero(2, 1, 1, 0, 1);
        c.set(&[0], WittVector::new(2, vec![Laurent::monomial(2, 1, &[0], &[1, 0], 1).unwrap()])).unwrap();
        assert!(matches!(connecting_image(&c, 2), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn sweep_small_agrees() {
        for row in sweep(2, 2, 2, -4, 4).unwrap() {
            assert!(row.agrees(), "{:?}", row);
        }
    }
}
