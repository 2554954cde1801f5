//! The de Rham–Witt complex of affine d-space over F_p in the basis
//! e_n(1, r, P) indexed by weights and ordered partitions of their support.
//!
//! Basis elements are symbols; F, V and d act by explicit case formulas.
//! An independent model embeds each symbol into forms with rational
//! exponents, x^r·dlog x_J, where F, V, d have their obvious meaning, and
//! is used to check the case formulas.

use crate::error::{Error, Result};
use crate::rings::{pow_u64, rem_i, vp, Laurent};
use crate::witt_core::{teichmuller, WittVector};
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::fmt;

/// A weight r: {1..d} → Z[1/p]_{≥0}, stored per variable as r_j = u_j p^{v_j}
/// with p ∤ u_j, or (0, 0) when r_j = 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    pub p: u64,
    entries: Vec<(u64, i32)>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, &(u, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            match (u, v) {
                (0, _) => write!(f, "0")?,
                (u, v) if v >= 0 => write!(f, "{}", u * pow_u64(self.p, v as u32))?,
                (u, v) => write!(f, "{}/{}", u, pow_u64(self.p, (-v) as u32))?,
            }
        }
        write!(f, ")")
    }
}

impl Weight {
    pub fn new(p: u64, entries: Vec<(u64, i32)>) -> Result<Self> {
        for &(u, v) in &entries {
            if u != 0 && u % p == 0 {
                return Err(Error::RangeError(format!("unit part {} divisible by p", u)));
            }
            if u == 0 && v != 0 {
                return Err(Error::RangeError("zero entry must be (0, 0)".into()));
            }
        }
        Ok(Weight { p, entries })
    }

    /// r_j = a_j / p^k.
    pub fn from_numerators(p: u64, k: u32, a: &[u64]) -> Self {
        let entries = a
            .iter()
            .map(|&x| {
                if x == 0 {
                    (0, 0)
                } else {
                    let v = vp(x as i128, p).unwrap();
                    (x / pow_u64(p, v), v as i32 - k as i32)
                }
            })
            .collect();
        Weight { p, entries }
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u64, i32)] {
        &self.entries
    }

    pub fn value(&self, j: usize) -> Ratio<i128> {
        let (u, v) = self.entries[j];
        if v >= 0 {
            Ratio::from_integer(u as i128 * pow_u64(self.p, v as u32) as i128)
        } else {
            Ratio::new(u as i128, pow_u64(self.p, (-v) as u32) as i128)
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.d()).filter(|&j| self.entries[j].0 != 0).collect()
    }

    /// Support in the total order: ascending valuation, ties by index.
    /// Multiplying by p^m shifts all valuations equally, so the order is stable.
    pub fn ordered_support(&self) -> Vec<usize> {
        let mut s = self.support();
        s.sort_by_key(|&j| (self.entries[j].1, j));
        s
    }

    /// p^m · r.
    pub fn scale_p(&self, m: i32) -> Self {
        Weight {
            p: self.p,
            entries: self.entries.iter().map(|&(u, v)| if u == 0 { (0, 0) } else { (u, v + m) }).collect(),
        }
    }

    pub fn restrict(&self, set: &[usize]) -> Self {
        Weight {
            p: self.p,
            entries: (0..self.d()).map(|j| if set.contains(&j) { self.entries[j] } else { (0, 0) }).collect(),
        }
    }

    pub fn t(&self) -> i32 {
        t_and_u(self, &self.support()).0
    }

    pub fn u(&self) -> u32 {
        t_and_u(self, &self.support()).1
    }

    pub fn is_integral(&self) -> bool {
        self.t() <= 0
    }

    /// p^{n−1} r is integral.
    pub fn admissible(&self, n: u32) -> bool {
        n >= 1 && self.t() < n as i32
    }
}

/// t(I) = −min_{a∈I} v_p(r_a) (0 on the empty set) and u(I) = max(0, t(I)).
pub fn t_and_u(r: &Weight, set: &[usize]) -> (i32, u32) {
    let t = set
        .iter()
        .filter(|&&j| r.entries[j].0 != 0)
        .map(|&j| -r.entries[j].1)
        .max()
        .unwrap_or(0);
    (t, t.max(0) as u32)
}

/// Ordered partition (I_0, I_1, …, I_i) of the support; I_0 may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn degree(&self) -> usize {
        self.parts.len() - 1
    }

    /// Check conditions i)–iv) against the ordered support of r.
    pub fn is_valid_for(&self, r: &Weight) -> bool {
        if self.parts.is_empty() {
            return false;
        }
        let ord = r.ordered_support();
        let flat: Vec<usize> = self.parts.iter().flatten().copied().collect();
        if flat != ord {
            // disjoint, covering, order-increasing and convex at once
            return false;
        }
        self.parts[1..].iter().all(|b| !b.is_empty())
    }

    /// (∅, I_0, I_1, …, I_i).
    fn shifted(&self) -> Partition {
        let mut parts = vec![Vec::new()];
        parts.extend(self.parts.iter().cloned());
        Partition { parts }
    }
}

/// Compositions of l into k positive parts.
pub fn compositions(l: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if l == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=l {
        for mut rest in compositions(l - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All partitions in P^{(i)}_r: compositions of |supp r| into i parts (I_0 = ∅)
/// followed by compositions into i+1 parts (I_0 ≠ ∅).
pub fn enumerate_partitions(r: &Weight, i: usize) -> Result<Vec<Partition>> {
    let ord = r.ordered_support();
    let l = ord.len();
    if l < i {
        return Err(Error::SupportTooSmall);
    }
    let cut = |sizes: &[usize], empty_first: bool| {
        let mut parts = Vec::new();
        if empty_first {
            parts.push(Vec::new());
        }
        let mut pos = 0;
        for &c in sizes {
            parts.push(ord[pos..pos + c].to_vec());
            pos += c;
        }
        Partition { parts }
    };
    let mut out: Vec<Partition> = compositions(l, i).iter().map(|c| cut(c, true)).collect();
    out.extend(compositions(l, i + 1).iter().map(|c| cut(c, false)));
    Ok(out)
}

pub type BasisKey = (Weight, Partition);

/// A finite combination Σ η·e_n(1, r, P) with η ∈ Z/p^{n−u(r)}, the
/// annihilator of e_n(1, r, P) in W_n(F_p) = Z/p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DRWElement {
    pub p: u64,
    pub n: u32,
    pub d: usize,
    pub degree: usize,
    terms: BTreeMap<BasisKey, u64>,
}

fn key_modulus(p: u64, n: u32, r: &Weight) -> u64 {
    pow_u64(p, n - r.u())
}

impl DRWElement {
    pub fn zero(p: u64, n: u32, d: usize, degree: usize) -> Self {
        DRWElement { p, n, d, degree, terms: BTreeMap::new() }
    }

    /// c·e_n(1, r, P); validates admissibility and the partition.
    pub fn basis(p: u64, n: u32, r: Weight, part: Partition, c: i64) -> Result<Self> {
        if !r.admissible(n) {
            return Err(Error::Inadmissible(format!("p^{}·{:?} is not integral", n.saturating_sub(1), r)));
        }
        if !part.is_valid_for(&r) {
            return Err(Error::Inadmissible(format!("{:?} is not a partition of the support of {:?}", part.parts, r)));
        }
        let mut e = DRWElement::zero(p, n, r.d(), part.degree());
        e.add_term((r, part), c);
        Ok(e)
    }

    pub fn terms(&self) -> &BTreeMap<BasisKey, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: BasisKey, c: i64) {
        let m = key_modulus(self.p, self.n, &key.0);
        let c = rem_i(c as i128, m);
        let ent = self.terms.entry(key.clone()).or_insert(0);
        *ent = ((*ent as u128 + c as u128) % m as u128) as u64;
        if *ent == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.p, self.n, self.d, self.degree) != (o.p, o.n, o.d, o.degree) {
            return Err(Error::Mismatch("de Rham–Witt elements live in different groups".into()));
        }
        let mut out = self.clone();
        for (k, &c) in &o.terms {
            out.add_term(k.clone(), c as i64);
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = DRWElement::zero(self.p, self.n, self.d, self.degree);
        for (k, &a) in &self.terms {
            let m = key_modulus(self.p, self.n, &k.0) as i128;
            out.add_term(k.clone(), (a as i128 * rem_i(c as i128, m as u64) as i128 % m) as i64);
        }
        out
    }
}

/// One of F, V, d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DrwOp {
    F,
    V,
    D,
}

impl DrwOp {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(DrwOp::F),
            "V" | "v" => Ok(DrwOp::V),
            "d" | "D" => Ok(DrwOp::D),
            _ => Err(Error::Parse(format!("unknown operator {}", s))),
        }
    }
}

/// Action on a single basis symbol: Some((k, key)) means p^k·e(key), None means 0.
/// Levels: F lowers n by one, V raises it, d keeps it and raises the degree.
pub fn act_basis(op: DrwOp, key: &BasisKey) -> Option<(u32, BasisKey)> {
    let (r, part) = key;
    let i0_empty = part.parts[0].is_empty();
    match op {
        DrwOp::F => {
            let k = if !i0_empty && !r.is_integral() { 1 } else { 0 };
            Some((k, (r.scale_p(1), part.clone())))
        }
        DrwOp::V => {
            let rq = r.scale_p(-1);
            let k = if !i0_empty && !rq.is_integral() { 0 } else { 1 };
            Some((k, (rq, part.clone())))
        }
        DrwOp::D => {
            if i0_empty {
                return None;
            }
            let t = r.t();
            let k = if t > 0 { 0 } else { (-t) as u32 };
            Some((k, (r.clone(), part.shifted())))
        }
    }
}

/// Apply F, V or d to an element.
pub fn act(op: DrwOp, e: &DRWElement) -> Result<DRWElement> {
    let (n2, deg2) = match op {
        DrwOp::F => {
            if e.n <= 1 {
                return Err(Error::Inadmissible("F lands in W_0, which is zero".into()));
            }
            (e.n - 1, e.degree)
        }
        DrwOp::V => (e.n + 1, e.degree),
        DrwOp::D => (e.n, e.degree + 1),
    };
    let mut out = DRWElement::zero(e.p, n2, e.d, deg2);
    for (key, &c) in &e.terms {
        if let Some((k, key2)) = act_basis(op, key) {
            if !key2.0.admissible(n2) {
                return Err(Error::Inadmissible(format!("{:?} at level {}", key2.0, n2)));
            }
            if k < n2 {
                let m = key_modulus(e.p, n2, &key2.0);
                out.add_term(key2, (c as u128 * pow_u64(e.p, k) as u128 % m as u128) as i64);
            }
        }
    }
    Ok(out)
}

/// All basis symbols of W_nΩ^i of A^d whose weights have numerators
/// p^{n−1}r_j ≤ bound.
pub fn enumerate_basis(p: u64, n: u32, d: usize, i: usize, bound: u64) -> Vec<BasisKey> {
    let mut out = Vec::new();
    if i > d || n == 0 {
        return out;
    }
    let mut a = vec![0u64; d];
    loop {
        let r = Weight::from_numerators(p, n - 1, &a);
        if let Ok(parts) = enumerate_partitions(&r, i) {
            for part in parts {
                out.push((r.clone(), part));
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            a[k] += 1;
            if a[k] <= bound {
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// Size of the classical basis {x^m dx_J} of Ω^i of F_p[x_1..x_d] in the
/// multidegree box m + 1_J ≤ bound.
pub fn classical_count(d: usize, i: usize, bound: u64) -> usize {
    let mut total = 0;
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != i {
            continue;
        }
        // per variable: exponent range of m_j with m_j + [j∈J] ≤ bound
        let mut c = 1usize;
        for j in 0..d {
            c *= if mask >> j & 1 == 1 { bound as usize } else { bound as usize + 1 };
        }
        total += c;
    }
    total
}

/// Forms Σ c·x^s dlog x_J with rational exponents and coefficients.
pub type EForm = BTreeMap<(Vec<Ratio<i128>>, Vec<usize>), Ratio<i128>>;

fn eform_add(f: &mut EForm, k: (Vec<Ratio<i128>>, Vec<usize>), c: Ratio<i128>) {
    let ent = f.entry(k.clone()).or_insert_with(|| Ratio::from_integer(0));
    *ent += c;
    if *ent == Ratio::from_integer(0) {
        f.remove(&k);
    }
}

/// dlog x_j ∧ dlog x_J: sign and sorted index set, or None if j ∈ J.
fn wedge_front(j: usize, set: &[usize]) -> Option<(i128, Vec<usize>)> {
    if set.contains(&j) {
        return None;
    }
    let pos = set.iter().filter(|&&a| a < j).count();
    let mut s = set.to_vec();
    s.insert(pos, j);
    Some((if pos % 2 == 0 { 1 } else { -1 }, s))
}

fn p_pow_rat(p: u64, k: i32) -> Ratio<i128> {
    if k >= 0 {
        Ratio::from_integer(pow_u64(p, k as u32) as i128)
    } else {
        Ratio::new(1, pow_u64(p, (-k) as u32) as i128)
    }
}

/// Image of e_n(1, r, P): p^{u(I_0)} x^r ∧_b (p^{t(I_b)} Σ_{j∈I_b} r_j dlog x_j).
pub fn embed(key: &BasisKey) -> EForm {
    let (r, part) = key;
    let p = r.p;
    let exps: Vec<Ratio<i128>> = (0..r.d()).map(|j| r.value(j)).collect();
    let mut form: EForm = BTreeMap::new();
    form.insert((exps.clone(), vec![]), p_pow_rat(p, t_and_u(r, &part.parts[0]).1 as i32));
    // wedge blocks from the right so that the outer order is I_1 ∧ I_2 ∧ …
    for block in part.parts[1..].iter().rev() {
        let scale = p_pow_rat(p, t_and_u(r, block).0);
        let mut next = EForm::new();
        for ((s, set), c) in &form {
            for &j in block {
                if let Some((sign, set2)) = wedge_front(j, set) {
                    eform_add(&mut next, (s.clone(), set2), *c * scale * r.value(j) * Ratio::from_integer(sign));
                }
            }
        }
        form = next;
    }
    form
}

/// F, V, d on rational-exponent forms.
pub fn eform_apply(p: u64, op: DrwOp, f: &EForm) -> EForm {
    let pr = Ratio::from_integer(p as i128);
    let mut out = EForm::new();
    for ((s, set), c) in f {
        match op {
            DrwOp::F => eform_add(&mut out, (s.iter().map(|x| x * pr).collect(), set.clone()), *c),
            DrwOp::V => eform_add(&mut out, (s.iter().map(|x| x / pr).collect(), set.clone()), *c * pr),
            DrwOp::D => {
                for (j, x) in s.iter().enumerate() {
                    if *x == Ratio::from_integer(0) {
                        continue;
                    }
                    if let Some((sign, set2)) = wedge_front(j, set) {
                        eform_add(&mut out, (s.clone(), set2), *c * x * Ratio::from_integer(sign));
                    }
                }
            }
        }
    }
    out
}

/// The case formula for `op` on `key` agrees with the rational model, without truncation.
pub fn case_formula_agrees(op: DrwOp, key: &BasisKey) -> bool {
    let p = key.0.p;
    let lhs = eform_apply(p, op, &embed(key));
    let rhs = match act_basis(op, key) {
        None => EForm::new(),
        Some((k, key2)) => embed(&key2)
            .into_iter()
            .map(|(m, c)| (m, c * p_pow_rat(p, k as i32)))
            .collect(),
    };
    lhs == rhs
}

/// Degree-zero elements as Witt vectors: e^0_n(1, r) = V^{u}([x]^{p^u r}).
pub fn degree_zero_witt(e: &DRWElement) -> Result<WittVector<Laurent>> {
    if e.degree != 0 {
        return Err(Error::Mismatch("only degree 0 elements are Witt vectors".into()));
    }
    let n = e.n as usize;
    let mut acc = WittVector::new(e.p, vec![Laurent::zero(e.p, 1, e.d, &[]); n]);
    for ((r, _), &c) in &e.terms {
        let u = r.u();
        let m: Vec<i64> = (0..e.d)
            .map(|j| {
                let x = r.value(j) * Ratio::from_integer(pow_u64(e.p, u) as i128);
                *x.numer() as i64
            })
            .collect();
        let mono = Laurent::monomial(e.p, 1, &[], &m, 1)?;
        let t = teichmuller(e.p, &mono, n - u as usize).verschiebung_pow(u as usize);
        acc = acc.add(&t.scalar_mul_char_p(c as i64)?)?;
    }
    Ok(acc)
}

/// Outcome of the identity sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub elements: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// d² = 0, FV = VF = p, FdV = d, Vd = pdV, dF = pFd on every basis symbol
/// of W_nΩ^i within the numerator bound.
pub fn check_identities(p: u64, n: u32, d: usize, i: usize, bound: u64) -> Result<IdentityReport> {
    use DrwOp::*;
    let mut rep = IdentityReport::default();
    for (r, part) in enumerate_basis(p, n, d, i, bound) {
        let e = DRWElement::basis(p, n, r.clone(), part.clone(), 1)?;
        rep.elements += 1;
        let mut check = |name: &str, ok: bool| {
            rep.checks += 1;
            if !ok {
                rep.failures.push(format!("{} on e({:?}, {:?}) at n={}", name, r, part.parts, n));
            }
        };
        let de = act(D, &e)?;
        check("d^2 = 0", act(D, &de)?.is_zero());
        let ve = act(V, &e)?;
        check("FV = p", act(F, &ve)? == e.scale(p as i64));
        check("FdV = d", act(F, &act(D, &ve)?)? == de);
        check("Vd = pdV", act(V, &de)? == act(D, &ve)?.scale(p as i64));
        if n >= 2 {
            let fe = act(F, &e)?;
            check("VF = p", act(V, &fe)? == e.scale(p as i64));
            check("dF = pFd", act(D, &fe)? == act(F, &de)?.scale(p as i64));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u64, k: u32, a: &[u64]) -> Weight {
        Weight::from_numerators(p, k, a)
    }

    #[test]
    fn t_u_examples() {
        let p = 3;
        assert_eq!(t_and_u(&w(p, 0, &[1]), &[0]), (0, 0));
        assert_eq!(t_and_u(&w(p, 1, &[1]), &[0]), (1, 1));
        assert_eq!(t_and_u(&w(p, 0, &[9]), &[0]), (-2, 0));
        assert!(w(p, 0, &[9]).is_integral());
        assert!(!w(p, 1, &[1]).is_integral());
    }

    #[test]
    fn partition_counts() {
        let r = w(2, 0, &[1, 3]);
        let ps = enumerate_partitions(&r, 1).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(enumerate_partitions(&r, 0).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(&w(2, 0, &[1, 1, 1]), 3).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(&r, 3), Err(Error::SupportTooSmall));
        // |P^{(i)}_r| = C(l, i)
        let r5 = w(3, 0, &[1, 2, 4, 5, 7]);
        for i in 0..=5 {
            let ps = enumerate_partitions(&r5, i).unwrap();
            assert_eq!(ps.len() as u64, crate::rings::binom_u(5, i as i64));
            assert!(ps.iter().all(|q| q.is_valid_for(&r5)));
        }
    }

    #[test]
    fn support_order_by_valuation() {
        let r = w(2, 1, &[4, 1, 2]);
        assert_eq!(r.ordered_support(), vec![1, 2, 0]);
        assert_eq!(r.scale_p(3).ordered_support(), r.ordered_support());
    }

    #[test]
    fn case_examples() {
        let p = 2;
        let e0 = (w(p, 0, &[1]), Partition { parts: vec![vec![0]] });
        assert_eq!(act_basis(DrwOp::V, &e0), Some((0, (w(p, 1, &[1]), e0.1.clone()))));
        let e1 = (w(p, 0, &[1]), Partition { parts: vec![vec![], vec![0]] });
        assert_eq!(act_basis(DrwOp::F, &e1), Some((0, (w(p, 0, &[2]), e1.1.clone()))));
        assert_eq!(act_basis(DrwOp::D, &e1), None);
        // V([x]^p) = p[x]
        let ep = (w(p, 0, &[2]), Partition { parts: vec![vec![0]] });
        assert_eq!(act_basis(DrwOp::V, &ep), Some((1, e0.clone())));
        // V(F d[x]) = p d[x]
        let fd = (w(p, 0, &[2]), Partition { parts: vec![vec![], vec![0]] });
        assert_eq!(act_basis(DrwOp::V, &fd), Some((1, e1.clone())));
        // d[x]^p = p·F d[x]
        assert_eq!(act_basis(DrwOp::D, &ep), Some((1, fd)));
    }

    #[test]
    fn case_formulas_match_model() {
        for p in [2u64, 3] {
            for d in 1..=3 {
                for i in 0..=d {
                    for key in enumerate_basis(p, 3, d, i, 2 * p + 1) {
                        for op in [DrwOp::F, DrwOp::V, DrwOp::D] {
                            assert!(case_formula_agrees(op, &key), "{:?} {:?}", op, key);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_edge_cases() {
        assert!(enumerate_basis(2, 2, 2, 3, 4).is_empty());
        let b = enumerate_basis(2, 2, 1, 0, 4);
        let vals: Vec<Ratio<i128>> = b.iter().map(|(r, _)| r.value(0)).collect();
        assert_eq!(vals[..4], [Ratio::from_integer(0), Ratio::new(1, 2), Ratio::from_integer(1), Ratio::new(3, 2)]);
        for d in 1..=3 {
            for i in 0..=d {
                let b = enumerate_basis(5, 1, d, i, 4);
                assert_eq!(b.len(), classical_count(d, i, 4));
                let set: std::collections::BTreeSet<_> = b.iter().collect();
                assert_eq!(set.len(), b.len());
            }
        }
    }

    #[test]
    fn identities_small() {
        for p in [2u64, 3] {
            for n in 1..=3 {
                for i in 0..=2 {
                    let rep = check_identities(p, n, 2, i, p * p).unwrap();
                    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
                }
            }
        }
    }

    #[test]
    fn degree_zero_against_witt_vectors() {
        for p in [2u64, 3] {
            for n in 2..=3u32 {
                for key in enumerate_basis(p, n, 2, 0, p * p) {
                    let e = DRWElement::basis(p, n, key.0.clone(), key.1.clone(), 1).unwrap();
                    let x = degree_zero_witt(&e).unwrap();
                    let fx = degree_zero_witt(&act(DrwOp::F, &e).unwrap()).unwrap();
                    assert_eq!(x.frobenius().unwrap(), fx, "F on {:?}", key);
                    let vx = degree_zero_witt(&act(DrwOp::V, &e).unwrap()).unwrap();
                    assert_eq!(x.verschiebung(), vx, "V on {:?}", key);
                }
            }
        }
    }

    #[test]
    fn inadmissible_rejected() {
        let r = w(2, 2, &[1]);
        assert!(matches!(DRWElement::basis(2, 2, r, Partition { parts: vec![vec![0]] }, 1), Err(Error::Inadmissible(_))));
    }
}
