//! Generalized Steinberg modules v_{P_I}^G for small GL_{d+1}(F_q).
//!
//! Cosets gP_J are identified with flags g·τ_J; the complex
//! 0 → Z → ⊕ Ind_{P_J} → ⋯ → Ind_{P_I} is the cochain complex of flags of
//! types allowed by I, with (δf)(V_0 ⊂ ⋯ ⊂ V_s) = Σ (−1)^i f(…V̂_i…).

use crate::error::{Error, Result};
use crate::linalg::{int_rank_and_unimodular, smith_valuations_mod_pn};
use crate::rings::pow_u64;
use std::collections::{BTreeMap, BTreeSet};

/// GL_size(F_q) with all its elements (row-major matrices).
#[derive(Clone, Debug)]
pub struct FiniteGL {
    pub q: u64,
    pub size: usize,
    pub elements: Vec<Vec<u64>>,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|i| i * i <= q).all(|i| !q.is_multiple_of(i))
}

fn det_nonzero(m: &[u64], n: usize, q: u64) -> bool {
    let rows: Vec<Vec<u64>> = m.chunks(n).map(|r| r.to_vec()).collect();
    crate::linalg::rank_fp(&rows, q) == n
}

impl FiniteGL {
    pub fn new(q: u64, size: usize) -> Result<Self> {
        if !is_prime(q) || size == 0 {
            return Err(Error::RangeError(format!("GL_{}(F_{})", size, q)));
        }
        let cells = (size * size) as u32;
        if (q as f64).powi(cells as i32) > 2e5 || pow_u64(q, size as u32) > 64 {
            return Err(Error::ScaleExceeded(format!("GL_{}(F_{})", size, q)));
        }
        let total = pow_u64(q, cells);
        let mut elements = Vec::new();
        for code in 0..total {
            let m = digits(code, q, size * size);
            if det_nonzero(&m, size, q) {
                elements.push(m);
            }
        }
        Ok(FiniteGL { q, size, elements })
    }

    /// ∏_{i<size} (q^size − q^i)
    pub fn order_formula(&self) -> u64 {
        (0..self.size).map(|i| pow_u64(self.q, self.size as u32) - pow_u64(self.q, i as u32)).product()
    }

    fn apply(&self, g: &[u64], v: u64) -> u64 {
        let n = self.size;
        let x = digits(v, self.q, n);
        let mut y = vec![0u64; n];
        for r in 0..n {
            y[r] = (0..n).map(|c| g[r * n + c] * x[c]).sum::<u64>() % self.q;
        }
        undigits(&y, self.q)
    }

    /// Image of a subspace (bitmask over vectors) under g.
    fn apply_space(&self, g: &[u64], mask: u64) -> u64 {
        let mut out = 0u64;
        for v in 0..pow_u64(self.q, self.size as u32) {
            if mask >> v & 1 == 1 {
                out |= 1 << self.apply(g, v);
            }
        }
        out
    }

    /// span(e_0, …, e_{k−1}) as a bitmask.
    fn standard_space(&self, k: usize) -> u64 {
        let mut out = 0u64;
        for v in 0..pow_u64(self.q, self.size as u32) {
            if digits(v, self.q, self.size)[k..].iter().all(|&x| x == 0) {
                out |= 1 << v;
            }
        }
        out
    }
}

fn digits(mut v: u64, q: u64, n: usize) -> Vec<u64> {
    let mut out = vec![0; n];
    for x in out.iter_mut() {
        *x = v % q;
        v /= q;
    }
    out
}

fn undigits(x: &[u64], q: u64) -> u64 {
    x.iter().rev().fold(0, |a, &d| a * q + d)
}

/// A flag as increasing subspace bitmasks.
pub type Flag = Vec<u64>;

/// G/P_J for J ⊆ Δ = {0, …, d−1} (α_i ↔ subspace dimension i+1).
#[derive(Clone, Debug)]
pub struct ParabolicCosets {
    pub j: BTreeSet<usize>,
    /// dims of the standard flag τ_J
    pub dims: Vec<usize>,
    pub flags: Vec<Flag>,
    pub stabilizer_order: usize,
    /// each coset (flag) has exactly |P_J| group elements mapping τ_J to it
    pub partition_ok: bool,
}

impl ParabolicCosets {
    pub fn new(g: &FiniteGL, j: &BTreeSet<usize>) -> Self {
        let d = g.size - 1;
        let dims: Vec<usize> = (0..d).filter(|i| !j.contains(i)).map(|i| i + 1).collect();
        let tau: Flag = dims.iter().map(|&k| g.standard_space(k)).collect();
        let mut classes: BTreeMap<Flag, usize> = BTreeMap::new();
        for h in &g.elements {
            let f: Flag = tau.iter().map(|&m| g.apply_space(h, m)).collect();
            *classes.entry(f).or_insert(0) += 1;
        }
        let stabilizer_order = classes[&tau];
        let partition_ok = classes.values().all(|&c| c == stabilizer_order)
            && classes.len() * stabilizer_order == g.elements.len();
        ParabolicCosets { j: j.clone(), dims, flags: classes.into_keys().collect(), stabilizer_order, partition_ok }
    }
}

/// Number of flags of the given dims in F_q^n (q-multinomial).
pub fn gaussian_flag_count(q: u64, n: usize, dims: &[usize]) -> u64 {
    let qfact = |k: usize| -> u128 { (1..=k).map(|i| ((pow_u64(q, i as u32) - 1) / (q - 1)) as u128).product() };
    let mut parts = Vec::new();
    let mut prev = 0;
    for &k in dims.iter().chain(std::iter::once(&n)) {
        parts.push(k - prev);
        prev = k;
    }
    (qfact(n) / parts.iter().map(|&k| qfact(k)).product::<u128>()) as u64
}

/// Coefficients for the acyclicity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeffs {
    Z,
    ModPn(u64, u32),
}

/// Cochain terms C^0 = Z (empty flag), …, C^top = Ind_{P_I}.
#[derive(Clone, Debug)]
pub struct InductionComplex {
    pub q: u64,
    pub d: usize,
    pub i: BTreeSet<usize>,
    pub terms: Vec<Vec<Flag>>,
    /// maps[s]: C^s → C^{s+1}, rows indexed by terms[s+1]
    pub maps: Vec<Vec<Vec<i64>>>,
    pub cosets: Vec<ParabolicCosets>,
    pub d_squared_zero: bool,
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << items.len()).map(|m| (0..items.len()).filter(|&i| m >> i & 1 == 1).map(|i| items[i]).collect()).collect()
}

pub fn build_complex(q: u64, d: usize, i: &BTreeSet<usize>) -> Result<InductionComplex> {
    if i.iter().any(|&a| a >= d) || i.len() >= d {
        return Err(Error::RangeError(format!("I = {:?} must be a proper subset of Δ", i)));
    }
    let g = FiniteGL::new(q, d + 1)?;
    let free: Vec<usize> = (0..d).filter(|a| !i.contains(a)).collect();
    let top = free.len();
    let mut terms: Vec<Vec<Flag>> = vec![Vec::new(); top + 1];
    let mut cosets = Vec::new();
    for chosen in subsets(&free) {
        let j: BTreeSet<usize> = (0..d).filter(|a| !chosen.contains(a)).collect();
        let c = ParabolicCosets::new(&g, &j);
        terms[chosen.len()].extend(c.flags.iter().cloned());
        cosets.push(c);
    }
    for t in terms.iter_mut() {
        t.sort();
    }
    let mut maps = Vec::new();
    for s in 0..top {
        let idx: BTreeMap<&Flag, usize> = terms[s].iter().enumerate().map(|(k, f)| (f, k)).collect();
        let mut m = vec![vec![0i64; terms[s].len()]; terms[s + 1].len()];
        for (r, f) in terms[s + 1].iter().enumerate() {
            for pos in 0..f.len() {
                let mut face = f.clone();
                face.remove(pos);
                let c = idx[&face];
                m[r][c] += if pos % 2 == 0 { 1 } else { -1 };
            }
        }
        maps.push(m);
    }
    let d_squared_zero = (1..maps.len()).all(|s| {
        let (a, b) = (&maps[s], &maps[s - 1]);
        a.iter().all(|row| (0..b[0].len()).all(|c| row.iter().zip(b).map(|(x, br)| x * br[c]).sum::<i64>() == 0))
    });
    Ok(InductionComplex { q, d, i: i.clone(), terms, maps, cosets, d_squared_zero })
}

/// Exactness data for one coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub coeffs: Coeffs,
    pub dims: Vec<usize>,
    /// exact at C^0, …, C^{top−1}
    pub exact: Vec<bool>,
    pub cokernel_rank: usize,
    pub cokernel_free: bool,
    /// Σ (−1)^s dim C^s + (−1)^{top+1} rank v
    pub euler: i64,
}

impl AcyclicityReport {
    pub fn acyclic(&self) -> bool {
        self.exact.iter().all(|&e| e) && self.cokernel_free && self.euler == 0
    }
}

pub fn acyclicity_check(cx: &InductionComplex, coeffs: Coeffs) -> AcyclicityReport {
    let dims: Vec<usize> = cx.terms.iter().map(|t| t.len()).collect();
    let top = dims.len() - 1;
    // (image size in "free rank units", image is a direct summand)
    let images: Vec<(usize, bool)> = cx
        .maps
        .iter()
        .map(|m| match coeffs {
            Coeffs::Z => int_rank_and_unimodular(m),
            Coeffs::ModPn(p, n) => {
                let v = smith_valuations_mod_pn(m, p, n);
                let units = v.iter().filter(|&&x| x == 0).count();
                (units, v.iter().all(|&x| x == 0 || x == n))
            }
        })
        .collect();
    let mut exact = Vec::new();
    for s in 0..top {
        let incoming = if s == 0 { 0 } else { images[s - 1].0 };
        let saturated = s == 0 || images[s - 1].1;
        exact.push(incoming + images[s].0 == dims[s] && saturated);
    }
    let (last, free) = if top == 0 { (0, true) } else { images[top - 1] };
    let cokernel_rank = dims[top] - last;
    let mut euler: i64 = dims.iter().enumerate().map(|(s, &x)| if s % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
    euler += if (top + 1).is_multiple_of(2) { cokernel_rank as i64 } else { -(cokernel_rank as i64) };
    AcyclicityReport { coeffs, dims, exact, cokernel_rank, cokernel_free: free, euler }
}

/// Rank of v_{P_I}^G(Z), its torsion-freeness, and the alternating count
/// Σ_{I⊆J⊆Δ} (−1)^{|J∖I|} |G/P_J|.
pub fn steinberg_rank(q: u64, d: usize, i: &BTreeSet<usize>) -> Result<(usize, bool, i64)> {
    let cx = build_complex(q, d, i)?;
    let rep = acyclicity_check(&cx, Coeffs::Z);
    let free: Vec<usize> = (0..d).filter(|a| !i.contains(a)).collect();
    let mut alt = 0i64;
    for chosen in subsets(&free) {
        let dims: Vec<usize> = chosen.iter().map(|a| a + 1).collect();
        let sign = if (free.len() - chosen.len()).is_multiple_of(2) { 1 } else { -1 };
        alt += sign * gaussian_flag_count(q, d + 1, &dims) as i64;
    }
    Ok((rep.cokernel_rank, rep.cokernel_free, alt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        for (q, n, ord) in [(2u64, 2usize, 6u64), (3, 2, 48), (2, 3, 168)] {
            let g = FiniteGL::new(q, n).unwrap();
            assert_eq!(g.elements.len() as u64, ord);
            assert_eq!(g.order_formula(), ord);
        }
        assert!(matches!(FiniteGL::new(5, 3), Err(Error::ScaleExceeded(_))));
    }

    #[test]
    fn coset_counts() {
        let g = FiniteGL::new(2, 3).unwrap();
        for (j, count) in [(vec![], 21), (vec![0], 7), (vec![1], 7), (vec![0, 1], 1)] {
            let j: BTreeSet<usize> = j.into_iter().collect();
            let c = ParabolicCosets::new(&g, &j);
            assert!(c.partition_ok);
            assert_eq!(c.flags.len(), count);
            assert_eq!(gaussian_flag_count(2, 3, &c.dims), count as u64);
        }
        let g = FiniteGL::new(3, 2).unwrap();
        assert_eq!(ParabolicCosets::new(&g, &BTreeSet::new()).flags.len(), 4);
    }

    #[test]
    fn steinberg_ranks() {
        let none = BTreeSet::new();
        for (q, d, r) in [(2u64, 1usize, 2usize), (3, 1, 3), (2, 2, 8)] {
            let (rank, free, alt) = steinberg_rank(q, d, &none).unwrap();
            assert_eq!((rank, free, alt), (r, true, r as i64));
            let cx = build_complex(q, d, &none).unwrap();
            assert!(cx.d_squared_zero);
            for c in [Coeffs::Z, Coeffs::ModPn(2, 1), Coeffs::ModPn(2, 2), Coeffs::ModPn(3, 2)] {
                let rep = acyclicity_check(&cx, c);
                assert!(rep.acyclic(), "{:?}", rep);
                assert_eq!(rep.cokernel_rank, r);
            }
        }
        // generalized: I = {0} in GL_3(F_2) gives 7 − 1 = 6
        let i: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(steinberg_rank(2, 2, &i).unwrap(), (6, true, 6));
    }
}
