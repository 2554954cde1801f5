//! Dense linear algebra over F_p, Z/p^n and Z.

use crate::rings::{inv_mod, pow_u64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row echelon form over F_p in place; returns pivot columns.
fn echelon_fp(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !a[k][c].is_multiple_of(p)) else { continue };
        a.swap(r, k);
        let inv = inv_mod(a[r][c], p).unwrap();
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows {
            if k != r && a[k][c] != 0 {
                let f = a[k][c];
                for j in 0..cols {
                    a[k][j] = (a[k][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_fp(a: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    echelon_fp(&mut m, p).len()
}

/// Some x with A x = b over F_p, or None.
pub fn solve_fp(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &y)| {
            let mut v: Vec<u64> = r.iter().map(|x| x % p).collect();
            v.push(y % p);
            v
        })
        .collect();
    if a.is_empty() {
        return if b.iter().all(|&y| y % p == 0) { Some(vec![]) } else { None };
    }
    let piv = echelon_fp(&mut m, p);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = m[r][cols];
    }
    Some(x)
}

/// Valuation profile of the cokernel-relevant part of A over Z/p^e: for an
/// m×k matrix returns the diagonal of a Smith form over Z/p^e as p-adic
/// valuations (e meaning zero), in increasing order.
pub fn smith_valuations_mod_pn(a: &[Vec<i64>], p: u64, e: u32) -> Vec<u32> {
    let q = pow_u64(p, e) as i128;
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(q)).collect()).collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let val = |x: i128| -> u32 {
        if x % q == 0 {
            return e;
        }
        let mut x = x;
        let mut v = 0;
        while x % p as i128 == 0 {
            x /= p as i128;
            v += 1;
        }
        v
    };
    let mut out = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // pivot of minimal valuation
        let mut best: Option<(u32, usize, usize)> = None;
        for i in r0..rows {
            for j in c0..cols {
                let v = val(m[i][j]);
                if v < e && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        m.swap(r0, bi);
        for row in m.iter_mut() {
            row.swap(c0, bj);
        }
        let pv = pow_u64(p, v) as i128;
        let unit = m[r0][c0] / pv;
        let uinv = inv_mod((unit.rem_euclid(q)) as u64, q as u64).unwrap() as i128;
        for j in c0..cols {
            m[r0][j] = (m[r0][j] * uinv).rem_euclid(q);
        }
        for i in 0..rows {
            if i != r0 && m[i][c0] != 0 {
                let f = m[i][c0] / pv;
                for j in c0..cols {
                    m[i][j] = (m[i][j] - f * m[r0][j]).rem_euclid(q);
                }
            }
        }
        for j in c0 + 1..cols {
            if m[r0][j] != 0 {
                let f = m[r0][j] / pv;
                for i in r0..rows {
                    m[i][j] = (m[i][j] - f * m[i][c0]).rem_euclid(q);
                }
            }
        }
        out.push(v);
        r0 += 1;
        c0 += 1;
    }
    out
}

/// Invariant factors (nonzero diagonal entries, positive, each dividing the
/// next) of an integer matrix.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // smallest nonzero entry as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let f = m[i][t].div_floor(&m[t][t]);
                    for j in t..cols {
                        let s = &f * &m[t][j];
                        m[i][j] -= s;
                    }
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let f = m[t][j].div_floor(&m[t][t]);
                    for i in t..rows {
                        let s = &f * &m[i][t];
                        m[i][j] -= s;
                    }
                    if !m[t][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..cols {
                        let s = m[i][j].clone();
                        m[t][j] += s;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank of an integer matrix together with "every invariant factor is 1".
pub fn int_rank_and_unimodular(a: &[Vec<i64>]) -> (usize, bool) {
    let s = smith_normal_form(a);
    let unimod = s.iter().all(|x| x.is_one());
    (s.len(), unimod)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_solve_and_rank() {
        let a = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_fp(&a, 7), 2);
        let x = solve_fp(&a, &[1, 2, 5], 7).unwrap();
        for (r, b) in a.iter().zip([1u64, 2, 5]) {
            assert_eq!(r.iter().zip(&x).map(|(u, v)| u * v).sum::<u64>() % 7, b);
        }
        assert!(solve_fp(&a, &[1, 0, 0], 7).is_none());
    }

    #[test]
    fn smith_examples() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a);
        assert_eq!(s, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(smith_valuations_mod_pn(&a, 2, 3), vec![1, 1, 2]);
        assert_eq!(smith_valuations_mod_pn(&a, 3, 2), vec![0, 1, 1]);
        assert_eq!(int_rank_and_unimodular(&[vec![1, 1], vec![0, 1]]), (2, true));
        assert_eq!(int_rank_and_unimodular(&[vec![2, 0]]), (1, false));
    }
}
