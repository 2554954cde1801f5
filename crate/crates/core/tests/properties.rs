//! Property tests for the structural invariants of each module.

use num_bigint::BigInt;
use proptest::prelude::*;
use std::collections::BTreeSet;
use wittkit::derham_witt::{act, enumerate_basis, DRWElement, DrwOp};
use wittkit::local_cohomology::{enumerate_index, in_region};
use wittkit::proj_cech::{closed_form_lengths, witt_cohomology};
use wittkit::rings::{binom_u, graded_basis, CommRing, Laurent, Mono, PrimeFieldElem, Zz};
use wittkit::sampling::{random_witt_poly, rng};
use wittkit::steinberg::{acyclicity_check, build_complex, gaussian_flag_count, Coeffs};
use wittkit::suites::{run_suite, SuiteConfig};
use wittkit::weyl::{apply_word, normal_form, WeylElement, WordToken};
use wittkit::witt_core::{ghost, teichmuller, tilde_w, tilde_w_inverse, WittVector};
use wittkit::witt_diff::lift_operator;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

/// Laurent polynomial in z0 (nonnegative) and z1 (invertible).
fn laurent(p: u64, e: u32) -> impl Strategy<Value = Laurent> {
    prop::collection::vec(((0i64..4, -3i64..4), -20i64..20), 0..6).prop_map(move |ts| {
        let terms: Vec<(Mono, i64)> = ts.into_iter().map(|((a, b), c)| (vec![a, b], c)).collect();
        Laurent::from_terms(p, e, 2, &[1], terms).unwrap()
    })
}

fn poly1(p: u64) -> impl Strategy<Value = Laurent> {
    prop::collection::vec((0i64..7, 0i64..20), 0..5).prop_map(move |ts| {
        Laurent::from_terms(p, 1, 1, &[], ts.into_iter().map(|(a, c)| (vec![a], c)).collect::<Vec<_>>()).unwrap()
    })
}

fn laurent_triple() -> impl Strategy<Value = (Laurent, Laurent, Laurent)> {
    (prime(), 1u32..=2).prop_flat_map(|(p, e)| (laurent(p, e), laurent(p, e), laurent(p, e)))
}

fn int_witt(p: u64, len: usize) -> impl Strategy<Value = WittVector<Zz>> {
    prop::collection::vec(-50i64..50, len).prop_map(move |v| WittVector::new(p, v.into_iter().map(Zz::from_i64).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms((a, b, c) in laurent_triple()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert!(a.terms().values().all(|&c| c != 0 && c < a.modulus()));
    }

    #[test]
    fn prime_field_frobenius_is_identity(p in prop::sample::select(vec![2u64, 3, 5, 7]), v in 0i64..7) {
        let a = PrimeFieldElem::new(p, v);
        prop_assert_eq!(a.pow(p), a);
    }

    #[test]
    fn graded_basis_stars_and_bars(d in 1usize..5, m in 0i64..7) {
        let slice = graded_basis(d, m, &vec![(0, m); d]);
        prop_assert_eq!(slice.basis.len() as u64, binom_u(m + d as i64 - 1, d as i64 - 1));
        prop_assert!(slice.basis.iter().all(|e| e.iter().sum::<i64>() == m));
    }

    #[test]
    fn ghost_components_are_additive_and_multiplicative(
        (p, x, y) in (prime(), 1usize..=4).prop_flat_map(|(p, n)| (Just(p), int_witt(p, n), int_witt(p, n)))
    ) {
        let (gx, gy) = (ghost(&x), ghost(&y));
        let gs = ghost(&x.add(&y).unwrap());
        let gm = ghost(&x.mul(&y).unwrap());
        let gn = ghost(&x.neg().unwrap());
        for k in 0..x.len() {
            prop_assert_eq!(&gs[k], &(&gx[k] + &gy[k]));
            prop_assert_eq!(&gm[k], &(&gx[k] * &gy[k]));
            prop_assert_eq!(&gn[k], &(-&gx[k]));
        }
        // independent oracle for the ghost map itself
        for k in 0..x.len() {
            let mut w = BigInt::from(0);
            for i in 0..=k {
                let xi = &x.coords[i].0;
                w += BigInt::from(p).pow(i as u32) * xi.pow(p.pow((k - i) as u32) as u32);
            }
            prop_assert_eq!(&gx[k], &w);
        }
    }

    #[test]
    fn witt_structure_identities(p in prime(), n in 1usize..=3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_witt_poly(&mut g, p, n, 1, 3, 4);
        let y = random_witt_poly(&mut g, p, n, 1, 3, 4);
        let px = x.scalar_mul(p as i64).unwrap();
        prop_assert_eq!(x.verschiebung().frobenius().unwrap(), px.clone());
        let long = random_witt_poly(&mut g, p, n + 1, 1, 3, 4);
        prop_assert_eq!(long.frobenius().unwrap().verschiebung(), long.scalar_mul(p as i64).unwrap());
        let xv = long.mul(&y.verschiebung()).unwrap();
        let vf = long.frobenius().unwrap().mul(&y).unwrap().verschiebung();
        prop_assert_eq!(xv, vf);
        prop_assert_eq!(px, x.scalar_mul_char_p(p as i64).unwrap());
        let a = &x.coords[0];
        prop_assert_eq!(teichmuller(p, a, n + 1).frobenius().unwrap(), teichmuller(p, &a.pth_power(p), n));
        let parts = x.decompose();
        prop_assert_eq!(WittVector::recompose(p, n, a, &parts).unwrap(), x.clone());
        let w = x.add(&y).unwrap();
        prop_assert_eq!(tilde_w(&w), tilde_w(&x).add(&tilde_w(&y)));
        prop_assert_eq!(tilde_w(&x.mul(&y).unwrap()), tilde_w(&x).mul(&tilde_w(&y)));
        prop_assert_eq!(tilde_w_inverse(&tilde_w(&x), n - 1).unwrap(), x);
    }

    #[test]
    fn restriction_sequence_is_exact(p in prime(), n in 1usize..=2, r in 1usize..=2, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_witt_poly(&mut g, p, n + r, 1, 3, 3);
        // V^n lands in the kernel of restriction to length n
        let v = random_witt_poly(&mut g, p, r, 1, 3, 3).verschiebung_pow(n);
        prop_assert!(v.restrict_to(n).unwrap().is_zero());
        // anything restricting to zero is V^n of its top coordinates
        let k = x.sub(&WittVector::recompose(p, n + r, &x.coords[0], &x.restrict_to(n).unwrap().decompose()).unwrap()).unwrap();
        prop_assert!(k.restrict_to(n).unwrap().is_zero());
        let top = WittVector::new(p, k.coords[n..].to_vec());
        prop_assert_eq!(top.verschiebung_pow(n), k);
    }
}

fn word() -> impl Strategy<Value = Vec<WordToken>> {
    prop::collection::vec(
        prop_oneof![
            (0i64..4).prop_map(|k| WordToken::Z(0, k)),
            (0u64..3).prop_map(|k| WordToken::D(0, k)),
            (0u64..7).prop_map(|k| WordToken::DPow(0, k)),
        ],
        0..=5,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_application_equivalent((p, f) in prime().prop_flat_map(|p| (Just(p), poly1(p))), e in 1u32..=2, w in word()) {
        let f = f.lift_to(e);
        let nf = normal_form(&w, p, e, 1).unwrap();
        prop_assert_eq!(nf.apply(&f).unwrap(), apply_word(&w, p, e, &f).unwrap());
        for ((_, r), &c) in nf.terms() {
            prop_assert!(c != 0);
            prop_assert!(r.iter().all(|&x| x < 64));
        }
    }

    #[test]
    fn divided_power_leibniz((p, f, g) in prime().prop_flat_map(|p| (Just(p), poly1(p), poly1(p))), r in 0u64..9) {
        let d = |k: u64, h: &Laurent| WeylElement::d_div(p, 1, 1, 0, k).apply(h).unwrap();
        let lhs = d(r, &f.mul(&g));
        let mut rhs = f.zero_like();
        for i in 0..=r {
            rhs = rhs.add(&d(i, &f).mul(&d(r - i, &g)));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_power_compatibility((p, f) in prime().prop_flat_map(|p| (Just(p), poly1(p))), s in 0u64..5) {
        let d = |k: u64, h: &Laurent| WeylElement::d_div(p, 1, 1, 0, k).apply(h).unwrap();
        prop_assert_eq!(d(s, &f).pth_power(p), d(s * p, &f.pth_power(p)));
    }

    #[test]
    fn lifts_reduce_to_their_provenance(p in prime(), n in 0usize..=2, s in 0i64..4, r in 0u64..7, seed in any::<u64>()) {
        let base = WeylElement::term(p, 1, vec![s], vec![r], 1);
        let op = lift_operator(&base, n);
        prop_assert_eq!(op.restrict_to_base().unwrap(), base);
        let mut g = rng(seed);
        let x = random_witt_poly(&mut g, p, n + 1, 1, 3, 4);
        prop_assert!(op.apply_witt(&x).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn drw_identities_on_basis(p in prop::sample::select(vec![2u64, 3]), n in 1u32..=3, d in 1usize..=3, pick in any::<prop::sample::Index>(), i in 0usize..=3) {
        let i = i.min(d);
        let keys = enumerate_basis(p, n, d, i, 4);
        let distinct: BTreeSet<_> = keys.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), keys.len());
        prop_assume!(!keys.is_empty());
        let (r, part) = pick.get(&keys).clone();
        let e = DRWElement::basis(p, n, r, part, 1).unwrap();
        let dd = act(DrwOp::D, &act(DrwOp::D, &e).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
        let pe = e.scale(p as i64);
        prop_assert_eq!(act(DrwOp::F, &act(DrwOp::V, &e).unwrap()).unwrap(), pe.clone());
    }

    #[test]
    fn line_bundle_lengths_match_closed_forms(p in prop::sample::select(vec![2u64, 3]), d in 1usize..=2, n in 1usize..=2, a in -5i64..=3) {
        let mods = witt_cohomology(p, d, n, a).unwrap();
        let lens: Vec<u64> = mods.iter().map(|m| m.length()).collect();
        prop_assert_eq!(&lens, &closed_form_lengths(p, d, n, a));
        for m in &mods[1..d] {
            prop_assert!(m.is_zero());
        }
        if a < 0 {
            prop_assert!(mods[0].is_zero());
        }
        let top: u64 = (0..n as u32)
            .map(|l| -(p.pow(l) as i64) * a - 1)
            .filter(|&m| m - d as i64 >= 0)
            .map(|m| binom_u(m, d as i64))
            .sum();
        prop_assert_eq!(lens[d], top);
    }

    #[test]
    fn index_sets_respect_the_region(d in 1usize..=3, j in 0usize..=2, bound in 1i64..6) {
        prop_assume!(j < d);
        for u in enumerate_index(d, j, bound) {
            prop_assert!(in_region(&u, j));
            prop_assert_eq!(u.iter().sum::<i64>(), 0);
            prop_assert!(u[..=j].iter().all(|&x| x >= 0) && u[j + 1..].iter().all(|&x| x < 0));
        }
    }

    #[test]
    fn induction_complexes_are_acyclic(d in 1usize..=2, mask in 0u8..4) {
        let set: BTreeSet<usize> = (0..d).filter(|b| mask & (1 << b) != 0).collect();
        prop_assume!(set.len() < d);
        let cx = build_complex(2, d, &set).unwrap();
        prop_assert!(cx.d_squared_zero);
        for c in &cx.cosets {
            prop_assert!(c.partition_ok);
            prop_assert_eq!(c.flags.len() as u64, gaussian_flag_count(2, d + 1, &c.dims));
        }
        for coeffs in [Coeffs::Z, Coeffs::ModPn(2, 2), Coeffs::ModPn(3, 1)] {
            let rep = acyclicity_check(&cx, coeffs);
            prop_assert!(rep.acyclic());
            prop_assert_eq!(rep.euler, 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn same_seed_same_report(seed in any::<u64>()) {
        let mut cfg = SuiteConfig::new("weyl");
        cfg.p = Some(2);
        cfg.samples = 20;
        cfg.seed = seed;
        let strip = |mut r: wittkit::suites::SuiteReport| {
            for c in &mut r.cases {
                c.millis = 0;
            }
            format!("{:?}", r)
        };
        prop_assert_eq!(strip(run_suite(&cfg).unwrap()), strip(run_suite(&cfg).unwrap()));
    }
}
