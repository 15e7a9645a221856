use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rustfft::num_complex::Complex64;

use klstrata::bilinear::{bilinear_form, moment_identity_check, CoeffSeq};
use klstrata::chars::{classify_tuple, twist_to_cgm, DualityKind, TwistOutcome};
use klstrata::complete::{complete_sums, eval_k, ParamTuple};
use klstrata::strata::{
    box_count_variety, diagonal_count_formula, is_diagonal, stratum_scan, z_fiber_count, BoxShape, Sampler,
    Variety,
};
use klstrata::{kl_table_fast, CharTuple, Error, PrimeField};

fn field(q: u64) -> Arc<PrimeField> {
    Arc::new(PrimeField::new(q).unwrap())
}

fn counts(idx: &[u64]) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for &i in idx {
        *m.entry(i).or_insert(0) += 1;
    }
    m
}

/// Stable under multiplication by every character of order dividing `d`.
fn brute_kummer(idx: &[u64], n: u64) -> bool {
    let k = idx.len() as u64;
    let m = counts(idx);
    (2..=k).filter(|d| k % d == 0 && n % d == 0).any(|d| {
        (0..n).filter(|&e| (e * d) % n == 0).all(|eta| {
            m.iter().all(|(&a, &c)| m.get(&((a + eta) % n)) == Some(&c))
        })
    })
}

/// All `ξ` with `{ξ χ^{-1}} = {χ}` as multisets.
fn brute_dualizing(idx: &[u64], n: u64) -> Vec<(u64, bool)> {
    let k = idx.len() as u64;
    let m = counts(idx);
    let lambda = idx.iter().sum::<u64>() % n;
    (0..n)
        .filter(|&xi| counts(&idx.iter().map(|&a| (xi + n - a) % n).collect::<Vec<_>>()) == m)
        .map(|xi| (xi, k % 2 == 0 && (xi * (k / 2)) % n == lambda))
        .collect()
}

#[test]
fn classifier_matches_brute_force() {
    for q in [3u64, 5, 7, 11, 13] {
        let n = q - 1;
        let f = field(q);
        for k in 1..=3usize {
            let total = n.pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let idx: Vec<u64> = (0..k)
                    .map(|_| {
                        let v = c % n;
                        c /= n;
                        v
                    })
                    .collect();
                let t = CharTuple::from_indices(&f, &idx).unwrap();
                let r = classify_tuple(&t);
                let ki = brute_kummer(&idx, n);
                assert_eq!(r.kummer_induced, ki, "q={q} {idx:?}");
                let mut got: Vec<(u64, bool)> = r
                    .dualizing
                    .iter()
                    .map(|d| (d.xi_index, d.kind == DualityKind::Alternating))
                    .collect();
                got.sort_unstable();
                let want = brute_dualizing(&idx, n);
                assert_eq!(got, want, "q={q} {idx:?}");
                let symmetric = want.iter().any(|&(_, alt)| !alt);
                assert_eq!(r.nio, !ki && (k % 2 == 1 || !symmetric), "q={q} {idx:?}");
                let lambda_trivial = idx.iter().sum::<u64>() % n == 0;
                let trivial_alt = want.contains(&(0, true));
                let cgm = !ki && lambda_trivial && (k % 2 == 1 || want.is_empty() || trivial_alt);
                assert_eq!(r.cgm, cgm, "q={q} {idx:?}");
            }
        }
    }
}

#[test]
fn twisting_nio_reaches_cgm() {
    for q in [7u64, 13, 17] {
        let f = field(q);
        let n = q - 1;
        for a in 0..n {
            for b in 0..n {
                let t = CharTuple::from_indices(&f, &[a, b]).unwrap();
                match twist_to_cgm(&t) {
                    TwistOutcome::Twisted { tuple, .. } => {
                        let tw = CharTuple::from_indices(&f, &tuple).unwrap();
                        assert!(classify_tuple(&tw).cgm, "q={q} ({a},{b}) -> {tuple:?}");
                    }
                    TwistOutcome::NotNio => assert!(!classify_tuple(&t).nio),
                    TwistOutcome::NeedsExtension => assert!(classify_tuple(&t).nio),
                }
            }
        }
    }
}

#[test]
fn coprime_lengths_are_never_kummer() {
    // q - 1 = 10 and k = 3
    let f = field(11);
    for a in 0..10 {
        for b in 0..10 {
            for c in 0..10 {
                let t = CharTuple::from_indices(&f, &[a, b, c]).unwrap();
                assert!(!classify_tuple(&t).kummer_induced);
            }
        }
    }
}

#[test]
fn generic_fiber_dominates_at_large_q() {
    // The observed generic value is attained by most parameters once q is
    // large compared to the number of possible root collisions.
    let f = PrimeField::new(1009).unwrap();
    for (k, l, generic) in [(2usize, 2usize, 5usize), (3, 2, 8), (2, 3, 12)] {
        let s = stratum_scan(&f, k, l, Sampler::Random { samples: 1000, seed: 0 }).unwrap();
        assert_eq!(s.generic, Some(generic));
        assert!(s.generic_fraction >= 0.9, "(k,l)=({k},{l}): {}", s.generic_fraction);
    }
}

#[test]
fn half_open_diagonal_box_is_within_three_b_squared() {
    let f = PrimeField::new(997).unwrap();
    for big_b in [10u64, 20, 40] {
        let half = box_count_variety(&f, &Variety::Diagonal, big_b, 2, BoxShape::HalfOpen).unwrap();
        let closed = box_count_variety(&f, &Variety::Diagonal, big_b, 2, BoxShape::Closed).unwrap();
        assert_eq!(half, 3 * big_b * big_b - 2 * big_b);
        assert_eq!(closed, 3 * (big_b + 1) * (big_b + 1) - 2 * (big_b + 1));
        assert!(half <= 3 * big_b * big_b);
    }
}

#[test]
fn moment_identity_grid() {
    for q in [13u64, 17, 29, 37, 41] {
        let f = PrimeField::new(q).unwrap();
        for xi in f.characters().filter(|c| c.is_even()) {
            for n in 1..=3 {
                assert!(moment_identity_check(&f, &xi, n).unwrap().diff <= 1e-8);
            }
        }
    }
}

/// 𝐊 from definitional Kloosterman sums, without any table.
fn brute_k(f: &PrimeField, r: u64, b: &[u64]) -> Complex64 {
    let t = CharTuple::trivial(f, 2);
    let kl = |x: u64| {
        if x % f.q() == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            klstrata::kl_naive(f, &t, x % f.q()).unwrap()
        }
    };
    let l = b.len() / 2;
    let mut z = Complex64::new(1.0, 0.0);
    for i in 0..l {
        z *= kl(r + b[i]) * kl(r + b[i + l]).conj();
    }
    z
}

#[test]
fn sums_match_table_free_oracle() {
    for q in [7u64, 11] {
        let f = field(q);
        let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1).unwrap();
        for b in [[1u64, 2, 4, 5], [0, 3, 3, 6], [2, 2, 5, 1]] {
            let pt = ParamTuple::new(b.to_vec()).unwrap();
            let mut si = Complex64::new(0.0, 0.0);
            let mut sii = Complex64::new(0.0, 0.0);
            for r in 0..q {
                assert!((eval_k(&table, r, &pt) - brute_k(&f, r, &b)).norm() < 1e-12);
                let terms: Vec<Complex64> = (1..q)
                    .map(|s| {
                        let sb: Vec<u64> = b.iter().map(|&x| x * s % q).collect();
                        brute_k(&f, r * s % q, &sb)
                    })
                    .collect();
                for (i, x) in terms.iter().enumerate() {
                    si += x;
                    for (j, y) in terms.iter().enumerate() {
                        if i != j {
                            sii += x * y.conj();
                        }
                    }
                }
            }
            let rep = complete_sums(&table, &pt).unwrap();
            assert!((Complex64::from(rep.sigma_i) - si).norm() < 1e-6);
            assert!((rep.sigma_ii - sii.re).abs() < 1e-6 && sii.im.abs() < 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn dlog_round_trip(x in 1u64..1009) {
        let f = PrimeField::new(1009).unwrap();
        prop_assert_eq!(f.exp(f.dlog(x)), x);
        prop_assert_eq!(f.mul(x, f.inv(x)), 1);
    }

    #[test]
    fn deligne_bound_random_tuples(a in 0u64..100, b in 0u64..100, c in 0u64..100) {
        let f = field(101);
        let t = CharTuple::from_indices(&f, &[a, b, c]).unwrap();
        let table = kl_table_fast(&f, &t, 1).unwrap();
        prop_assert!(table.sup_norm() <= 3.0 + 1e-9);
    }

    #[test]
    fn translation_covariance(b in prop::collection::vec(0u64..53, 4), c in 0u64..53, r in 0u64..53) {
        let f = field(53);
        let table = kl_table_fast(&f, &CharTuple::from_indices(&f, &[0, 5]).unwrap(), 1).unwrap();
        let pt = ParamTuple::new(b).unwrap();
        prop_assert_eq!(eval_k(&table, r, &pt.translate(&f, c)), eval_k(&table, (r + c) % 53, &pt));
    }

    #[test]
    fn paired_sigma_i_nonnegative(half in prop::collection::vec(0u64..41, 2)) {
        let f = field(41);
        let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1).unwrap();
        let rep = complete_sums(&table, &ParamTuple::paired(&half)).unwrap();
        prop_assert!(rep.sigma_i.im.abs() <= 1e-6);
        prop_assert!(rep.sigma_i.re >= -1e-6);
        prop_assert!((rep.sigma_ii - (rep.sum_abs_r_sq - rep.sum_abs_k_sq)).abs() <= 1e-6);
        prop_assert!(rep.sum_abs_r_sq >= 0.0 && rep.sum_abs_k_sq >= 0.0);
    }

    #[test]
    fn merging_coordinates_never_raises_z(b in prop::collection::vec(0u64..1009, 4), i in 0usize..4, j in 1usize..4) {
        let f = PrimeField::new(1009).unwrap();
        let pt = ParamTuple::new(b.clone()).unwrap();
        let mut merged = b.clone();
        merged[(i + j) % 4] = b[i];
        let mt = ParamTuple::new(merged).unwrap();
        prop_assume!(!is_diagonal(&mt));
        match (z_fiber_count(&f, 2, &pt), z_fiber_count(&f, 2, &mt)) {
            (Ok(a), Ok(m)) => prop_assert!(m.z_count <= a.z_count),
            (_, Err(Error::DegenerateFiber)) | (Err(Error::DegenerateFiber), _) => {}
            (x, y) => prop_assert!(false, "{:?} {:?}", x, y),
        }
    }

    #[test]
    fn bilinear_envelope(m in 1u64..20, n in 1u64..20, seed in 0u64..1000) {
        let f = field(101);
        let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1).unwrap();
        let a = CoeffSeq::random_phases(m, seed);
        let b = CoeffSeq::random_phases(n, seed + 1);
        let v = bilinear_form(&table, &a, &b).unwrap();
        prop_assert!(v.norm() <= 2.0 * a.l1() * b.l1() + 1e-9);
    }

    #[test]
    fn diagonal_count_matches_formula(big_b in 0u64..30, l in 1usize..4) {
        let f = PrimeField::new(997).unwrap();
        let got = box_count_variety(&f, &Variety::Diagonal, big_b, l, BoxShape::Closed).unwrap();
        prop_assert_eq!(got as u128, diagonal_count_formula(big_b + 1, 2 * l));
    }
}
