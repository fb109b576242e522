use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqflab::arith::factor::is_squarefree;
use sqflab::arith::modular::{gcd, mod_inverse};
use sqflab::arith::primes::primes_up_to;
use sqflab::counters::lattice::lattice_count_brute;
use sqflab::counters::local::u_p_brute;
use sqflab::counters::variance::{double_sum_brute, double_sum_from, variance_m2_from};
use sqflab::counters::*;

#[test]
fn double_sum_matches_pair_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x = rng.gen_range(50..=2000u64);
        let q = rng.gen_range(1..=60u64.min(x));
        let m = loop {
            let m = rng.gen_range(-40i64..=40);
            if m != 0 && gcd(m.unsigned_abs(), q) == 1 {
                break m;
            }
        };
        assert_eq!(double_sum_s(x, q, m).unwrap(), double_sum_brute(x, q, m), "X={x} q={q} m={m}");
    }
}

#[test]
fn u_p_table_matches_brute_force() {
    for &p in primes_up_to(31).iter() {
        for q in [1u64, 2, 3, 35, 101] {
            if q % p == 0 {
                continue;
            }
            for m in (-30i64..=30).filter(|&m| m != 0 && is_squarefree(m.unsigned_abs())) {
                for l in -200i64..=200 {
                    assert_eq!(u_p_local(p, l, m, q).unwrap(), u_p_brute(p, l, m, q), "p={p} q={q} m={m} l={l}");
                }
            }
        }
    }
}

#[test]
fn lattice_matches_four_loops() {
    for (j, k) in [(1u64, 1u64), (1, 2), (2, 1), (3, 2), (2, 5)] {
        for q in [1u64, 3, 7, 10] {
            for (m1, m2) in [(1i64, 1i64), (3, 1), (1, -1), (-7, 9)] {
                if gcd(m1.unsigned_abs() * m2.unsigned_abs(), q) != 1 {
                    continue;
                }
                for x in [10u64, 137, 500] {
                    let fast = lattice_count_n(j, k, m1, m2, x, q).unwrap().count;
                    assert_eq!(fast, lattice_count_brute(j, k, m1, m2, x, q), "J={j} K={k} q={q} m=({m1},{m2}) X={x}");
                }
            }
        }
    }
}

#[test]
fn error_sum_matches_coprime_count() {
    for (x, q) in [(10_000u64, 7u64), (50_000, 30), (20_000, 997)] {
        let rc = ResidueCounts::new(x, q).unwrap();
        let ev = variance::error_vector_from(&rc, 1e-12).unwrap();
        let total: f64 = ev.errors.iter().map(|(_, e)| e.value).sum();
        let phi = ev.errors.len() as f64;
        let expect = rc.coprime_total() as f64 - phi * ev.main_term.value;
        assert!((total - expect).abs() <= 1e-9 * rc.coprime_total() as f64, "X={x} q={q}");
        for (a, e) in &ev.errors {
            let back = e.value + ev.main_term.value;
            assert!((back - ev.counts[*a as usize] as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn variance_invariant_under_inverse_multiplier() {
    let rc = ResidueCounts::new(30_000, 101).unwrap();
    for m in [2i64, 5, -3, 77] {
        let mbar = mod_inverse(m, 101).unwrap() as i64;
        let a = variance_m2_from(&rc, m, 1e-12).unwrap();
        let b = variance_m2_from(&rc, mbar, 1e-12).unwrap();
        assert!((a.m2_exact.value - b.m2_exact.value).abs() <= a.m2_exact.abs_err + b.m2_exact.abs_err);
        assert_eq!(a.s_exact, double_sum_from(&rc, m).unwrap());
        assert!(a.decomposition_residual <= 1e-8);
    }
}

#[test]
fn croft_coprime_terms_reduce_to_error_squares() {
    // q prime: coprime classes use (q/phi(q)) (6/pi^2) (q/(q+1)) X/q = C(q) X/q
    let (x, q) = (20_000u64, 13u64);
    let croft = croft_variance(x, q, 1e-12).unwrap();
    let ev = error_vector(x, q, 1e-12).unwrap();
    let coprime: f64 = ev.errors.iter().map(|(_, e)| e.value * e.value).sum();
    let c0 = ev.counts[0] as f64;
    let expect0 = 6.0 / std::f64::consts::PI.powi(2) * (q as f64 / (q + 1) as f64) * x as f64 / q as f64;
    let zero_term = (c0 - expect0).powi(2);
    assert!((croft.value - coprime - zero_term).abs() < 1e-6 * croft.value);
    // q = 4: the class a = 0 has d = 4 and expected value zero
    let c = croft_variance(1000, 4, 1e-12).unwrap();
    let ev = error_vector(1000, 4, 1e-12).unwrap();
    assert_eq!(ev.counts[0], 0);
    assert!(c.value > 0.0);
}

#[test]
fn n_d_count_examples() {
    let c = n_d_count(2, 0, 1, 3, 10).unwrap();
    assert_eq!(c.count, 2);
    // d = 1 reduces to the coprime integers of I(l)
    for l in -5i64..=5 {
        let iv = interval_i(l, 3, 7, 200.0).unwrap();
        let direct = (1..200u64).filter(|&n| gcd(n, 7) == 1 && iv.contains(n as f64)).count() as u64;
        assert_eq!(n_d_count(1, l, 3, 7, 200).unwrap().count, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn u_d_is_multiplicative(l in -500i64..500, m in prop::sample::select(vec![1i64, -1, 2, 3, 5, 6, -10, 15, 30]),
                             q in prop::sample::select(vec![1u64, 7, 11, 49, 77])) {
        let d6 = local::u_d(6, l, m, q).unwrap();
        prop_assert_eq!(d6, u_p_local(2, l, m, q).unwrap() * u_p_local(3, l, m, q).unwrap());
        let d30 = local::u_d(30, l, m, q).unwrap();
        prop_assert_eq!(d30, d6 * u_p_local(5, l, m, q).unwrap());
    }

    #[test]
    fn interval_membership(l in -50i64..50, m in -6i64..6, q in 1u64..20, n in 0.0f64..100.0) {
        prop_assume!(m != 0);
        let iv = interval_i(l, m, q, 100.0).unwrap();
        let inside = n > iv.lo && n < iv.hi;
        // skip samples numerically on an endpoint
        prop_assume!((n - iv.lo).abs() > 1e-9 && (n - iv.hi).abs() > 1e-9);
        prop_assert_eq!(inside, iv.contains(n));
    }

    #[test]
    fn dispersion_residual_small(x in 200u64..20_000, q in 1u64..200, m in -50i64..50) {
        prop_assume!(q <= x && m != 0 && gcd(m.unsigned_abs(), q) == 1);
        let r = dispersion_check(x, q, m, 1e-12).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}
