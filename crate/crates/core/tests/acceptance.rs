//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line to
//! stderr (unbuffered by the test harness) and the test fails if any does.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqflab::arith::sieve::{squarefree_count_mobius, squarefree_window};
use sqflab::expsums::sweeps::{crt_sweep, s1_bounds, s2_bounds, zero_identity};
use sqflab::multiplicative::identity_suite;
use sqflab::verify::batteries::{
    convergence_rows, counter_oracles, dispersion_grid, f_q_zero_grid, main_term_records, mellin_records, CONVERGENCE_Q,
    CONVERGENCE_X, PRINTED_C,
};
use sqflab::VerificationRecord;

const EPS: f64 = 1e-12;

struct Outcome {
    n: usize,
    label: &'static str,
    pass: bool,
    detail: String,
}

fn say(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

fn judge(n: usize, label: &'static str, records: &[VerificationRecord], elapsed: Duration, limit: Duration, min_records: usize) -> Outcome {
    let failed: Vec<&VerificationRecord> = records.iter().filter(|r| r.failed()).collect();
    let mut detail = format!("{} records, {} failed, {:.1}s (limit {}s)", records.len(), failed.len(), elapsed.as_secs_f64(), limit.as_secs());
    for r in failed.iter().take(3) {
        detail.push_str(&format!("; {} {} lhs={} rhs={}", r.check_id, r.params_string(), r.lhs, r.rhs));
    }
    let pass = failed.is_empty() && elapsed <= limit && records.len() >= min_records;
    Outcome { n, label, pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// `n` squarefree by trial division with every `d^2 <= n`.
fn mu_squared_oracle(n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

fn criterion_sieve() -> Outcome {
    let (res, dt) = timed(|| {
        let x = 100_000_000u64;
        let w = squarefree_window(1, x + 1).unwrap();
        let mut recs = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut agree = 0u64;
        for _ in 0..100_000 {
            let n = rng.gen_range(1..=x);
            if w.is_squarefree(n) == mu_squared_oracle(n) {
                agree += 1;
            }
        }
        recs.push(VerificationRecord::exact("sieve.sampled_oracle", Default::default(), agree as f64, 1e5, agree == 100_000));
        let six = 6.0 / std::f64::consts::PI.powi(2);
        for xx in [10_000u64, 1_000_000, 100_000_000] {
            let c = w.count_up_to(xx);
            let m = squarefree_count_mobius(xx);
            recs.push(VerificationRecord::exact(
                "sieve.count_vs_mobius_sum",
                sqflab::params! {"X" => xx},
                c as f64,
                m as f64,
                c == m,
            ));
            recs.push(VerificationRecord::report(
                "sieve.density_gap",
                sqflab::params! {"X" => xx},
                (c as f64 - six * xx as f64).abs(),
                2.0 * (xx as f64).sqrt(),
            ));
        }
        recs
    });
    let mut o = judge(10, "squarefree sieve", &res, dt, secs(120), 7);
    let gaps: Vec<String> = res
        .iter()
        .filter(|r| r.check_id == "sieve.density_gap")
        .map(|r| format!("{}: |Q-6X/pi^2|={:.1} vs 2sqrtX={:.1}", r.params_string(), r.lhs, r.rhs))
        .collect();
    o.detail.push_str(&format!("; {}", gaps.join(", ")));
    o
}

fn criterion_convergence() -> Outcome {
    let (rows, dt) = timed(|| convergence_rows(CONVERGENCE_X, &CONVERGENCE_Q, EPS).unwrap());
    let inside = |r: f64| (0.5..=1.5).contains(&r);
    let derived_ok = rows.iter().all(|r| inside(r.ratio_derived));
    let printed_ok = rows.iter().all(|r| inside(r.ratio_printed));
    let mut detail = String::new();
    for r in &rows {
        detail.push_str(&format!("q={}: ratio {:.4} (derived C), {:.4} (C={PRINTED_C}); ", r.q, r.ratio_derived, r.ratio_printed));
    }
    let verdict = match (derived_ok, printed_ok) {
        (true, false) => "derived C matches, printed constant does not",
        (true, true) => "both constants inside the window",
        (false, true) => "printed constant matches, derived C does not",
        (false, false) => "neither constant inside the window",
    };
    detail.push_str(&format!("{verdict}; {:.1}s (limit 120s)", dt.as_secs_f64()));
    Outcome { n: 8, label: "large-modulus variance convergence", pass: derived_ok && dt <= secs(120), detail }
}

#[test]
fn acceptance_criteria() {
    let mut out = Vec::new();

    let (r, dt) = timed(|| dispersion_grid(EPS).unwrap());
    out.push(judge(1, "dispersion identity grid", &r, dt, secs(30), 60));

    let (r, dt) = timed(|| identity_suite(100, 100));
    out.push(judge(2, "kappa-mu, h-series and square-divisor identities", &r, dt, secs(120), 200));

    let (r, dt) = timed(|| f_q_zero_grid(10_000));
    out.push(judge(3, "f_q(0,m) local factors", &r, dt, secs(60), 10));

    let (r, dt) = timed(|| {
        let mut v = zero_identity(31).unwrap();
        v.extend(s2_bounds(&[3, 5, 7, 11, 9, 25, 27, 49, 4, 8, 16]).unwrap());
        v.extend(s1_bounds(&[3, 5, 7, 11, 13]).unwrap());
        let crt = crt_sweep(4, 60, 3000).unwrap();
        assert!(crt.len() >= 50);
        v.extend(crt);
        v
    });
    out.push(judge(4, "exponential sums", &r, dt, secs(300), 150));

    let (r, dt) = timed(|| mellin_records().unwrap());
    out.push(judge(5, "sawtooth Mellin integral", &r, dt, secs(30), 9));

    let (r, dt) = timed(|| main_term_records(EPS).unwrap());
    let envelope: Vec<VerificationRecord> = r.iter().filter(|x| x.check_id.ends_with("residual_envelope")).cloned().collect();
    let decomposition: Vec<VerificationRecord> = r.iter().filter(|x| x.check_id == "a_sum.decomposition").cloned().collect();
    let mut o6 = judge(6, "calibrated main-term residuals", &envelope, dt, secs(300), 50);
    for c in r.iter().filter(|x| x.check_id == "main_term.calibrated_constant") {
        o6.detail.push_str(&format!("; c[{}]={:.4}", c.params_string(), c.lhs));
    }
    out.push(o6);
    out.push(judge(7, "two evaluations of A[m](X,q)", &decomposition, dt, secs(300), 20));

    out.push(criterion_convergence());

    let (r, dt) = timed(|| counter_oracles(9).unwrap());
    out.push(judge(9, "brute-force counter oracles", &r, dt, secs(120), 50));

    out.push(criterion_sieve());

    out.sort_by_key(|o| o.n);
    for o in &out {
        say(&format!("criterion {:>2} {}: {} ({})", o.n, o.label, if o.pass { "PASS" } else { "FAIL" }, o.detail));
    }
    let failed: Vec<usize> = out.iter().filter(|o| !o.pass).map(|o| o.n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
