//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

use exactq::algorithms::{
    exact_one_top, exact_zero_l, mod_full_cross_validate, mod_full_with, mod_general,
    nonevasive_eval, RunOptions,
};
use exactq::bounds::lb_mod;
use exactq::functions::{validate_nonevasive_promise, SymmetricFunction};
use exactq::linalg::{
    fourier_matrix, global_phase_fidelity, phi_state, Complex64, StateVector, UnitaryMatrix,
};
use exactq::query::{phase_oracle, povm_distribution, shift_operator, shifted_phase_oracle, standard_oracle, BitString};
use exactq::verify::{
    reports_to_string, sweep, ReportFormat, SweepFamily, SweepMode, SweepOptions,
};

fn conclude(id: &str, ok: bool, detail: String) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("[{status}] acceptance criterion {id}: {detail}");
    assert!(ok, "acceptance criterion {id} failed: {detail}");
}

fn all_inputs(n: usize) -> impl ParallelIterator<Item = BitString> {
    (0..(1u64 << n)).into_par_iter().map(move |idx| BitString::from_index(idx, n).unwrap())
}

/// Criterion 1: weight-mod-n on the full register, n in [2,12] exhaustive:
/// correct residue, exactly n-1 queries, point-mass measurement (off-peak
/// <= 1e-9), and pre-measurement fidelity >= 1-1e-10 to the Fourier state of
/// the residue.
#[test]
fn criterion_1_mod_full_exactness_and_optimality() {
    let mut runs = 0u64;
    let mut min_fidelity = f64::INFINITY;
    let mut worst_off_peak = 0.0f64;
    let mut all_ok = true;
    for n in 2..=12usize {
        let (ok, min_fid, worst_off, count) = all_inputs(n)
            .map(|x| {
                let run = mod_full_with(&x, RunOptions::default()).unwrap();
                let k = x.hamming_weight() % n;
                let ok = run.result.output as usize == k
                    && run.result.ledger.simulated() == (n - 1) as u64
                    && run.result.ledger.total() == (n - 1) as u64
                    && run.result.exactness_evidence <= 1e-9
                    && run.result.fully_simulated;
                let fid = global_phase_fidelity(&run.pre_measurement, &phi_state(n, k).unwrap())
                    .unwrap();
                (ok && fid >= 1.0 - 1e-10, fid, run.result.exactness_evidence, 1u64)
            })
            .reduce(
                || (true, f64::INFINITY, 0.0, 0),
                |a, b| (a.0 && b.0, a.1.min(b.1), a.2.max(b.2), a.3 + b.3),
            );
        all_ok &= ok;
        min_fidelity = min_fidelity.min(min_fid);
        worst_off_peak = worst_off_peak.max(worst_off);
        runs += count;
    }
    conclude(
        "1",
        all_ok,
        format!(
            "mod-n exhaustive n=2..12: {runs} runs, min fidelity {min_fidelity:.15}, \
             worst off-peak {worst_off_peak:.2e}, every run used exactly n-1 queries"
        ),
    );
}

/// Criterion 2: weight mod m for 2 <= m < n <= 12 exhaustive and n in
/// {16, 20} with 1e5 seeded samples per modulus: correct everywhere and
/// exactly ceil(n(1-1/m)) queries, matching the lower bound.
#[test]
fn criterion_2_mod_general_meets_lower_bound() {
    let opts = SweepOptions::default();
    let mut sweeps = 0u64;
    let mut inputs = 0u64;
    let mut all_ok = true;
    for n in 3..=12usize {
        for m in 2..n {
            let report = sweep(&SweepFamily::Mod { m }, n, SweepMode::Exhaustive, &opts).unwrap();
            all_ok &= report.passed()
                && report.max_queries_observed == report.bound
                && report.bound == lb_mod(n, m).unwrap();
            sweeps += 1;
            inputs += report.inputs_checked;
        }
    }
    for n in [16usize, 20] {
        for m in 2..n {
            let mode = SweepMode::Sampled { count: 100_000, seed: 0xE1AC7 };
            let report = sweep(&SweepFamily::Mod { m }, n, mode, &opts).unwrap();
            all_ok &= report.passed()
                && report.max_queries_observed == report.bound
                && report.bound == lb_mod(n, m).unwrap();
            sweeps += 1;
            inputs += report.inputs_checked;
        }
    }
    conclude(
        "2",
        all_ok,
        format!("{sweeps} mod-m sweeps over {inputs} inputs, achieved count = lower bound on all"),
    );
}

/// Criterion 3: the global phase of the final state equals
/// -sum_{l in S_x} l·(2π/n) mod 2π within 1e-8, for n in [2,8] exhaustive.
#[test]
fn criterion_3_global_phase_identity() {
    let mut worst = 0.0f64;
    let mut runs = 0u64;
    for n in 2..=8usize {
        let theta = TAU / n as f64;
        let max_diff = all_inputs(n)
            .map(|x| {
                let run = mod_full_with(&x, RunOptions::default()).unwrap();
                let k = x.hamming_weight() % n;
                // Independent phase prediction straight from the support.
                let expected: f64 = -(0..n)
                    .filter(|&l| x.bit(l) == 1)
                    .map(|l| l as f64 * theta)
                    .sum::<f64>();
                let got = phi_state(n, k).unwrap().inner(&run.pre_measurement).unwrap().arg();
                let mut diff = (got - expected).rem_euclid(TAU);
                if diff > TAU / 2.0 {
                    diff -= TAU;
                }
                diff.abs()
            })
            .reduce(|| 0.0, f64::max);
        worst = worst.max(max_diff);
        runs += 1 << n;
    }
    conclude(
        "3",
        worst <= 1e-8,
        format!("phase identity over {runs} runs, worst deviation {worst:.2e} rad (tolerance 1e-8)"),
    );
}

/// Criterion 4: dense operator identities at n <= 6 (Fourier conjugation of
/// the standard oracle and the shifted-oracle conjugation, entrywise <=
/// 1e-10) and POVM completeness at n <= 16 (<= 1e-10).
#[test]
fn criterion_4_operator_identities() {
    let mut worst_conj = 0.0f64;
    let mut worst_shift = 0.0f64;
    for n in 1..=6usize {
        let f = fourier_matrix(n).unwrap();
        let id = UnitaryMatrix::identity(n).unwrap();
        let lift = id.kron(&f).unwrap();
        let lift_dag = id.kron(&f.dagger()).unwrap();
        for idx in 0..(1u64 << n) {
            let x = BitString::from_index(idx, n).unwrap();
            let hat_dense =
                lift.mul(&standard_oracle(&x).unwrap()).unwrap().mul(&lift_dag).unwrap();
            let hat_diag = phase_oracle(&x).to_dense().unwrap();
            worst_conj = worst_conj.max(hat_dense.max_entry_deviation(&hat_diag));
            for a in 0..n {
                let left = shift_operator(n, a).unwrap().kron(&id).unwrap();
                let right = shift_operator(n, (n - a) % n).unwrap().kron(&id).unwrap();
                let shifted_dense = left.mul(&hat_diag).unwrap().mul(&right).unwrap();
                let shifted_diag = shifted_phase_oracle(&x, a).to_dense().unwrap();
                worst_shift = worst_shift.max(shifted_dense.max_entry_deviation(&shifted_diag));
            }
        }
    }

    let mut worst_povm = 0.0f64;
    for n in 1..=16usize {
        let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let phi = phi_state(n, j).unwrap();
            for r in 0..n {
                for c in 0..n {
                    sum[r * n + c] += phi.amp(r) * phi.amp(c).conj();
                }
            }
        }
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c { 1.0 } else { 0.0 };
                worst_povm = worst_povm.max((sum[r * n + c] - Complex64::new(expect, 0.0)).norm());
            }
        }
    }

    let ok = worst_conj <= 1e-10 && worst_shift <= 1e-10 && worst_povm <= 1e-10;
    conclude(
        "4",
        ok,
        format!(
            "conjugation dev {worst_conj:.2e}, shifted-oracle dev {worst_shift:.2e}, \
             POVM completeness dev {worst_povm:.2e} (all <= 1e-10)"
        ),
    );
}

/// Criterion 5: EXACT(0,l) for n in [3,12] and every 2 <= l <= n, exhaustive:
/// correct with at most n-1 total queries (cost-modeled charges included).
#[test]
fn criterion_5_exact_zero_l() {
    let opts = SweepOptions::default();
    let mut sweeps = 0u64;
    let mut inputs = 0u64;
    let mut all_ok = true;
    for n in 3..=12usize {
        for l in 2..=n {
            let report = sweep(&SweepFamily::Exact0L { l }, n, SweepMode::Exhaustive, &opts).unwrap();
            all_ok &= report.passed() && report.bound == (n - 1) as u64;
            // The worst case over an exhaustive grid achieves the bound, so
            // the lower bound is met with equality.
            all_ok &= report.max_queries_observed == report.bound;
            sweeps += 1;
            inputs += report.inputs_checked;
        }
    }
    conclude(
        "5",
        all_ok,
        format!(
            "{sweeps} EXACT(0,l) sweeps over {inputs} inputs, all within the n-1 bound and \
             achieving it in the worst case"
        ),
    );
}

/// Criterion 6: EXACT(1,n-1) for n in [4,12] exhaustive: correct with at most
/// n-2 total queries, valid majority indices, n=4 fully simulated, and the
/// 5-bit cost-modeled base flagged wherever it fires.
#[test]
fn criterion_6_exact_one_top() {
    let opts = SweepOptions::default();
    let mut inputs = 0u64;
    let mut all_ok = true;
    let mut flag_detail = String::new();
    for n in 4..=12usize {
        let report = sweep(&SweepFamily::Exact1Top, n, SweepMode::Exhaustive, &opts).unwrap();
        all_ok &= report.passed() && report.bound == (n - 2) as u64;
        all_ok &= report.max_queries_observed == report.bound;
        inputs += report.inputs_checked;
        let frac = report.fully_simulated_fraction;
        // The recursion bottoms out at the simulated 4-bit base for even
        // windows and at the cost-modeled 5-bit subroutine for odd ones.
        let flag_ok = match n {
            4 => frac == 1.0,
            5 => frac == 0.0,
            _ if n % 2 == 0 => frac == 1.0,
            _ => frac > 0.0 && frac < 1.0,
        };
        all_ok &= flag_ok;
        flag_detail.push_str(&format!("n={n}:{frac:.3} "));
    }
    conclude(
        "6",
        all_ok,
        format!("EXACT(1,n-1) exhaustive over {inputs} inputs within n-2; simulated fractions {flag_detail}"),
    );
}

/// Criterion 7: for n in [3,10], k in [1,n], and 50 seeded random tables
/// satisfying F(0)=F(k), F(n-k)=F(n): correct on all 2^n inputs with at most
/// n-1 queries.
#[test]
fn criterion_7_nonevasive_random_tables() {
    let opts = SweepOptions::default();
    let mut sweeps = 0u64;
    let mut inputs = 0u64;
    let mut all_ok = true;
    for n in 3..=10usize {
        for k in 1..=n {
            for t in 0..50u64 {
                let seed = ((n as u64) << 32) | ((k as u64) << 16) | t;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut labels: Vec<u32> = (0..=n).map(|_| rng.random_range(0..5)).collect();
                labels[k] = labels[0];
                labels[n] = labels[n - k];
                let table = SymmetricFunction::new(n, labels).unwrap();
                assert!(validate_nonevasive_promise(&table, k).unwrap());
                let report = sweep(
                    &SweepFamily::Nonevasive { k, table },
                    n,
                    SweepMode::Exhaustive,
                    &opts,
                )
                .unwrap();
                all_ok &= report.passed() && report.max_queries_observed <= (n - 1) as u64;
                sweeps += 1;
                inputs += report.inputs_checked;
            }
        }
    }
    conclude(
        "7",
        all_ok,
        format!("{sweeps} non-evasive sweeps over {inputs} inputs, all correct within n-1 queries"),
    );
}

/// Criterion 8: the property pack: ledger/trace consistency, POVM
/// normalization, factorized-vs-full agreement at n <= 6, seeded-sweep
/// determinism, and parallel/serial report equality.
#[test]
fn criterion_8_property_suite() {
    // Ledger-trace consistency across every algorithm on an 8-bit exhaustive
    // grid (sweeps re-check this per input as well).
    let n = 8usize;
    let table = {
        let mut labels: Vec<u32> = (0..=n as u32).map(|w| w % 3).collect();
        labels[3] = labels[0];
        labels[n] = labels[n - 3];
        SymmetricFunction::new(n, labels).unwrap()
    };
    let ledgers_ok = (0..(1u64 << n)).into_par_iter().all(|idx| {
        let x = BitString::from_index(idx, n).unwrap();
        let runs = [
            mod_general(&x, 3).unwrap(),
            exact_zero_l(&x, 4).unwrap(),
            exact_one_top(&x).unwrap().0,
            nonevasive_eval(&table, 3, &x).unwrap(),
        ];
        runs.iter().all(|r| r.ledger.is_consistent())
    });

    // POVM normalization on random states across dimensions.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut povm_ok = true;
    for _ in 0..200 {
        let dim = rng.random_range(1..=16);
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let s = StateVector::new(amps.into_iter().map(|a| a / norm).collect()).unwrap();
        let total: f64 = povm_distribution(&s).iter().sum();
        povm_ok &= (total - 1.0).abs() <= 1e-10;
    }

    // Factorized vs full composite-space execution, n <= 6 exhaustive.
    let mut cross_ok = true;
    let mut worst_leak = 0.0f64;
    let mut worst_dev = 0.0f64;
    for n in 2..=6usize {
        for idx in 0..(1u64 << n) {
            let x = BitString::from_index(idx, n).unwrap();
            let cv = mod_full_cross_validate(&x).unwrap();
            cross_ok &= cv.outcome == x.hamming_weight() % n;
            worst_leak = worst_leak.max(cv.max_phase_leak);
            worst_dev = worst_dev.max(cv.max_state_deviation);
        }
    }
    cross_ok &= worst_leak <= 1e-12 && worst_dev <= 1e-12;

    // Determinism of seeded sweeps, including byte-identical emission.
    let mode = SweepMode::Sampled { count: 2_000, seed: 31 };
    let family = SweepFamily::Mod { m: 4 };
    let opts = SweepOptions::default();
    let serial = SweepOptions { parallel: false, ..opts };
    let a = sweep(&family, 14, mode, &opts).unwrap();
    let b = sweep(&family, 14, mode, &opts).unwrap();
    let mut determinism_ok = a.same_results(&b);
    for format in [ReportFormat::Json, ReportFormat::Csv] {
        let ta = reports_to_string(&[a.normalized()], format).unwrap();
        let tb = reports_to_string(&[b.normalized()], format).unwrap();
        determinism_ok &= ta == tb;
    }

    // Parallel/serial equality on exhaustive sweeps of each family.
    let mut merge_ok = true;
    for (n, family) in [
        (8, SweepFamily::Mod { m: 3 }),
        (8, SweepFamily::Exact0L { l: 3 }),
        (8, SweepFamily::Exact1Top),
    ] {
        let par = sweep(&family, n, SweepMode::Exhaustive, &opts).unwrap();
        let ser = sweep(&family, n, SweepMode::Exhaustive, &serial).unwrap();
        merge_ok &= par.same_results(&ser);
    }

    let ok = ledgers_ok && povm_ok && cross_ok && determinism_ok && merge_ok;
    conclude(
        "8",
        ok,
        format!(
            "ledgers consistent: {ledgers_ok}; POVM normalized: {povm_ok}; \
             factorized-vs-full leak {worst_leak:.2e} / dev {worst_dev:.2e}; \
             deterministic emission: {determinism_ok}; parallel==serial: {merge_ok}"
        ),
    );
}
