//! Acceptance suite: one test per release criterion, each printing a single
//! `criterion NN [pass] ...` line (visible with `--nocapture`) after its
//! assertions hold. The two sweep criteria make this target slow by design;
//! run it with `cargo test --test acceptance -- --nocapture` and expect
//! fifteen to twenty minutes on one core.

use edabench::algorithms::{
    run_mimic, run_one_plus_one_ea, run_umda, AlgorithmVariant, OptimizerConfig,
};
use edabench::diagnostics::{neutral_drift_probe, recommend_parameters, AdvisorMode};
use edabench::fitness::{reference, BitString, FitnessFunction};
use edabench::harness::{
    execute, fit_medians, plan_mu_sweep, plan_runtime_sweep, plan_runtime_sweep_desk, render_csv,
    summarize_records,
};
use edabench::stats::{
    binom_lower_tail_bound, binom_pmf, binom_upper_tail_bound, chernoff_lower_tail_bound,
    ea_dlb_expected_time_closed, ea_dlb_expected_time_recurrence, whp_threshold, BinomialSpec,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(number: u32, what: &str) {
    println!("criterion {number:>2} [pass] {what}");
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact pmf table of Bin(k, num/den) in rational arithmetic.
fn exact_pmf_table(k: u64, num: i64, den: i64) -> Vec<BigRational> {
    let p = big(num) / big(den);
    let q = BigRational::one() - &p;
    let mut pmf = Vec::with_capacity(k as usize + 1);
    let mut value = BigRational::one();
    for _ in 0..k {
        value *= &q;
    }
    pmf.push(value.clone());
    for m in 0..k {
        // pmf(m+1) = pmf(m) * (k-m)/(m+1) * p/q
        value = value * big((k - m) as i64) / big((m + 1) as i64) * &p / &q;
        pmf.push(value.clone());
    }
    pmf
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational should fit in f64")
}

#[test]
fn criterion_01_dlb_oracle_equivalence() {
    let f = FitnessFunction::dlb();
    for n in (2..=16usize).step_by(2) {
        for word in 0u32..(1 << n) {
            let bits: Vec<bool> = (0..n).map(|i| (word >> i) & 1 == 1).collect();
            let x = BitString::from_bools(bits.clone());
            assert_eq!(
                f.evaluate(&x).unwrap(),
                reference::dlb_full(&bits, 2),
                "mismatch at n={n}, word={word:b}"
            );
        }
    }
    pass(
        1,
        "dlb agrees with the longhand definition on every string, even n <= 16",
    );
}

/// Expected number of offspring evaluations for the (1+1) EA on DLB at n=2,
/// solved exactly from the four-state Markov chain: standard bit mutation
/// with rate 1/2 per bit makes the offspring uniform over all four strings,
/// elitist acceptance keeps the parent unless the offspring is at least as
/// fit, and the expectation is taken over a uniform initial string.
fn exact_markov_expected_time_n2() -> f64 {
    let f = FitnessFunction::dlb();
    let strings: Vec<Vec<bool>> = (0u32..4).map(|w| vec![w & 1 == 1, w >> 1 == 1]).collect();
    let fitness: Vec<u32> = strings
        .iter()
        .map(|bits| f.evaluate(&BitString::from_bools(bits.clone())).unwrap())
        .collect();
    let optimum = f.optimum(2).unwrap().unwrap();
    let rate: f64 = 1.0 / 2.0;
    let kernel = |x: usize, y: usize| -> f64 {
        let flips = (x ^ y).count_ones() as f64;
        rate.powf(flips) * (1.0 - rate).powf(2.0 - flips)
    };
    // E[s] = 1 + sum_y kernel(s, y) * E[next(s, y)]; absorbing at the optimum.
    // Assemble (I - Q) E = 1 over the transient states and solve by
    // elimination.
    let transient: Vec<usize> = (0..4).filter(|&s| fitness[s] != optimum).collect();
    let index = |s: usize| transient.iter().position(|&t| t == s);
    let dim = transient.len();
    let mut a = vec![vec![0.0f64; dim + 1]; dim];
    for (row, &s) in transient.iter().enumerate() {
        a[row][row] += 1.0;
        a[row][dim] = 1.0;
        for y in 0..4 {
            let stays = fitness[y] < fitness[s];
            let target = if stays { s } else { y };
            if let Some(col) = index(target) {
                a[row][col] -= kernel(s, y);
            }
        }
    }
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, r) in a.iter_mut().enumerate() {
            if row != col {
                let factor = r[col] / pivot_row[col];
                for (v, p) in r.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= factor * p;
                }
            }
        }
    }
    let expected: Vec<f64> = (0..dim).map(|row| a[row][dim] / a[row][row]).collect();
    let total: f64 = (0..4).map(|s| index(s).map_or(0.0, |i| expected[i])).sum();
    total / 4.0
}

#[test]
fn criterion_02_expected_time_identity_and_simulation() {
    // Closed form equals the recurrence to 1e-9 relative for all even n <= 2000.
    for n in (2..=2000usize).step_by(2) {
        let closed = ea_dlb_expected_time_closed(n).unwrap();
        let recurrence = ea_dlb_expected_time_recurrence(n).unwrap();
        assert!(
            ((closed - recurrence) / closed).abs() < 1e-9,
            "closed {closed} vs recurrence {recurrence} at n={n}"
        );
    }

    // n=2 equals the exact Markov-chain value 3.
    let markov = exact_markov_expected_time_n2();
    assert!((markov - 3.0).abs() < 1e-12, "markov oracle: {markov}");
    assert!(
        (ea_dlb_expected_time_closed(2).unwrap() - markov).abs() < 1e-12,
        "closed form disagrees with the n=2 chain"
    );

    // Monte Carlo mean within 5% of the formula, after subtracting the one
    // evaluation spent on the initial string.
    let f = FitnessFunction::dlb();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
    for n in [10usize, 20] {
        let runs = 10_000u64;
        let mut total = 0u64;
        for _ in 0..runs {
            let outcome = run_one_plus_one_ea(&f, n, u64::MAX, &mut rng).unwrap();
            assert!(outcome.success);
            total += outcome.evaluations - 1;
        }
        let mean = total as f64 / runs as f64;
        let formula = ea_dlb_expected_time_closed(n).unwrap();
        let gap = (mean - formula).abs() / formula;
        assert!(
            gap < 0.05,
            "n={n}: mean {mean} vs formula {formula} (gap {gap:.4})"
        );
    }
    pass(
        2,
        "closed form = recurrence (even n <= 2000), n=2 chain value 3, Monte Carlo within 5%",
    );
}

#[test]
fn criterion_03_umda_beats_guarantee_window_at_n50() {
    let n = 50usize;
    let advice = recommend_parameters(n, AdvisorMode::Experiment, 0.25, 0.5, 0.25).unwrap();
    let window = (advice.lambda as f64
        * (n as f64 / 2.0 + 2.0 * std::f64::consts::E * (n as f64).ln()))
    .ceil() as u64;
    assert_eq!((advice.mu, advice.lambda), (587, 7044));
    assert_eq!(window, 325_912);

    let f = FitnessFunction::dlb();
    let cfg = OptimizerConfig::new(AlgorithmVariant::Umda, advice.mu, advice.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0003);
    let runs = 30;
    let mut hits = 0;
    for _ in 0..runs {
        let outcome = run_umda(&f, &cfg, n, window, &mut rng, false, None).unwrap();
        hits += u32::from(outcome.success);
    }
    assert!(
        hits >= 27,
        "only {hits}/{runs} runs finished within {window} evaluations"
    );
    pass(
        3,
        "umda at n=50 finds the optimum within lambda(n/2 + 2e ln n) in >= 27/30 runs",
    );
}

#[test]
fn criterion_04_desk_sweep_slopes() {
    let plan = plan_runtime_sweep_desk(30).unwrap();
    let records = execute(&plan, 1).unwrap();
    let summary = summarize_records(&records).unwrap();
    let mut exponents = std::collections::BTreeMap::new();
    for (algorithm, fit) in fit_medians(&summary).unwrap() {
        exponents.insert(
            algorithm.id(),
            fit.expect("two or more sizes per series").exponent,
        );
    }
    for id in ["opo_ea", "comma_ea", "comma_ga"] {
        let e = exponents[id];
        assert!((2.8..=3.2).contains(&e), "{id} slope {e}");
    }
    let umda = exponents["umda"];
    assert!((2.0..=2.5).contains(&umda), "umda slope {umda}");
    let mimic = exponents["mimic"];
    assert!(
        (mimic - umda).abs() <= 0.2,
        "mimic slope {mimic} vs umda {umda}"
    );
    pass(
        4,
        "desk sweep slopes: mutation-based in [2.8, 3.2], umda in [2.0, 2.5], mimic within 0.2",
    );
}

#[test]
fn criterion_05_mimic_magnitude_at_n100() {
    let n = 100usize;
    let advice = recommend_parameters(n, AdvisorMode::Experiment, 0.25, 0.5, 0.25).unwrap();
    let f = FitnessFunction::dlb();
    let cfg = OptimizerConfig::new(AlgorithmVariant::Mimic, advice.mu, advice.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0005);
    let mut evals: Vec<u64> = Vec::new();
    for _ in 0..30 {
        let outcome = run_mimic(&f, &cfg, n, advice.budget, &mut rng, false, None).unwrap();
        if outcome.success {
            evals.push(outcome.evaluations);
        }
    }
    assert!(
        evals.len() >= 16,
        "median needs a majority of successful runs"
    );
    evals.sort_unstable();
    let median = if evals.len().is_multiple_of(2) {
        (evals[evals.len() / 2 - 1] + evals[evals.len() / 2]) as f64 / 2.0
    } else {
        evals[evals.len() / 2] as f64
    };
    let target = 6e5;
    assert!(
        (target / 2.0..=target * 2.0).contains(&median),
        "median {median} outside factor 2 of {target}"
    );
    pass(
        5,
        "mimic median at n=100 within a factor 2 of 6e5 evaluations",
    );
}

#[test]
fn criterion_06_cubic_lower_threshold_rarely_beaten() {
    let n = 60usize;
    let (threshold, _) = whp_threshold(n);
    // A run beats the threshold when it needs at most `threshold` offspring
    // evaluations, i.e. at most floor(threshold) + 1 metered evaluations
    // counting the initial string.
    let budget = threshold.floor() as u64 + 1;
    let f = FitnessFunction::dlb();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0006);
    let runs = 200u32;
    let mut early = 0u32;
    for _ in 0..runs {
        let outcome = run_one_plus_one_ea(&f, n, budget, &mut rng).unwrap();
        early += u32::from(outcome.success);
    }
    assert!(
        early * 20 <= runs,
        "{early}/{runs} runs finished within {budget} evaluations"
    );
    pass(
        6,
        "at most 5% of 200 (1+1) runs at n=60 finish within n^3/(16e) evaluations",
    );
}

#[test]
fn criterion_07_population_size_regimes_at_n100() {
    let exponents: Vec<u32> = (1..=12).collect();
    let plan = plan_mu_sweep(100, &exponents, 30).unwrap();
    let records = execute(&plan, 1).unwrap();
    let summary = summarize_records(&records).unwrap();
    let ratio = |mu: usize| -> f64 {
        summary
            .iter()
            .find(|cell| cell.mu == mu)
            .unwrap_or_else(|| panic!("missing mu = {mu}"))
            .success_ratio
    };
    assert!(ratio(2) >= 0.9, "mu=2 ratio {}", ratio(2));
    let mid = [32, 64, 128].map(ratio);
    assert!(
        mid.iter().any(|&r| r <= 0.2),
        "no mid-range collapse: ratios {mid:?}"
    );
    for mu in [2048usize, 4096] {
        assert!(ratio(mu) >= 0.9, "mu={mu} ratio {}", ratio(mu));
    }
    pass(
        7,
        "mu sweep at n=100: tiny mu >= 0.9, a mid cell <= 0.2, large mu >= 0.9",
    );
}

#[test]
fn criterion_08_binomial_bound_suite() {
    let one = BigRational::one();
    for k in (5..=100u64).step_by(5) {
        for num in 1..=9i64 {
            let p = num as f64 / 10.0;
            let spec = BinomialSpec::new(k, p).unwrap();
            let mean = spec.mean();
            let pmf = exact_pmf_table(k, num, 10);
            let p_exact = big(num) / big(10);
            let q_exact = &one - &p_exact;

            // pmf accuracy 1e-12 against the rational oracle.
            for (m, exact) in pmf.iter().enumerate() {
                let got = binom_pmf(spec, m as u64).unwrap();
                assert!(
                    (got - to_f64(exact)).abs() <= 1e-12,
                    "pmf k={k} p={p} m={m}"
                );
            }

            // Upper and lower tail domination, evaluated without rounding:
            // the bound expressions are rational for rational p, so the
            // inequalities are checked outright in exact arithmetic, and the
            // floating-point evaluators must agree with the rational value.
            let mut upper_tail = BigRational::zero();
            for m in (0..=k).rev() {
                upper_tail += &pmf[m as usize];
                // Exact domain test 10m > k*num, i.e. m > E[X] without rounding.
                if 10 * m > k * num as u64 {
                    let factor =
                        big(m as i64) * &q_exact / (big(m as i64) - big(k as i64) * &p_exact);
                    let bound = factor * &pmf[m as usize];
                    assert!(bound >= upper_tail, "upper k={k} p={p} m={m}");
                    let got = binom_upper_tail_bound(spec, m).unwrap();
                    assert!(
                        (got - to_f64(&bound)).abs() <= 1e-11 * (1.0 + to_f64(&bound)),
                        "upper evaluator k={k} p={p} m={m}"
                    );
                }
            }
            let mut lower_tail = BigRational::zero();
            for m in 0..=k {
                lower_tail += &pmf[m as usize];
                if 10 * m < k * num as u64 {
                    let factor =
                        big((k - m) as i64) * &p_exact / (big(k as i64) * &p_exact - big(m as i64));
                    let bound = factor * &pmf[m as usize];
                    assert!(bound >= lower_tail, "lower k={k} p={p} m={m}");
                    let got = binom_lower_tail_bound(spec, m).unwrap();
                    assert!(
                        (got - to_f64(&bound)).abs() <= 1e-11 * (1.0 + to_f64(&bound)),
                        "lower evaluator k={k} p={p} m={m}"
                    );
                }
            }

            // Chernoff domination of the exact lower tail on the same grid.
            for tenths in 0..=9u32 {
                let delta = f64::from(tenths) / 10.0;
                let m = ((1.0 - delta) * mean).floor();
                if m < 0.0 {
                    continue;
                }
                let mut tail = BigRational::zero();
                for term in pmf.iter().take(m as usize + 1) {
                    tail += term;
                }
                let bound = chernoff_lower_tail_bound(mean, delta);
                assert!(bound >= to_f64(&tail), "chernoff k={k} p={p} delta={delta}");
            }
        }
    }

    // Declared boundary cases collapse to exact equalities in f64: dyadic
    // probabilities make both sides exactly representable.
    let dyadic = BinomialSpec::new(10, 0.5).unwrap();
    let extreme = 0.5f64.powi(10);
    assert_eq!(binom_upper_tail_bound(dyadic, 10).unwrap(), extreme);
    assert_eq!(binom_lower_tail_bound(dyadic, 0).unwrap(), extreme);
    assert_eq!(binom_pmf(dyadic, 10).unwrap(), extreme);
    assert_eq!(chernoff_lower_tail_bound(0.0, 0.7), 1.0);
    assert_eq!(chernoff_lower_tail_bound(25.0, 0.0), 1.0);

    pass(
        8,
        "tail bounds dominate exact tails on the (k, p, m) grid; pmf within 1e-12",
    );
}

#[test]
fn criterion_09_neutral_drift_probe_stays_put() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0009);
    let report = neutral_drift_probe(5000, 100, 0.4, 100, &mut rng).unwrap();
    assert!(
        report.empirical_stay_rate >= 0.963 - 0.05,
        "stay rate {}",
        report.empirical_stay_rate
    );
    pass(
        9,
        "neutral frequency at mu=5000 stays within 0.4 of 1/2 for 100 updates",
    );
}

#[test]
fn criterion_10_sweep_is_deterministic_across_parallelism() {
    let mut plan = plan_runtime_sweep(&[20, 40], 3).unwrap();
    plan.master_seed = 2026;
    let base = render_csv(&execute(&plan, 1).unwrap());
    for threads in [2usize, 8] {
        let again = render_csv(&execute(&plan, threads).unwrap());
        assert_eq!(base, again, "csv changed at {threads} threads");
    }
    pass(10, "sweep csv is byte-identical at 1, 2, and 8 threads");
}
