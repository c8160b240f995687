//! Analytical formulas and estimators: binomial tail probabilities and their
//! closed-form bounds, the exact expected run time of the (1+1) EA on the
//! deceptive block landscape, the high-probability run-time threshold,
//! power-law regression, and robust run summaries.

use crate::error::{EdaError, Result};

/// A binomial distribution `Bin(k, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinomialSpec {
    k: u64,
    p: f64,
}

impl BinomialSpec {
    pub fn new(k: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EdaError::invalid(format!(
                "success probability {p} outside [0, 1]"
            )));
        }
        Ok(BinomialSpec { k, p })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `E[X] = k p`.
    pub fn mean(&self) -> f64 {
        self.k as f64 * self.p
    }
}

/// Cumulative `ln i!` table, Kahan-compensated so the accumulated rounding
/// error stays near one ulp of the final sum even at 10^4 entries.
fn ln_factorial_table(k: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(k + 1);
    table.push(0.0);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=k {
        let y = (i as f64).ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        table.push(sum);
    }
    table
}

fn ln_pmf(table: &[f64], k: u64, p: f64, m: u64) -> f64 {
    let (k, m) = (k as usize, m as usize);
    table[k] - table[m] - table[k - m] + m as f64 * p.ln() + (k - m) as f64 * (1.0 - p).ln()
}

fn check_support(spec: BinomialSpec, m: u64) -> Result<()> {
    if m > spec.k {
        return Err(EdaError::invalid(format!(
            "outcome {m} outside the support of Bin({}, {})",
            spec.k, spec.p
        )));
    }
    Ok(())
}

/// `Pr[X = m]` for `X ~ Bin(k, p)`, via logarithmic factorials.
///
/// Absolute error below 10^-12 for `k <= 10^4`.
pub fn binom_pmf(spec: BinomialSpec, m: u64) -> Result<f64> {
    check_support(spec, m)?;
    if spec.p == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    if spec.p == 1.0 {
        return Ok(if m == spec.k { 1.0 } else { 0.0 });
    }
    let table = ln_factorial_table(spec.k as usize);
    Ok(ln_pmf(&table, spec.k, spec.p, m).exp())
}

/// `Pr[X <= m]` for `X ~ Bin(k, p)`.
///
/// The tail is accumulated from its smaller summands first; above the mode
/// the complement tail is summed instead, keeping absolute error below
/// 10^-12 for `k <= 10^4`.
pub fn binom_cdf(spec: BinomialSpec, m: u64) -> Result<f64> {
    check_support(spec, m)?;
    if m == spec.k {
        return Ok(1.0);
    }
    if spec.p == 0.0 {
        return Ok(1.0);
    }
    if spec.p == 1.0 {
        return Ok(0.0); // m < k here
    }
    let table = ln_factorial_table(spec.k as usize);
    let mode = (spec.k as f64 * spec.p).floor() as u64;
    let sum_range = |lo: u64, hi: u64| -> f64 {
        // Ascending pmf magnitude relative to the mode, Kahan-compensated.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut add = |term: f64| {
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        };
        if hi <= mode {
            for i in lo..=hi {
                add(ln_pmf(&table, spec.k, spec.p, i).exp());
            }
        } else {
            for i in (lo..=hi).rev() {
                add(ln_pmf(&table, spec.k, spec.p, i).exp());
            }
        }
        sum
    };
    if m <= mode {
        Ok(sum_range(0, m))
    } else {
        Ok(1.0 - sum_range(m + 1, spec.k))
    }
}

/// Multiplicative Chernoff bound on the lower tail: for a sum of independent
/// `[0, 1]` variables with mean `e`, `Pr[X <= (1 - delta) e] <= exp(-delta^2 e / 2)`.
pub fn chernoff_lower_tail_bound(e: f64, delta: f64) -> f64 {
    assert!((0.0..=1.0).contains(&delta), "delta {delta} outside [0, 1]");
    assert!(e >= 0.0, "mean {e} must be nonnegative");
    (-delta * delta * e / 2.0).exp()
}

/// Closed-form bound on the upper tail `Pr[X >= m]` for `m > E[X]`:
/// `m (1 - p) / (m - k p) * Pr[X = m]`.
pub fn binom_upper_tail_bound(spec: BinomialSpec, m: u64) -> Result<f64> {
    check_support(spec, m)?;
    if m as f64 <= spec.mean() {
        return Err(EdaError::invalid(format!(
            "upper tail bound needs m > E[X] = {}, got m = {m}",
            spec.mean()
        )));
    }
    let m_f = m as f64;
    let factor = m_f * (1.0 - spec.p) / (m_f - spec.mean());
    Ok(factor * binom_pmf(spec, m)?)
}

/// Closed-form bound on the lower tail `Pr[X <= m]` for `m < E[X]`:
/// `(k - m) p / (k p - m) * Pr[X = m]`.
pub fn binom_lower_tail_bound(spec: BinomialSpec, m: u64) -> Result<f64> {
    check_support(spec, m)?;
    if m as f64 >= spec.mean() {
        return Err(EdaError::invalid(format!(
            "lower tail bound needs m < E[X] = {}, got m = {m}",
            spec.mean()
        )));
    }
    let m_f = m as f64;
    let factor = (spec.k as f64 - m_f) * spec.p / (spec.mean() - m_f);
    Ok(factor * binom_pmf(spec, m)?)
}

fn check_even_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(EdaError::invalid(format!(
            "expected-time formulas need an even n >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Exact expected number of fitness evaluations (after the initial one) until
/// the (1+1) EA with mutation rate 1/n samples the optimum of the deceptive
/// block landscape:
///
/// `(1/4) n^2 (n - 1/2) * ((1 + 1/(n-1))^n - 1) / (1 + 1/(2(n-1)))`
///
/// Asymptotically `(1 + o(1)) (e - 1)/4 * n^3`.
pub fn ea_dlb_expected_time_closed(n: usize) -> Result<f64> {
    check_even_size(n)?;
    let nf = n as f64;
    let numer = ((1.0 + 1.0 / (nf - 1.0)).powi(n as i32) - 1.0) / (1.0 + 1.0 / (2.0 * (nf - 1.0)));
    Ok(0.25 * nf * nf * (nf - 0.5) * numer)
}

/// The same expectation summed level by level: with `ell` perfect leading
/// blocks, the next block is completed from state `b` ones in
///
/// `E[X_{ell,1}] = (1 - 1/n)^(-2 ell) n^2`
/// `E[X_{ell,0}] = (1/2) (1 - 1/n)^(-2 ell - 1) n + (1/2) E[X_{ell,1}]`
///
/// expected steps, and a uniform start enters state 0 or 1 with probability
/// 1/2 and 1/4, so `E[T] = sum over ell of (1/2) E[X_{ell,0}] + (1/4) E[X_{ell,1}]`.
pub fn ea_dlb_expected_time_recurrence(n: usize) -> Result<f64> {
    check_even_size(n)?;
    let nf = n as f64;
    let q = 1.0 - 1.0 / nf;
    let mut total = 0.0;
    for ell in 0..n / 2 {
        let x1 = q.powi(-2 * ell as i32) * nf * nf;
        let x0 = 0.5 * q.powi(-(2 * ell as i32) - 1) * nf + 0.5 * x1;
        total += 0.5 * x0 + 0.25 * x1;
    }
    Ok(total)
}

/// Run-time threshold below which success is overwhelmingly unlikely: the
/// (1+1) EA needs more than `n^3 / (16 e)` evaluations except with
/// probability at most `exp(-n / (64 e))`.
pub fn whp_threshold(n: usize) -> (f64, f64) {
    assert!(n >= 2, "threshold needs n >= 2, got {n}");
    let nf = n as f64;
    let threshold = nf.powi(3) / (16.0 * std::f64::consts::E);
    let failure_bound = (-nf / (64.0 * std::f64::consts::E)).exp();
    (threshold, failure_bound)
}

/// Least-squares power law `T = scale * n^exponent`, fitted in log-log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    /// Slope of the log-log regression line.
    pub exponent: f64,
    /// Multiplicative constant (exponential of the log-space intercept).
    pub scale: f64,
    /// Sum of squared log-space residuals.
    pub residual: f64,
}

/// Fits `log T = a + b log n` by least squares over the given `(n, T)` pairs.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(EdaError::invalid("power-law fit needs at least two points"));
    }
    if points.iter().any(|&(n, t)| n <= 0.0 || t <= 0.0) {
        return Err(EdaError::invalid(
            "power-law fit needs strictly positive points",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n.ln(), t.ln())).collect();
    let count = logs.len() as f64;
    let mean_x: f64 = logs.iter().map(|&(x, _)| x).sum::<f64>() / count;
    let mean_y: f64 = logs.iter().map(|&(_, y)| y).sum::<f64>() / count;
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(EdaError::invalid(
            "power-law fit needs at least two distinct sizes",
        ));
    }
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let residual = logs
        .iter()
        .map(|&(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    Ok(PowerLawFit {
        exponent,
        scale: intercept.exp(),
        residual,
    })
}

/// Median, center-50% quartiles, and success ratio of one batch of runs.
/// Quantiles are taken over the successful runs only and are absent when
/// every run failed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryRow {
    pub median: Option<f64>,
    pub lower_quartile: Option<f64>,
    pub upper_quartile: Option<f64>,
    pub success_ratio: f64,
}

/// Linear interpolation between order statistics (the convention where the
/// quantile of `{1..5}` at 0.25 is exactly the second value).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (h - lo as f64)
}

/// Summarizes run outcomes: quartiles of the successful values plus the
/// overall success ratio.
pub fn summarize(values: &[u64], successes: &[bool]) -> Result<SummaryRow> {
    if values.is_empty() {
        return Err(EdaError::invalid("cannot summarize zero runs"));
    }
    if values.len() != successes.len() {
        return Err(EdaError::invalid(format!(
            "{} values but {} success flags",
            values.len(),
            successes.len()
        )));
    }
    let mut ok: Vec<f64> = values
        .iter()
        .zip(successes)
        .filter(|&(_, &s)| s)
        .map(|(&v, _)| v as f64)
        .collect();
    let success_ratio = ok.len() as f64 / values.len() as f64;
    if ok.is_empty() {
        return Ok(SummaryRow {
            median: None,
            lower_quartile: None,
            upper_quartile: None,
            success_ratio,
        });
    }
    ok.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SummaryRow {
        median: Some(quantile_sorted(&ok, 0.5)),
        lower_quartile: Some(quantile_sorted(&ok, 0.25)),
        upper_quartile: Some(quantile_sorted(&ok, 0.75)),
        success_ratio,
    })
}
