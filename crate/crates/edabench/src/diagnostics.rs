//! Runtime instrumentation for model-based runs: the critical and
//! selection-relevant block indices, neutral-frequency band monitoring, an
//! empirical drift probe for neutral bits, and the parameter advisor that
//! turns the run-time guarantee's constants into concrete (μ, λ, budget)
//! choices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{EdaError, Result};
use crate::fitness::{leading_ones, with_neutral_bits, BitString, FitnessFunction};
use crate::models::{select_best, umda_update, FrequencyVector, Individual, Population};

/// Immutable per-iteration diagnostic record taken right after the model
/// update. Block indices are 1-based, in `[1 ..= n/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationSnapshot {
    pub iteration: u64,
    /// Frequency vector copy (chain-model runs store the marginals).
    pub frequencies: Vec<f64>,
    pub critical_block: Option<usize>,
    pub selection_relevant: Option<usize>,
    pub min_frequency_right_of_critical: f64,
}

impl IterationSnapshot {
    /// Captures the diagnostics of one iteration from the new model's
    /// marginal frequencies and the offspring population it was fitted on.
    /// The frequencies are copied, so later model updates cannot corrupt the
    /// snapshot.
    pub fn capture(
        iteration: u64,
        frequencies: Vec<f64>,
        pop: &Population,
        mu: usize,
    ) -> IterationSnapshot {
        let n = frequencies.len();
        let critical_block = if n.is_multiple_of(2) {
            let p = FrequencyVector::from_parts(frequencies.clone(), 1.0 / n as f64)
                .expect("marginals are probabilities");
            critical_block_index(&p, n).expect("even n checked")
        } else {
            None // no full block layout on odd sizes
        };
        let min_frequency_right_of_critical = match critical_block {
            // Vacuous minimum (no critical block, or nothing to its right) is 1.
            None => 1.0,
            Some(i) => frequencies[2 * i..].iter().copied().fold(1.0, f64::min),
        };
        IterationSnapshot {
            iteration,
            frequencies,
            critical_block,
            selection_relevant: selection_relevant_block(pop, mu),
            min_frequency_right_of_critical,
        }
    }
}

/// The first block not yet saturated at the upper margin, provided every
/// earlier frequency sits exactly at `1 − 1/n`: the smallest `i` with
/// `p_{2i−1} + p_{2i} < 2 − 2/n`. `None` when the whole vector is saturated
/// or when the first unsaturated block does not fall below the threshold.
pub fn critical_block_index(p: &FrequencyVector, n: usize) -> Result<Option<usize>> {
    if !n.is_multiple_of(2) {
        return Err(EdaError::invalid(format!(
            "critical block needs an even n, got {n}"
        )));
    }
    if p.len() != n {
        return Err(EdaError::invalid(format!(
            "frequency vector has length {}, expected {n}",
            p.len()
        )));
    }
    let upper = 1.0 - 1.0 / n as f64;
    let threshold = 2.0 - 2.0 / n as f64;
    for block in 1..=n / 2 {
        let (a, b) = (p.get(2 * block - 2), p.get(2 * block - 1));
        if a == upper && b == upper {
            continue;
        }
        return Ok(if a + b < threshold { Some(block) } else { None });
    }
    Ok(None)
}

/// The smallest block index `i` such that fewer than `mu` population members
/// have at least `2i` leading ones; `None` when at least `mu` members are
/// perfect through the last block.
pub fn selection_relevant_block(pop: &Population, mu: usize) -> Option<usize> {
    debug_assert!(mu >= 1 && mu <= pop.len());
    let blocks = pop.n() / 2;
    let counts: Vec<u32> = pop
        .members()
        .iter()
        .map(|m| leading_ones(&m.bits))
        .collect();
    (1..=blocks).find(|&i| counts.iter().filter(|&&c| c as usize >= 2 * i).count() < mu)
}

/// Scans a trace for frequencies that left the open band
/// `((1−ε)/2, (1+ε)/2)` while their position was still strictly right of the
/// selection-relevant block. A block stops being monitored the first time the
/// selection-relevant index reaches it (and stays unmonitored), and nothing
/// past `horizon` is reported. Returns `(iteration, 1-based position)` pairs.
pub fn neutral_band_violations(
    trace: &[IterationSnapshot],
    eps: f64,
    horizon: u64,
) -> Vec<(u64, usize)> {
    assert!(0.0 < eps && eps < 1.0, "band width {eps} outside (0, 1)");
    let lo = (1.0 - eps) / 2.0;
    let hi = (1.0 + eps) / 2.0;
    let mut violations = Vec::new();
    let mut stopped: Vec<bool> = Vec::new();
    for snap in trace {
        if snap.iteration > horizon {
            continue;
        }
        let blocks = snap.frequencies.len().div_ceil(2);
        if stopped.len() < blocks {
            stopped.resize(blocks, false);
        }
        for block in 1..=blocks {
            let right_of_relevant = match snap.selection_relevant {
                Some(i) => block > i,
                None => false,
            };
            if !right_of_relevant {
                stopped[block - 1] = true;
            }
        }
        for (j, &freq) in snap.frequencies.iter().enumerate() {
            let block = (j + 2) / 2; // 1-based block of 1-based position j+1
            if !stopped[block - 1] && (freq <= lo || freq >= hi) {
                violations.push((snap.iteration, j + 1));
            }
        }
    }
    violations
}

/// Outcome of repeated neutral-bit drift probes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftReport {
    /// Deviation bound: a run "stays" while `|p − 1/2| < d` for the neutral
    /// frequency.
    pub d: f64,
    /// Number of model updates per probe run.
    pub t_max: u64,
    /// Earliest iteration (across all runs) at which a neutral frequency left
    /// the band, if any did.
    pub violation_iteration: Option<u64>,
    /// Fraction of runs that stayed inside the band for the whole horizon.
    pub empirical_stay_rate: f64,
    /// `1 − 2 exp(−d² μ / (2t))`: the guaranteed lower bound on the stay
    /// probability of a neutral frequency over `t` updates.
    pub theoretical_bound: f64,
}

/// Number of non-neutral bits in the drift-probe fixture: the probe optimizes
/// this many deceptive-block bits plus one trailing neutral bit.
const PROBE_PAYLOAD_BITS: usize = 20;

/// Runs repeated short model-update loops on a fitness function with one
/// neutral bit and reports how often the neutral bit's frequency stayed
/// within `±d` of 1/2 through `t` updates, next to the theoretical lower
/// bound `1 − 2 exp(−d² μ / (2t))`.
///
/// The fixture is the deceptive block function on bits `1..=20` with bit 21
/// neutral, sampled with `λ = 2μ` offspring per iteration; runs never stop
/// early, so the estimate is not conditioned on optimization progress.
pub fn neutral_drift_probe<R: Rng + ?Sized>(
    mu: usize,
    t: u64,
    d: f64,
    runs: usize,
    rng: &mut R,
) -> Result<DriftReport> {
    if !(0.0 < d && d <= 0.5) {
        return Err(EdaError::invalid(format!(
            "deviation bound {d} outside (0, 1/2]"
        )));
    }
    if mu == 0 || runs == 0 {
        return Err(EdaError::invalid("drift probe needs mu >= 1 and runs >= 1"));
    }
    let n = PROBE_PAYLOAD_BITS + 1;
    let neutral_pos = n; // 1-based
    let f = with_neutral_bits(FitnessFunction::dlb(), &[neutral_pos])?;
    let lambda = 2 * mu;
    let seeds: Vec<u64> = (0..runs).map(|_| rng.next_u64()).collect();

    let first_violation = |seed: u64| -> Result<Option<u64>> {
        let mut run_rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = FrequencyVector::uniform(n);
        let mut members: Vec<Individual> = (0..lambda)
            .map(|_| Individual {
                bits: BitString::all_zeros(n),
                fitness: 0,
            })
            .collect();
        for iter in 1..=t {
            let sampler = p.sampler();
            for m in &mut members {
                sampler.sample_into(&mut run_rng, &mut m.bits);
                m.fitness = f.evaluate(&m.bits)?;
            }
            let pop = Population::from_members(std::mem::take(&mut members))?;
            let selected = select_best(&pop, mu, &mut run_rng)?;
            p = umda_update(&selected, n)?;
            members = pop.into_members();
            if (p.get(neutral_pos - 1) - 0.5).abs() >= d {
                return Ok(Some(iter));
            }
        }
        Ok(None)
    };

    let outcomes: Vec<Option<u64>> = seeds
        .par_iter()
        .map(|&s| first_violation(s))
        .collect::<Result<_>>()?;
    let stayed = outcomes.iter().filter(|v| v.is_none()).count();
    Ok(DriftReport {
        d,
        t_max: t,
        violation_iteration: outcomes.iter().flatten().copied().min(),
        empirical_stay_rate: stayed as f64 / runs as f64,
        theoretical_bound: 1.0 - 2.0 * (-d * d * mu as f64 / (2.0 * t as f64)).exp(),
    })
}

/// How `recommend_parameters` derives its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdvisorMode {
    /// Constants straight from the run-time guarantee:
    /// `c_μ = 16/ε²`, `c_λ = (1−ζ)(1−δ²)(1−ε)⁴/(16e)`,
    /// `μ = ⌈c_μ n ln n⌉`, `λ = ⌈μ/c_λ⌉`, `budget = ⌈λ(n/2 + 2e ln n)⌉`.
    Theorem,
    /// The published experimental choices: `μ = ⌈3 n ln n⌉`, `λ = 12μ`,
    /// `budget = 10 n³`.
    Experiment,
}

/// A recommended parameter triple for a model-based run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParameterAdvice {
    pub mu: usize,
    pub lambda: usize,
    pub budget: u64,
}

/// Recommends (μ, λ, budget) for problem size `n`, either from the proof
/// constants (`Theorem`) or the published experimental setup (`Experiment`).
/// `delta`, `eps`, and `zeta` are the slack parameters of the guarantee and
/// must lie in (0, 1); experiment mode ignores their values.
pub fn recommend_parameters(
    n: usize,
    mode: AdvisorMode,
    delta: f64,
    eps: f64,
    zeta: f64,
) -> Result<ParameterAdvice> {
    for (name, v) in [("delta", delta), ("eps", eps), ("zeta", zeta)] {
        if !(0.0 < v && v < 1.0) {
            return Err(EdaError::invalid(format!("{name} = {v} outside (0, 1)")));
        }
    }
    if n < 2 {
        return Err(EdaError::invalid(format!("advisor needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let e = std::f64::consts::E;
    Ok(match mode {
        AdvisorMode::Theorem => {
            let c_mu = 16.0 / (eps * eps);
            let c_lambda = (1.0 - zeta) * (1.0 - delta * delta) * (1.0 - eps).powi(4) / (16.0 * e);
            let mu = (c_mu * nf * nf.ln()).ceil() as usize;
            let lambda = (mu as f64 / c_lambda).ceil() as usize;
            let budget = (lambda as f64 * (nf / 2.0 + 2.0 * e * nf.ln())).ceil() as u64;
            ParameterAdvice { mu, lambda, budget }
        }
        AdvisorMode::Experiment => {
            let mu = (3.0 * nf * nf.ln()).ceil() as usize;
            let lambda = 12 * mu;
            let budget = 10 * (n as u64).pow(3);
            ParameterAdvice { mu, lambda, budget }
        }
    })
}
