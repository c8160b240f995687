//! The optimizer roster: UMDA, MIMIC, the (1+1) EA, comma-selection EAs/GAs,
//! and plus-selection EAs, all under one run contract. Every fitness call
//! goes through a shared meter, so `evaluations` is the exact call count up
//! to and including the first evaluation of an optimum, runs halt
//! mid-generation the moment an optimum is sampled, and budget exhaustion
//! stops a run at exactly the configured number of evaluations.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::diagnostics::IterationSnapshot;
use crate::error::{EdaError, Result};
use crate::fitness::{BitString, FitnessFunction};
use crate::models::{
    mimic_fit, select_best, umda_update, ChainModel, FrequencyVector, Individual, Population,
};

/// The algorithms this crate can run, with their config-file identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmVariant {
    #[serde(rename = "umda")]
    Umda,
    #[serde(rename = "mimic")]
    Mimic,
    #[serde(rename = "opo_ea")]
    OnePlusOneEa,
    #[serde(rename = "comma_ea")]
    CommaEa,
    #[serde(rename = "comma_ga")]
    CommaGa,
    #[serde(rename = "opl_ea")]
    OnePlusLambdaEa,
    #[serde(rename = "mpo_ea")]
    MuPlusOneEa,
}

impl AlgorithmVariant {
    pub const ALL: [AlgorithmVariant; 7] = [
        AlgorithmVariant::Umda,
        AlgorithmVariant::Mimic,
        AlgorithmVariant::OnePlusOneEa,
        AlgorithmVariant::CommaEa,
        AlgorithmVariant::CommaGa,
        AlgorithmVariant::OnePlusLambdaEa,
        AlgorithmVariant::MuPlusOneEa,
    ];

    /// Identifier used in config files, CSV records, and the CLI.
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmVariant::Umda => "umda",
            AlgorithmVariant::Mimic => "mimic",
            AlgorithmVariant::OnePlusOneEa => "opo_ea",
            AlgorithmVariant::CommaEa => "comma_ea",
            AlgorithmVariant::CommaGa => "comma_ga",
            AlgorithmVariant::OnePlusLambdaEa => "opl_ea",
            AlgorithmVariant::MuPlusOneEa => "mpo_ea",
        }
    }

    /// Human-readable name for report and plot legends.
    pub fn display_name(&self) -> &'static str {
        match self {
            AlgorithmVariant::Umda => "UMDA",
            AlgorithmVariant::Mimic => "MIMIC",
            AlgorithmVariant::OnePlusOneEa => "(1+1) EA",
            AlgorithmVariant::CommaEa => "(mu,lambda) EA",
            AlgorithmVariant::CommaGa => "(mu,lambda) GA",
            AlgorithmVariant::OnePlusLambdaEa => "(1+lambda) EA",
            AlgorithmVariant::MuPlusOneEa => "(mu+1) EA",
        }
    }

    /// True for the model-based algorithms, which are the only ones that can
    /// produce iteration traces.
    pub fn is_model_based(&self) -> bool {
        matches!(self, AlgorithmVariant::Umda | AlgorithmVariant::Mimic)
    }
}

impl std::fmt::Display for AlgorithmVariant {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(self.id())
    }
}

impl std::str::FromStr for AlgorithmVariant {
    type Err = EdaError;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmVariant::ALL
            .into_iter()
            .find(|v| v.id() == s)
            .ok_or_else(|| EdaError::invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Parameters of one optimizer run. The mutation rate is `chi / n`, so the
/// same config applies across problem sizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub variant: AlgorithmVariant,
    pub mu: usize,
    pub lambda: usize,
    /// Mutation-rate numerator: each bit flips with probability `chi / n`.
    pub chi: f64,
    /// Crossover probability; only the comma GA consults it.
    pub pc: f64,
}

impl OptimizerConfig {
    pub fn new(variant: AlgorithmVariant, mu: usize, lambda: usize) -> Self {
        OptimizerConfig {
            variant,
            mu,
            lambda,
            chi: 1.0,
            pc: 0.5,
        }
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_pc(mut self, pc: f64) -> Self {
        self.pc = pc;
        self
    }

    /// Checks the generic field invariants plus the population shape the
    /// variant's name promises (e.g. `opl_ea` must have μ = 1).
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 1 {
            return Err(EdaError::invalid("problem size must be at least 1"));
        }
        let rate = self.chi / n as f64;
        if !(rate > 0.0 && rate < 1.0) {
            return Err(EdaError::invalid(format!(
                "mutation rate chi/n = {rate} outside (0, 1)"
            )));
        }
        if !(0.0..=1.0).contains(&self.pc) {
            return Err(EdaError::invalid(format!(
                "crossover probability {} outside [0, 1]",
                self.pc
            )));
        }
        if self.mu < 1 || self.lambda < 1 {
            return Err(EdaError::invalid("mu and lambda must be at least 1"));
        }
        match self.variant {
            AlgorithmVariant::Umda | AlgorithmVariant::Mimic => {
                if self.mu < 2 || self.mu > self.lambda {
                    return Err(EdaError::invalid(format!(
                        "{} needs 2 <= mu <= lambda, got mu={} lambda={}",
                        self.variant, self.mu, self.lambda
                    )));
                }
            }
            AlgorithmVariant::CommaEa | AlgorithmVariant::CommaGa => {
                if self.mu > self.lambda {
                    return Err(EdaError::invalid(format!(
                        "comma selection needs mu <= lambda, got mu={} lambda={}",
                        self.mu, self.lambda
                    )));
                }
            }
            AlgorithmVariant::OnePlusOneEa => {
                if self.mu != 1 || self.lambda != 1 {
                    return Err(EdaError::invalid("opo_ea requires mu = lambda = 1"));
                }
                if self.chi != 1.0 {
                    return Err(EdaError::invalid(
                        "opo_ea runs at the standard 1/n mutation rate",
                    ));
                }
            }
            AlgorithmVariant::OnePlusLambdaEa => {
                if self.mu != 1 {
                    return Err(EdaError::invalid("opl_ea requires mu = 1"));
                }
            }
            AlgorithmVariant::MuPlusOneEa => {
                if self.lambda != 1 {
                    return Err(EdaError::invalid("mpo_ea requires lambda = 1"));
                }
            }
        }
        Ok(())
    }
}

/// Result of one run. `iterations` counts started generations (mutation
/// steps for the (1+1) EA); `best` is the best individual ever evaluated,
/// which on success is an optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub success: bool,
    pub evaluations: u64,
    pub iterations: u64,
    pub best: Individual,
    pub trace: Option<Vec<IterationSnapshot>>,
}

/// Counts every fitness call against the budget, tracks the best individual,
/// and flags the moment an optimum value is evaluated.
struct Meter<'a> {
    f: &'a FitnessFunction,
    optimum: Option<u32>,
    budget: u64,
    evaluations: u64,
    best: Option<Individual>,
    hit_optimum: bool,
}

impl<'a> Meter<'a> {
    fn new(f: &'a FitnessFunction, n: usize, budget: u64) -> Result<Meter<'a>> {
        Ok(Meter {
            f,
            optimum: f.optimum(n)?,
            budget,
            evaluations: 0,
            best: None,
            hit_optimum: false,
        })
    }

    /// Evaluates one string, or returns `None` when the budget is spent.
    fn evaluate(&mut self, bits: &BitString) -> Result<Option<u32>> {
        if self.evaluations >= self.budget {
            return Ok(None);
        }
        self.evaluations += 1;
        let value = self.f.evaluate(bits)?;
        if self.best.as_ref().is_none_or(|b| value > b.fitness) {
            self.best = Some(Individual {
                bits: bits.clone(),
                fitness: value,
            });
        }
        if self.optimum.is_some_and(|opt| value >= opt) {
            self.hit_optimum = true;
        }
        Ok(Some(value))
    }

    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// A run is over once the optimum was sampled or the budget is spent.
    fn stopped(&self) -> bool {
        self.hit_optimum || self.exhausted()
    }

    fn finish(self, iterations: u64, trace: Option<Vec<IterationSnapshot>>) -> RunOutcome {
        RunOutcome {
            success: self.hit_optimum,
            evaluations: self.evaluations,
            iterations,
            best: self.best.expect("budget >= 1 guarantees one evaluation"),
            trace,
        }
    }
}

fn check_budget(budget: u64) -> Result<()> {
    if budget < 1 {
        return Err(EdaError::invalid("budget must be at least 1 evaluation"));
    }
    Ok(())
}

fn flip_distribution(n: usize, rate: f64) -> Binomial {
    Binomial::new(n as u64, rate).expect("rate validated")
}

/// Flips a binomial number of distinct positions: exactly the distribution
/// of flipping each bit independently with the given rate.
fn mutate_into<R: Rng + ?Sized>(
    parent: &BitString,
    flips: &Binomial,
    rng: &mut R,
    out: &mut BitString,
) {
    out.copy_from(parent);
    flip_in_place(flips, rng, out);
}

fn flip_in_place<R: Rng + ?Sized>(flips: &Binomial, rng: &mut R, x: &mut BitString) {
    let count = flips.sample(rng) as usize;
    if count == 0 {
        return;
    }
    for i in rand::seq::index::sample(rng, x.len(), count) {
        x.flip(i);
    }
}

/// Flips each bit independently with probability `rate`; the parent is left
/// unmodified. `rate` must lie in `(0, 1]`; the degenerate rate 1 returns the
/// exact complement.
pub fn standard_bit_mutation<R: Rng + ?Sized>(x: &BitString, rate: f64, rng: &mut R) -> BitString {
    assert!(
        rate > 0.0 && rate <= 1.0,
        "mutation rate {rate} outside (0, 1]"
    );
    let mut out = x.clone();
    if rate == 1.0 {
        for i in 0..out.len() {
            out.flip(i);
        }
        return out;
    }
    flip_in_place(&flip_distribution(x.len(), rate), rng, &mut out);
    out
}

fn crossover_into<R: Rng + ?Sized>(a: &BitString, b: &BitString, rng: &mut R, out: &mut BitString) {
    out.copy_from(a);
    for i in 0..a.len() {
        if a[i] != b[i] && rng.random::<bool>() {
            out.set(i, b[i]);
        }
    }
}

/// Each position independently copies `a`'s bit or `b`'s bit with
/// probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &BitString,
    b: &BitString,
    rng: &mut R,
) -> Result<BitString> {
    if a.len() != b.len() {
        return Err(EdaError::invalid(format!(
            "crossover needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut out = a.clone();
    crossover_into(a, b, rng, &mut out);
    Ok(out)
}

/// The (1+1) EA with mutation rate 1/n: one uniform random initial
/// individual (counted as the first evaluation), then repeated
/// mutate-and-accept with acceptance on `f(y) >= f(x)`.
pub fn run_one_plus_one_ea<R: Rng + ?Sized>(
    f: &FitnessFunction,
    n: usize,
    budget: u64,
    rng: &mut R,
) -> Result<RunOutcome> {
    check_budget(budget)?;
    if n < 2 {
        return Err(EdaError::invalid("the 1/n mutation rate needs n >= 2"));
    }
    let mut meter = Meter::new(f, n, budget)?;
    let mut x = BitString::uniform(n, rng);
    let mut fx = meter.evaluate(&x)?.expect("budget >= 1");
    let flips = flip_distribution(n, 1.0 / n as f64);
    let mut y = BitString::all_zeros(n);
    let mut iterations = 0u64;
    while !meter.stopped() {
        iterations += 1;
        mutate_into(&x, &flips, rng, &mut y);
        match meter.evaluate(&y)? {
            None => break,
            Some(fy) => {
                if fy >= fx {
                    std::mem::swap(&mut x, &mut y);
                    fx = fy;
                }
            }
        }
    }
    Ok(meter.finish(iterations, None))
}

/// Observer invoked with each finished generation's parent population.
pub type GenerationObserver<'a> = &'a mut dyn FnMut(u64, &Population);

fn init_population<R: Rng + ?Sized>(
    meter: &mut Meter,
    mu: usize,
    n: usize,
    rng: &mut R,
) -> Result<std::result::Result<Population, ()>> {
    let mut members = Vec::with_capacity(mu);
    for _ in 0..mu {
        let bits = BitString::uniform(n, rng);
        match meter.evaluate(&bits)? {
            None => return Ok(Err(())),
            Some(fitness) => members.push(Individual { bits, fitness }),
        }
        if meter.hit_optimum {
            return Ok(Err(()));
        }
    }
    Ok(Ok(Population::from_members(members)?))
}

fn run_population_ea<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    mut observer: Option<GenerationObserver>,
    elitist: bool,
) -> Result<RunOutcome> {
    check_budget(budget)?;
    let (mu, lambda) = (cfg.mu, cfg.lambda);
    if mu < 1 || lambda < 1 {
        return Err(EdaError::invalid("mu and lambda must be at least 1"));
    }
    if !elitist && mu > lambda {
        return Err(EdaError::invalid(format!(
            "comma selection needs mu <= lambda, got mu={mu} lambda={lambda}"
        )));
    }
    let rate = cfg.chi / n as f64;
    if !(rate > 0.0 && rate < 1.0) {
        return Err(EdaError::invalid(format!(
            "mutation rate chi/n = {rate} outside (0, 1)"
        )));
    }
    if !(0.0..=1.0).contains(&cfg.pc) {
        return Err(EdaError::invalid(format!(
            "crossover probability {} outside [0, 1]",
            cfg.pc
        )));
    }
    let crossover = cfg.variant == AlgorithmVariant::CommaGa;

    let mut meter = Meter::new(f, n, budget)?;
    let mut parents = match init_population(&mut meter, mu, n, rng)? {
        Ok(pop) => pop,
        Err(()) => return Ok(meter.finish(0, None)),
    };
    let flips = flip_distribution(n, rate);
    let mut offspring: Vec<Individual> = (0..lambda)
        .map(|_| Individual {
            bits: BitString::all_zeros(n),
            fitness: 0,
        })
        .collect();
    let mut iterations = 0u64;
    while !meter.stopped() {
        iterations += 1;
        let mut produced = lambda;
        for (j, child) in offspring.iter_mut().enumerate() {
            // With probability pc the GA crosses two uniform parents and then
            // mutates; otherwise (and always for the EA) one uniform parent
            // is mutated. pc = 0 draws no coin, so the GA's random stream
            // degenerates to the EA's exactly.
            let crossed = crossover && cfg.pc > 0.0 && rng.random_bool(cfg.pc);
            if crossed {
                let a = &parents.members()[rng.random_range(0..mu)].bits;
                let b = &parents.members()[rng.random_range(0..mu)].bits;
                crossover_into(a, b, rng, &mut child.bits);
                flip_in_place(&flips, rng, &mut child.bits);
            } else {
                let parent = &parents.members()[rng.random_range(0..mu)].bits;
                mutate_into(parent, &flips, rng, &mut child.bits);
            }
            match meter.evaluate(&child.bits)? {
                None => {
                    produced = j;
                    break;
                }
                Some(fitness) => child.fitness = fitness,
            }
            if meter.hit_optimum {
                break;
            }
        }
        if meter.hit_optimum || produced < lambda {
            break;
        }
        let pool = if elitist {
            let mut combined = parents.members().to_vec();
            combined.extend(offspring.iter().cloned());
            Population::from_members(combined)?
        } else {
            Population::from_members(std::mem::take(&mut offspring))?
        };
        parents = select_best(&pool, mu, rng)?;
        if !elitist {
            offspring = pool.into_members();
        }
        if let Some(obs) = observer.as_mut() {
            obs(iterations, &parents);
        }
    }
    Ok(meter.finish(iterations, None))
}

/// Comma selection: each generation draws λ offspring from the current μ
/// parents (uniform parent choice; the GA first applies uniform crossover to
/// two uniform parents with probability `pc`), then the next parents are the
/// μ best offspring alone. Parents never survive, so best-so-far fitness of
/// the population may decrease.
pub fn run_comma_selection<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    observer: Option<GenerationObserver>,
) -> Result<RunOutcome> {
    run_population_ea(f, cfg, n, budget, rng, observer, false)
}

/// Plus selection: the next parents are the best μ of parents and offspring
/// combined (ties uniform), so the population's best fitness never decreases.
pub fn run_plus_selection<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    observer: Option<GenerationObserver>,
) -> Result<RunOutcome> {
    run_population_ea(f, cfg, n, budget, rng, observer, true)
}

/// Hook invoked after each UMDA model update with the generation's offspring
/// population and the freshly fitted frequency vector (a snapshot copy,
/// immune to later updates).
pub type UmdaHook<'a> = &'a mut dyn FnMut(u64, &Population, &FrequencyVector);

/// Hook invoked after each MIMIC model update with the generation's offspring
/// population and the freshly fitted chain model.
pub type MimicHook<'a> = &'a mut dyn FnMut(u64, &Population, &ChainModel);

fn check_eda_params(cfg: &OptimizerConfig, n: usize, budget: u64) -> Result<()> {
    check_budget(budget)?;
    if n < 2 {
        return Err(EdaError::invalid("model-based runs need n >= 2"));
    }
    if cfg.mu < 2 || cfg.mu > cfg.lambda {
        return Err(EdaError::invalid(format!(
            "model-based runs need 2 <= mu <= lambda, got mu={} lambda={}",
            cfg.mu, cfg.lambda
        )));
    }
    Ok(())
}

/// The univariate EDA: start from the all-1/2 frequency vector; per
/// iteration sample λ individuals, select the μ best (ties uniform), set each
/// frequency to the selected one-count fraction, and clamp into
/// `[1/n, 1 − 1/n]`.
pub fn run_umda<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    trace: bool,
    mut hook: Option<UmdaHook>,
) -> Result<RunOutcome> {
    check_eda_params(cfg, n, budget)?;
    let (mu, lambda) = (cfg.mu, cfg.lambda);
    let mut meter = Meter::new(f, n, budget)?;
    let mut p = FrequencyVector::uniform(n);
    let mut snapshots = if trace { Some(Vec::new()) } else { None };
    let mut members: Vec<Individual> = (0..lambda)
        .map(|_| Individual {
            bits: BitString::all_zeros(n),
            fitness: 0,
        })
        .collect();
    let mut iterations = 0u64;
    while !meter.stopped() {
        iterations += 1;
        let sampler = p.sampler();
        let mut produced = lambda;
        for (j, m) in members.iter_mut().enumerate() {
            sampler.sample_into(rng, &mut m.bits);
            match meter.evaluate(&m.bits)? {
                None => {
                    produced = j;
                    break;
                }
                Some(fitness) => m.fitness = fitness,
            }
            if meter.hit_optimum {
                break;
            }
        }
        if meter.hit_optimum || produced < lambda {
            break;
        }
        let pop = Population::from_members(std::mem::take(&mut members))?;
        let selected = select_best(&pop, mu, rng)?;
        p = umda_update(&selected, n)?;
        if let Some(h) = hook.as_mut() {
            h(iterations, &pop, &p);
        }
        if let Some(s) = snapshots.as_mut() {
            s.push(IterationSnapshot::capture(
                iterations,
                p.probabilities().to_vec(),
                &pop,
                mu,
            ));
        }
        members = pop.into_members();
    }
    Ok(meter.finish(iterations, snapshots))
}

/// The chain-model EDA: like `run_umda`, but the fitted model is the
/// entropy-ordered chain and sampling follows the chain's conditionals.
/// Traces record the chain's marginal frequencies.
pub fn run_mimic<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    trace: bool,
    mut hook: Option<MimicHook>,
) -> Result<RunOutcome> {
    check_eda_params(cfg, n, budget)?;
    let (mu, lambda) = (cfg.mu, cfg.lambda);
    let mut meter = Meter::new(f, n, budget)?;
    let mut model = ChainModel::uniform(n);
    let mut snapshots = if trace { Some(Vec::new()) } else { None };
    let mut members: Vec<Individual> = (0..lambda)
        .map(|_| Individual {
            bits: BitString::all_zeros(n),
            fitness: 0,
        })
        .collect();
    let mut iterations = 0u64;
    while !meter.stopped() {
        iterations += 1;
        let sampler = model.sampler();
        let mut produced = lambda;
        for (j, m) in members.iter_mut().enumerate() {
            sampler.sample_into(rng, &mut m.bits);
            match meter.evaluate(&m.bits)? {
                None => {
                    produced = j;
                    break;
                }
                Some(fitness) => m.fitness = fitness,
            }
            if meter.hit_optimum {
                break;
            }
        }
        if meter.hit_optimum || produced < lambda {
            break;
        }
        let pop = Population::from_members(std::mem::take(&mut members))?;
        let selected = select_best(&pop, mu, rng)?;
        model = mimic_fit(&selected, n, rng)?;
        if let Some(h) = hook.as_mut() {
            h(iterations, &pop, &model);
        }
        if let Some(s) = snapshots.as_mut() {
            s.push(IterationSnapshot::capture(
                iterations,
                model.marginals(),
                &pop,
                mu,
            ));
        }
        members = pop.into_members();
    }
    Ok(meter.finish(iterations, snapshots))
}

/// Runs the configured algorithm. Traces are only available for the
/// model-based algorithms.
pub fn run<R: Rng + ?Sized>(
    f: &FitnessFunction,
    cfg: &OptimizerConfig,
    n: usize,
    budget: u64,
    trace: bool,
    rng: &mut R,
) -> Result<RunOutcome> {
    cfg.validate(n)?;
    if trace && !cfg.variant.is_model_based() {
        return Err(EdaError::invalid(format!(
            "traces require a model-based algorithm, not {}",
            cfg.variant
        )));
    }
    match cfg.variant {
        AlgorithmVariant::OnePlusOneEa => run_one_plus_one_ea(f, n, budget, rng),
        AlgorithmVariant::CommaEa | AlgorithmVariant::CommaGa => {
            run_comma_selection(f, cfg, n, budget, rng, None)
        }
        AlgorithmVariant::OnePlusLambdaEa | AlgorithmVariant::MuPlusOneEa => {
            run_plus_selection(f, cfg, n, budget, rng, None)
        }
        AlgorithmVariant::Umda => run_umda(f, cfg, n, budget, rng, trace, None),
        AlgorithmVariant::Mimic => run_mimic(f, cfg, n, budget, rng, trace, None),
    }
}
