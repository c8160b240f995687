// Usage: cargo run --release --example algorithm_roster
//
// Every optimizer in the crate on one small instance, through the single
// `run` dispatcher: the model-based pair with mu = ceil(3 n ln n), the comma
// variants with mu = ceil(ln n) and lambda = 9 mu, and the plus variants with
// the (1+sqrt n) / (ln n + 1) shapes. Comma selection may lose fitness between
// generations; plus selection never does.

use edabench::algorithms::{run, AlgorithmVariant, OptimizerConfig};
use edabench::diagnostics::{recommend_parameters, AdvisorMode};
use edabench::fitness::FitnessFunction;
use edabench::harness::cubic_budget;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> edabench::Result<()> {
    let n = 30;
    let runs = 30;
    let f = FitnessFunction::dlb();
    let budget = cubic_budget(n);
    let eda = recommend_parameters(n, AdvisorMode::Experiment, 0.5, 0.5, 0.5)?;
    let comma_mu = (n as f64).ln().ceil() as usize;
    let sqrt_n = (n as f64).sqrt().ceil() as usize;

    println!("All optimizers on the deceptive landscape, n = {n}, {runs} runs each");
    println!(
        "{:<14} {:>6} {:>7} {:>12} {:>8}",
        "algorithm", "mu", "lambda", "median", "success"
    );
    for variant in AlgorithmVariant::ALL {
        let (mu, lambda) = match variant {
            AlgorithmVariant::Umda | AlgorithmVariant::Mimic => (eda.mu, eda.lambda),
            AlgorithmVariant::OnePlusOneEa => (1, 1),
            AlgorithmVariant::CommaEa | AlgorithmVariant::CommaGa => (comma_mu, 9 * comma_mu),
            AlgorithmVariant::OnePlusLambdaEa => (1, sqrt_n),
            AlgorithmVariant::MuPlusOneEa => (comma_mu, 1),
        };
        let cfg = OptimizerConfig::new(variant, mu, lambda);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut evals: Vec<u64> = Vec::with_capacity(runs);
        let mut successes = 0;
        for _ in 0..runs {
            let outcome = run(&f, &cfg, n, budget, false, &mut rng)?;
            evals.push(outcome.evaluations);
            successes += u64::from(outcome.success);
        }
        evals.sort_unstable();
        println!(
            "{:<14} {:>6} {:>7} {:>12} {:>7}/{runs}",
            variant.display_name(),
            mu,
            lambda,
            evals[runs / 2],
            successes
        );
    }
    println!();
    println!("At this size every mutation-based variant lands on the same cubic");
    println!("order and the small comma populations are quickest; the model-based");
    println!("pair pays a large per-generation constant for drift-proof marginals");
    println!("but its run time grows almost a full power of n more slowly.");
    Ok(())
}
