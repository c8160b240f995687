// Usage: cargo run --release --example umda_desk_run
//
// One traced UMDA run at n = 50 with the published parameter rule
// mu = ceil(3 n ln n), lambda = 12 mu. The trace shows the model sweeping its
// critical block left to right while the frequencies right of it stay near
// 1/2 — the mechanism that lets the algorithm ignore the deception.

use edabench::algorithms::{run, AlgorithmVariant, OptimizerConfig};
use edabench::diagnostics::{recommend_parameters, AdvisorMode};
use edabench::fitness::FitnessFunction;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> edabench::Result<()> {
    let n = 50;
    let advice = recommend_parameters(n, AdvisorMode::Experiment, 0.5, 0.5, 0.5)?;
    println!(
        "UMDA at n = {n}: mu = {}, lambda = {}, budget = {}",
        advice.mu, advice.lambda, advice.budget
    );

    let f = FitnessFunction::dlb();
    let cfg = OptimizerConfig::new(AlgorithmVariant::Umda, advice.mu, advice.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let outcome = run(&f, &cfg, n, advice.budget, true, &mut rng)?;
    println!(
        "success = {}, evaluations = {}, generations = {}",
        outcome.success, outcome.evaluations, outcome.iterations
    );
    println!();

    let trace = outcome.trace.as_deref().expect("traced run");
    println!(
        "{:>10} {:>15} {:>19} {:>16}",
        "iteration", "critical block", "selection-relevant", "min freq right"
    );
    let fmt = |b: Option<usize>| b.map_or_else(|| "-".to_string(), |v| v.to_string());
    for snap in trace {
        println!(
            "{:>10} {:>15} {:>19} {:>16.3}",
            snap.iteration,
            fmt(snap.critical_block),
            fmt(snap.selection_relevant),
            snap.min_frequency_right_of_critical
        );
    }
    println!();
    println!("Once a block saturates at the upper margin it stays saturated, so the");
    println!("critical block only moves right; the frequencies right of it hover");
    println!("near 1/2 until selection reaches them.");

    // An absent index means every block already meets the selection bar, so
    // it ranks past the last block.
    let rank = |b: Option<usize>| b.unwrap_or(n / 2 + 1);
    let monotone = trace
        .windows(2)
        .all(|w| rank(w[0].selection_relevant) <= rank(w[1].selection_relevant));
    println!("selection-relevant block non-decreasing in this run: {monotone}");
    Ok(())
}
