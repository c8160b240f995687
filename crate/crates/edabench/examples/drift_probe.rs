// Usage: cargo run --release --example drift_probe
//
// Genetic drift of a neutral frequency under UMDA selection: the empirical
// probability that the frequency of a bit with no fitness signal stays within
// d of 1/2 over t model updates, against the guarantee
// 1 - 2 exp(-d^2 mu / (2 t)). Small populations drift away quickly; the
// guarantee tells how large mu must be for a given horizon.

use edabench::diagnostics::neutral_drift_probe;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> edabench::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (d, t, runs) = (0.25, 60, 60);
    println!("Neutral frequency staying within {d} of 1/2 over {t} updates, {runs} runs");
    println!(
        "{:>6} {:>12} {:>12} {:>22}",
        "mu", "stay rate", "guarantee", "first violation at"
    );
    for mu in [25usize, 100, 400, 1600] {
        let report = neutral_drift_probe(mu, t, d, runs, &mut rng)?;
        let first = report
            .violation_iteration
            .map_or_else(|| "-".to_string(), |i| i.to_string());
        println!(
            "{mu:>6} {:>12.3} {:>12.3} {:>22}",
            report.empirical_stay_rate, report.theoretical_bound, first
        );
    }
    println!();
    println!("A negative guarantee is vacuous: until mu reaches the order of");
    println!("t / d^2 the bound says nothing, then it climbs toward 1; the");
    println!("empirical rate dominates it everywhere. Undersized populations");
    println!("lose the neutral frequency to the clamp margins long before a");
    println!("signal could arrive — the same mechanism that strands mid-sized");
    println!("populations on deceptive blocks.");
    Ok(())
}
