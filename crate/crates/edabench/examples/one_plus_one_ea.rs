// Usage: cargo run --release --example one_plus_one_ea
//
// The (1+1) EA against its exact expected run time: Monte Carlo means versus
// the closed formula and the level-by-level recurrence, plus the
// high-probability threshold no run should beat.

use edabench::algorithms::run_one_plus_one_ea;
use edabench::fitness::FitnessFunction;
use edabench::stats::{
    ea_dlb_expected_time_closed, ea_dlb_expected_time_recurrence, whp_threshold,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> edabench::Result<()> {
    let f = FitnessFunction::dlb();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let runs = 400;

    println!("(1+1) EA on the deceptive block landscape, {runs} runs per size");
    println!(
        "{:>4} {:>14} {:>14} {:>14} {:>8}",
        "n", "closed form", "recurrence", "measured", "ratio"
    );
    for n in [10usize, 20, 30, 40] {
        let closed = ea_dlb_expected_time_closed(n)?;
        let recurrence = ea_dlb_expected_time_recurrence(n)?;
        let mut total = 0u64;
        for _ in 0..runs {
            let outcome = run_one_plus_one_ea(&f, n, u64::MAX, &mut rng)?;
            // The formula counts evaluations after the initial one.
            total += outcome.evaluations - 1;
        }
        let measured = total as f64 / runs as f64;
        println!(
            "{n:>4} {closed:>14.1} {recurrence:>14.1} {measured:>14.1} {:>8.4}",
            measured / closed
        );
    }
    println!();

    let n = 60;
    let (threshold, bound) = whp_threshold(n);
    println!("High-probability floor at n = {n}: finishing within n^3/(16e) = {threshold:.0}");
    println!("evaluations has probability at most exp(-n/(64e)) = {bound:.4}.");
    let runs = 200;
    let cutoff = threshold.floor() as u64 + 1; // +1 for the initial evaluation
    let mut early = 0;
    for _ in 0..runs {
        let outcome = run_one_plus_one_ea(&f, n, cutoff, &mut rng)?;
        if outcome.success {
            early += 1;
        }
    }
    println!("Observed: {early} of {runs} runs finished below the threshold.");
    Ok(())
}
