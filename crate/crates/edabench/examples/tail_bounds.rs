// Usage: cargo run --release --example tail_bounds
//
// The closed-form binomial tail bounds next to exact tails: the pointwise
// bounds m(1-p)/(m-kp) * Pr[X=m] (upper) and (k-m)p/(kp-m) * Pr[X=m] (lower),
// and the multiplicative Chernoff bound exp(-delta^2 kp / 2) on the lower
// tail. The bounds must dominate; the table shows how tight they are.

use edabench::stats::{
    binom_cdf, binom_lower_tail_bound, binom_pmf, binom_upper_tail_bound,
    chernoff_lower_tail_bound, BinomialSpec,
};

fn main() -> edabench::Result<()> {
    let spec = BinomialSpec::new(100, 0.3)?;
    println!("X ~ Bin(100, 0.3), E[X] = {}", spec.mean());
    println!();

    println!("Upper tail Pr[X >= m]:");
    println!("{:>5} {:>14} {:>14} {:>8}", "m", "exact", "bound", "ratio");
    for m in [35u64, 40, 50, 60] {
        let exact = 1.0 - binom_cdf(spec, m - 1)?;
        let bound = binom_upper_tail_bound(spec, m)?;
        println!(
            "{m:>5} {exact:>14.3e} {bound:>14.3e} {:>8.2}",
            bound / exact
        );
    }
    println!();

    println!("Lower tail Pr[X <= m]:");
    println!("{:>5} {:>14} {:>14} {:>8}", "m", "exact", "bound", "ratio");
    for m in [25u64, 20, 15, 10] {
        let exact = binom_cdf(spec, m)?;
        let bound = binom_lower_tail_bound(spec, m)?;
        println!(
            "{m:>5} {exact:>14.3e} {bound:>14.3e} {:>8.2}",
            bound / exact
        );
    }
    println!();

    println!("Chernoff lower tail Pr[X <= (1-delta) E[X]] <= exp(-delta^2 E[X] / 2):");
    println!("{:>7} {:>5} {:>14} {:>14}", "delta", "m", "exact", "bound");
    for tenths in [2u32, 4, 6, 8] {
        let delta = f64::from(tenths) / 10.0;
        let m = ((1.0 - delta) * spec.mean()).floor() as u64;
        let exact = binom_cdf(spec, m)?;
        let bound = chernoff_lower_tail_bound(spec.mean(), delta);
        println!("{delta:>7.1} {m:>5} {exact:>14.3e} {bound:>14.3e}");
    }
    println!();

    println!("Boundary cases collapse to single probabilities, for X ~ Bin(40, 0.3):");
    let tiny = BinomialSpec::new(40, 0.3)?;
    println!(
        "  upper bound at m = k:  {:.3e} = Pr[X = 40] = {:.3e}",
        binom_upper_tail_bound(tiny, 40)?,
        binom_pmf(tiny, 40)?
    );
    println!(
        "  lower bound at m = 0:  {:.3e} = Pr[X = 0]  = {:.3e}",
        binom_lower_tail_bound(tiny, 0)?,
        binom_pmf(tiny, 0)?
    );
    Ok(())
}
