// Usage: cargo run --release --example runtime_sweep
//
// A reduced runtime sweep from plan to artifacts: execute a deterministic
// plan, write the run-record CSV, fit per-algorithm power laws to the
// medians, and render the log-log SVG. The evolutionary algorithms scale
// near n^3 while the model-based pair stays well below it.

use edabench::harness::{
    emit_svg_loglog, execute, fit_medians, plan_runtime_sweep, summarize_records, write_csv,
    PlotStyle,
};
use std::path::Path;

fn main() -> edabench::Result<()> {
    let runs = 10;
    let mut plan = plan_runtime_sweep(&[50, 100, 150], runs)?;
    plan.master_seed = 31;
    println!(
        "plan `{}`: {} cells, {} runs total",
        plan.name,
        plan.cells.len(),
        plan.total_runs()
    );

    let records = execute(&plan, 1)?;
    let csv_path = Path::new("runtime_sweep.csv");
    write_csv(&records, csv_path)?;
    println!("wrote {} records to {}", records.len(), csv_path.display());
    println!();

    let summary = summarize_records(&records)?;
    println!(
        "{:<10} {:>5} {:>8} {:>12} {:>9}",
        "algorithm", "n", "success", "median", "per n^3"
    );
    for cell in &summary {
        let median = cell.median.expect("all cells succeed at this scale");
        println!(
            "{:<10} {:>5} {:>8.2} {:>12.0} {:>9.3}",
            cell.algorithm.id(),
            cell.n,
            cell.success_ratio,
            median,
            median / (cell.n as f64).powi(3)
        );
    }
    println!();

    for (algorithm, fit) in fit_medians(&summary)? {
        let fit = fit.expect("three sizes per algorithm");
        println!(
            "{:<10} T ~ {:.3} * n^{:.3}",
            algorithm.id(),
            fit.scale,
            fit.exponent
        );
    }
    println!();

    let svg = emit_svg_loglog(&summary, &PlotStyle::default())?;
    let svg_path = Path::new("runtime_sweep.svg");
    std::fs::write(svg_path, svg)?;
    println!("wrote log-log plot to {}", svg_path.display());
    Ok(())
}
