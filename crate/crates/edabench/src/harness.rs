//! Experiment orchestration: declarative sweep plans, deterministic parallel
//! execution with per-run seeds, CSV persistence, per-cell summaries,
//! power-law analysis, log-log SVG plots, and the command-line interface.
//!
//! Reproducibility contract: every run's seed is a stable hash of
//! `(master seed, algorithm id, n, mu, run index)`, records are sorted by the
//! same key after execution, and all aggregation is order-insensitive — so a
//! plan plus its master seed determines the output CSV byte for byte at any
//! parallelism level.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{self, AlgorithmVariant, OptimizerConfig, RunOutcome};
use crate::diagnostics::{recommend_parameters, AdvisorMode, IterationSnapshot};
use crate::error::{EdaError, Result};
use crate::fitness::FitnessFunction;
use crate::stats::{self, BinomialSpec};

/// Master seed used when the caller does not supply one.
pub const DEFAULT_MASTER_SEED: u64 = 0x5EED_BA5E;

/// Exact header of the run-record CSV format.
pub const CSV_HEADER: &str = "algorithm,n,mu,lambda,seed,run_index,budget,evaluations,success";

/// Exact header of the per-iteration trace CSV format.
pub const TRACE_HEADER: &str = "iteration,critical_block,selection_relevant,min_freq_right";

/// One experiment cell: a fixed algorithm configuration on one problem size,
/// repeated `runs` times with derived seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanCell {
    pub algorithm: AlgorithmVariant,
    /// Fitness id in the config grammar (e.g. `dlb`, `dlb_k:4`, `const:0`).
    pub fitness: String,
    pub n: usize,
    pub mu: usize,
    pub lambda: usize,
    pub runs: u32,
    pub budget: u64,
    /// Mutation-rate numerator; bits flip with probability `chi / n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    /// Crossover probability (consulted by the comma GA only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc: Option<f64>,
}

impl PlanCell {
    /// The optimizer configuration this cell describes.
    pub fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::new(self.algorithm, self.mu, self.lambda);
        if let Some(chi) = self.chi {
            cfg = cfg.with_chi(chi);
        }
        if let Some(pc) = self.pc {
            cfg = cfg.with_pc(pc);
        }
        cfg
    }
}

/// A named list of cells under one master seed, with an optional default
/// output path. Serializes to the JSON config format accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub name: String,
    pub cells: Vec<PlanCell>,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentPlan {
    /// Checks every cell (parsable fitness with a consistent block layout,
    /// valid optimizer shape, runs and budget at least 1) and that no two
    /// cells share the `(algorithm, n, mu)` identity.
    pub fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(EdaError::invalid("plan has no cells"));
        }
        let mut seen = HashSet::new();
        for (index, cell) in self.cells.iter().enumerate() {
            let context = |e: EdaError| EdaError::invalid(format!("cell {index}: {e}"));
            if cell.runs < 1 {
                return Err(EdaError::invalid(format!(
                    "cell {index}: runs must be at least 1"
                )));
            }
            if cell.budget < 1 {
                return Err(EdaError::invalid(format!(
                    "cell {index}: budget must be at least 1"
                )));
            }
            let f: FitnessFunction = cell.fitness.parse().map_err(context)?;
            f.optimum(cell.n).map_err(context)?;
            cell.config().validate(cell.n).map_err(context)?;
            if !seen.insert((cell.algorithm, cell.n, cell.mu)) {
                return Err(EdaError::invalid(format!(
                    "duplicate cell identity ({}, n={}, mu={})",
                    cell.algorithm.id(),
                    cell.n,
                    cell.mu
                )));
            }
        }
        Ok(())
    }

    /// Total number of runs across all cells.
    pub fn total_runs(&self) -> u64 {
        self.cells.iter().map(|c| u64::from(c.runs)).sum()
    }
}

/// The `10 n^3` evaluation cutoff used by the published runtime sweeps.
pub fn cubic_budget(n: usize) -> u64 {
    10 * (n as u64).pow(3)
}

fn comma_parameters(n: usize) -> (usize, usize) {
    let mu = (n as f64).ln().ceil() as usize;
    (mu, 9 * mu)
}

fn dlb_cell(
    algorithm: AlgorithmVariant,
    n: usize,
    mu: usize,
    lambda: usize,
    runs: u32,
) -> PlanCell {
    PlanCell {
        algorithm,
        fitness: "dlb".to_string(),
        n,
        mu,
        lambda,
        runs,
        budget: cubic_budget(n),
        chi: None,
        pc: None,
    }
}

fn runtime_sweep_cells(
    ea_sizes: &[usize],
    eda_sizes: &[usize],
    runs: u32,
) -> Result<Vec<PlanCell>> {
    let mut cells = Vec::new();
    for &n in ea_sizes {
        cells.push(dlb_cell(AlgorithmVariant::OnePlusOneEa, n, 1, 1, runs));
        let (mu, lambda) = comma_parameters(n);
        cells.push(dlb_cell(AlgorithmVariant::CommaEa, n, mu, lambda, runs));
        cells.push(dlb_cell(AlgorithmVariant::CommaGa, n, mu, lambda, runs));
    }
    for &n in eda_sizes {
        let advice = recommend_parameters(n, AdvisorMode::Experiment, 0.5, 0.5, 0.5)?;
        cells.push(dlb_cell(
            AlgorithmVariant::Umda,
            n,
            advice.mu,
            advice.lambda,
            runs,
        ));
        cells.push(dlb_cell(
            AlgorithmVariant::Mimic,
            n,
            advice.mu,
            advice.lambda,
            runs,
        ));
    }
    Ok(cells)
}

/// The full runtime sweep: all five algorithms on every given size, with the
/// published parameter rules — (1+1) alone, comma EAs with `mu = ceil(ln n)`
/// and `lambda = 9 mu`, the model-based pair with `mu = ceil(3 n ln n)` and
/// `lambda = 12 mu` — each capped at `10 n^3` evaluations.
pub fn plan_runtime_sweep(n_values: &[usize], runs: u32) -> Result<ExperimentPlan> {
    let plan = ExperimentPlan {
        name: "runtime-sweep".to_string(),
        cells: runtime_sweep_cells(n_values, n_values, runs)?,
        master_seed: DEFAULT_MASTER_SEED,
        out: None,
    };
    plan.validate()?;
    Ok(plan)
}

/// Desk-scale runtime sweep: the evolutionary algorithms keep the full size
/// range 50..=300, while the model-based pair stops at n = 150 because their
/// large populations dominate the cost of the sweep.
pub fn plan_runtime_sweep_desk(runs: u32) -> Result<ExperimentPlan> {
    let ea_sizes: Vec<usize> = (1..=6).map(|i| 50 * i).collect();
    let plan = ExperimentPlan {
        name: "runtime-sweep-desk".to_string(),
        cells: runtime_sweep_cells(&ea_sizes, &[50, 100, 150], runs)?,
        master_seed: DEFAULT_MASTER_SEED,
        out: None,
    };
    plan.validate()?;
    Ok(plan)
}

/// Population-size sweep at fixed `n`: one UMDA cell per exponent `e` with
/// `mu = 2^e`, `lambda = 12 mu`, and the `10 n^3` cutoff. Success ratios per
/// cell make the drift regime (mid-range mu) visible.
pub fn plan_mu_sweep(n: usize, exponents: &[u32], runs: u32) -> Result<ExperimentPlan> {
    let mut cells = Vec::new();
    for &e in exponents {
        if !(1..=24).contains(&e) {
            return Err(EdaError::invalid(format!(
                "population exponent {e} outside 1..=24"
            )));
        }
        let mu = 1usize << e;
        cells.push(dlb_cell(AlgorithmVariant::Umda, n, mu, 12 * mu, runs));
    }
    let plan = ExperimentPlan {
        name: format!("mu-sweep-n{n}"),
        cells,
        master_seed: DEFAULT_MASTER_SEED,
        out: None,
    };
    plan.validate()?;
    Ok(plan)
}

/// Outcome of one seeded run, as persisted to CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub algorithm: AlgorithmVariant,
    pub n: usize,
    pub mu: usize,
    pub lambda: usize,
    pub seed: u64,
    pub run_index: u32,
    pub budget: u64,
    pub evaluations: u64,
    pub success: bool,
}

fn fnv1a(parts: &[&[u8]]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &byte in *part {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

/// Stable 64-bit per-run seed: FNV-1a over the little-endian master seed, the
/// algorithm id bytes, and the little-endian n, mu, and run index. Depends
/// only on the cell identity, so reordering a plan's cells cannot change any
/// run's random stream.
pub fn stable_seed(
    master_seed: u64,
    algorithm: AlgorithmVariant,
    n: usize,
    mu: usize,
    run_index: u32,
) -> u64 {
    fnv1a(&[
        &master_seed.to_le_bytes(),
        algorithm.id().as_bytes(),
        &(n as u64).to_le_bytes(),
        &(mu as u64).to_le_bytes(),
        &run_index.to_le_bytes(),
    ])
}

/// Runs `body` and folds errors and panics into a failed record (zero
/// evaluations, no success), so one bad cell cannot abort a sweep or leave a
/// partial CSV row behind.
fn finished_record(template: RunRecord, body: impl FnOnce() -> Result<RunOutcome>) -> RunRecord {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(outcome)) => RunRecord {
            evaluations: outcome.evaluations,
            success: outcome.success,
            ..template
        },
        Ok(Err(_)) | Err(_) => template,
    }
}

fn run_cell_once(cell: &PlanCell, run_index: u32, seed: u64) -> RunRecord {
    let template = RunRecord {
        algorithm: cell.algorithm,
        n: cell.n,
        mu: cell.mu,
        lambda: cell.lambda,
        seed,
        run_index,
        budget: cell.budget,
        evaluations: 0,
        success: false,
    };
    finished_record(template, || {
        let f: FitnessFunction = cell.fitness.parse()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        algorithms::run(&f, &cell.config(), cell.n, cell.budget, false, &mut rng)
    })
}

fn record_key(r: &RunRecord) -> (&'static str, usize, usize, u32) {
    (r.algorithm.id(), r.n, r.mu, r.run_index)
}

/// Executes every run of the plan on a pool of `parallelism` workers. Each
/// run gets its own [`stable_seed`]-derived random stream and the records are
/// sorted by `(algorithm, n, mu, run index)`, so the result is identical for
/// any parallelism level.
pub fn execute(plan: &ExperimentPlan, parallelism: usize) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    if parallelism < 1 {
        return Err(EdaError::invalid("parallelism must be at least 1"));
    }
    let jobs: Vec<(&PlanCell, u32, u64)> = plan
        .cells
        .iter()
        .flat_map(|cell| {
            (0..cell.runs).map(move |ri| {
                let seed = stable_seed(plan.master_seed, cell.algorithm, cell.n, cell.mu, ri);
                (cell, ri, seed)
            })
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| EdaError::Execution(format!("building worker pool: {e}")))?;
    let mut records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(cell, ri, seed)| run_cell_once(cell, ri, seed))
            .collect()
    });
    records.sort_by(|a, b| record_key(a).cmp(&record_key(b)));
    Ok(records)
}

/// Renders records in the run-record CSV format (see [`CSV_HEADER`]).
pub fn render_csv(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.algorithm.id(),
            r.n,
            r.mu,
            r.lambda,
            r.seed,
            r.run_index,
            r.budget,
            r.evaluations,
            r.success
        );
    }
    out
}

/// Writes records to `path` in the run-record CSV format.
pub fn write_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    fs::write(path, render_csv(records))?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(line: usize, name: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|e| EdaError::parse(line, format!("bad {name} `{raw}`: {e}")))
}

/// Parses the run-record CSV format, enforcing the exact header and the
/// `evaluations <= budget` invariant. Errors carry 1-based line numbers.
pub fn parse_csv(text: &str) -> Result<Vec<RunRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, other)) => {
            return Err(EdaError::parse(
                1,
                format!("expected header `{CSV_HEADER}`, found `{other}`"),
            ))
        }
        None => {
            return Err(EdaError::parse(
                1,
                format!("empty input, expected header `{CSV_HEADER}`"),
            ))
        }
    }
    let mut records = Vec::new();
    for (index, line) in lines {
        let line_no = index + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(EdaError::parse(
                line_no,
                format!("expected 9 fields, found {}", fields.len()),
            ));
        }
        let algorithm: AlgorithmVariant = fields[0]
            .parse()
            .map_err(|e| EdaError::parse(line_no, format!("{e}")))?;
        let record = RunRecord {
            algorithm,
            n: parse_field(line_no, "n", fields[1])?,
            mu: parse_field(line_no, "mu", fields[2])?,
            lambda: parse_field(line_no, "lambda", fields[3])?,
            seed: parse_field(line_no, "seed", fields[4])?,
            run_index: parse_field(line_no, "run_index", fields[5])?,
            budget: parse_field(line_no, "budget", fields[6])?,
            evaluations: parse_field(line_no, "evaluations", fields[7])?,
            success: match fields[8] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(EdaError::parse(
                        line_no,
                        format!("success must be `true` or `false`, found `{other}`"),
                    ))
                }
            },
        };
        if record.evaluations > record.budget {
            return Err(EdaError::parse(
                line_no,
                format!(
                    "evaluations {} exceed budget {}",
                    record.evaluations, record.budget
                ),
            ));
        }
        records.push(record);
    }
    Ok(records)
}

/// Reads a run-record CSV from disk.
pub fn read_csv(path: &Path) -> Result<Vec<RunRecord>> {
    parse_csv(&fs::read_to_string(path)?)
}

/// Renders per-iteration model diagnostics in the trace CSV format (see
/// [`TRACE_HEADER`]); absent block indices become empty fields.
pub fn render_trace_csv(trace: &[IterationSnapshot]) -> String {
    let mut out = String::with_capacity(32 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    let block = |b: Option<usize>| b.map_or(String::new(), |v| v.to_string());
    for snap in trace {
        let _ = writeln!(
            out,
            "{},{},{},{:.6}",
            snap.iteration,
            block(snap.critical_block),
            block(snap.selection_relevant),
            snap.min_frequency_right_of_critical
        );
    }
    out
}

/// Aggregated view of one cell: quartiles of the evaluation counts over the
/// successful runs only (absent if the cell never succeeded), plus the
/// success ratio over all runs.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub algorithm: AlgorithmVariant,
    pub n: usize,
    pub mu: usize,
    pub lambda: usize,
    pub runs: u32,
    pub median: Option<f64>,
    pub lower_quartile: Option<f64>,
    pub upper_quartile: Option<f64>,
    pub success_ratio: f64,
}

/// Groups records by `(algorithm, n, mu)` and summarizes each group. The
/// result is sorted by that key and independent of the record order.
pub fn summarize_records(records: &[RunRecord]) -> Result<Vec<CellSummary>> {
    if records.is_empty() {
        return Err(EdaError::invalid("no records to summarize"));
    }
    type Group = (AlgorithmVariant, usize, Vec<u64>, Vec<bool>);
    let mut groups: BTreeMap<(&'static str, usize, usize), Group> = BTreeMap::new();
    for r in records {
        let group = groups
            .entry((r.algorithm.id(), r.n, r.mu))
            .or_insert_with(|| (r.algorithm, r.lambda, Vec::new(), Vec::new()));
        group.2.push(r.evaluations);
        group.3.push(r.success);
    }
    groups
        .into_iter()
        .map(|((_, n, mu), (algorithm, lambda, evals, successes))| {
            let row = stats::summarize(&evals, &successes)?;
            Ok(CellSummary {
                algorithm,
                n,
                mu,
                lambda,
                runs: evals.len() as u32,
                median: row.median,
                lower_quartile: row.lower_quartile,
                upper_quartile: row.upper_quartile,
                success_ratio: row.success_ratio,
            })
        })
        .collect()
}

/// Median-based power-law fit per algorithm over problem sizes. Algorithms
/// with fewer than two distinct sizes carrying a median yield `None`.
pub fn fit_medians(
    summary: &[CellSummary],
) -> Result<Vec<(AlgorithmVariant, Option<stats::PowerLawFit>)>> {
    type Series = (AlgorithmVariant, Vec<(f64, f64)>);
    let mut groups: BTreeMap<&'static str, Series> = BTreeMap::new();
    for cell in summary {
        let entry = groups
            .entry(cell.algorithm.id())
            .or_insert_with(|| (cell.algorithm, Vec::new()));
        if let Some(median) = cell.median {
            entry.1.push((cell.n as f64, median));
        }
    }
    groups
        .into_values()
        .map(|(algorithm, points)| {
            let distinct: HashSet<u64> = points.iter().map(|&(n, _)| n.to_bits()).collect();
            if distinct.len() < 2 {
                return Ok((algorithm, None));
            }
            Ok((algorithm, Some(stats::fit_power_law(&points)?)))
        })
        .collect()
}

/// Which cell field supplies the x coordinate of a log-log plot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotAxis {
    /// Problem size `n` (runtime sweeps).
    ProblemSize,
    /// Parent population size `mu` (population sweeps at fixed `n`).
    PopulationSize,
}

/// Presentation options for [`emit_svg_loglog`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlotStyle {
    pub x_axis: PlotAxis,
    /// Annotate each plotted point with its cell's success ratio.
    pub ratio_labels: bool,
    pub width: f64,
    pub height: f64,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            x_axis: PlotAxis::ProblemSize,
            ratio_labels: false,
            width: 720.0,
            height: 540.0,
        }
    }
}

const SERIES_COLORS: [&str; 7] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

struct PlotPoint {
    x: f64,
    median: f64,
    lower: f64,
    upper: f64,
    ratio: f64,
}

/// Renders a log-log chart: per algorithm, one median polyline with point
/// markers and one translucent band between the quartiles; cells without a
/// successful run are omitted. With `ratio_labels`, every point carries its
/// cell's success ratio. Output is a standalone SVG document with finite
/// coordinates only.
pub fn emit_svg_loglog(summary: &[CellSummary], style: &PlotStyle) -> Result<String> {
    if summary.is_empty() {
        return Err(EdaError::invalid("nothing to plot: empty summary"));
    }
    let mut series: BTreeMap<&'static str, (AlgorithmVariant, Vec<PlotPoint>)> = BTreeMap::new();
    for cell in summary {
        let (Some(median), Some(lower), Some(upper)) =
            (cell.median, cell.lower_quartile, cell.upper_quartile)
        else {
            continue;
        };
        let x = match style.x_axis {
            PlotAxis::ProblemSize => cell.n as f64,
            PlotAxis::PopulationSize => cell.mu as f64,
        };
        for value in [x, median, lower, upper] {
            if !(value.is_finite() && value > 0.0) {
                return Err(EdaError::invalid(format!(
                    "log-log plot needs positive finite values, found {value}"
                )));
            }
        }
        series
            .entry(cell.algorithm.id())
            .or_insert_with(|| (cell.algorithm, Vec::new()))
            .1
            .push(PlotPoint {
                x,
                median,
                lower,
                upper,
                ratio: cell.success_ratio,
            });
    }
    if series.is_empty() {
        return Err(EdaError::invalid(
            "nothing to plot: no cell has a successful run",
        ));
    }
    let mut x_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y_range = (f64::INFINITY, f64::NEG_INFINITY);
    let widen = |range: &mut (f64, f64), value: f64| {
        range.0 = range.0.min(value);
        range.1 = range.1.max(value);
    };
    for (_, points) in series.values_mut() {
        points.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite coordinates"));
        for p in points.iter() {
            widen(&mut x_range, p.x.log10());
            for y in [p.median, p.lower, p.upper] {
                widen(&mut y_range, y.log10());
            }
        }
    }
    for range in [&mut x_range, &mut y_range] {
        if range.1 - range.0 < 1e-9 {
            range.0 -= 0.5;
            range.1 += 0.5;
        }
    }
    let (left, right, top, bottom) = (70.0, 24.0, 24.0, 52.0);
    let x_px = |v: f64| {
        left + (style.width - left - right) * (v.log10() - x_range.0) / (x_range.1 - x_range.0)
    };
    let y_px = |v: f64| {
        top + (style.height - top - bottom) * (y_range.1 - v.log10()) / (y_range.1 - y_range.0)
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif">"#,
        w = style.width,
        h = style.height
    );
    let _ = writeln!(
        svg,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );

    // Axes and ticks at 1, 2, and 5 times each covered power of ten.
    let floor_y = style.height - bottom;
    let _ = writeln!(
        svg,
        r##"<g class="axes" stroke="#333333" stroke-width="1"><line x1="{left:.6}" y1="{floor_y:.6}" x2="{rx:.6}" y2="{floor_y:.6}"/><line x1="{left:.6}" y1="{top:.6}" x2="{left:.6}" y2="{floor_y:.6}"/></g>"##,
        rx = style.width - right,
    );
    let tick_values = |range: (f64, f64)| -> Vec<(f64, String)> {
        let mut ticks = Vec::new();
        for exp in (range.0.floor() as i32 - 1)..=(range.1.ceil() as i32) {
            for mantissa in [1.0f64, 2.0, 5.0] {
                let value = mantissa * 10f64.powi(exp);
                let log = value.log10();
                if log >= range.0 - 1e-9 && log <= range.1 + 1e-9 {
                    let label = if (0.0..4.0).contains(&log) {
                        format!("{value:.0}")
                    } else {
                        format!("{mantissa:.0}e{exp}")
                    };
                    ticks.push((value, label));
                }
            }
        }
        ticks
    };
    for (value, label) in tick_values(x_range) {
        let x = x_px(value);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.6}" y1="{floor_y:.6}" x2="{x:.6}" y2="{y2:.6}" stroke="#333333"/><text class="tick" x="{x:.6}" y="{ty:.6}" font-size="11" text-anchor="middle">{label}</text>"##,
            y2 = floor_y + 5.0,
            ty = floor_y + 18.0,
        );
    }
    for (value, label) in tick_values(y_range) {
        let y = y_px(value);
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.6}" y1="{y:.6}" x2="{left:.6}" y2="{y:.6}" stroke="#333333"/><text class="tick" x="{tx:.6}" y="{ty:.6}" font-size="11" text-anchor="end">{label}</text>"##,
            x1 = left - 5.0,
            tx = left - 8.0,
            ty = y + 4.0,
        );
    }
    let x_title = match style.x_axis {
        PlotAxis::ProblemSize => "n",
        PlotAxis::PopulationSize => "mu",
    };
    let _ = writeln!(
        svg,
        r##"<text class="axis-label" x="{x:.6}" y="{y:.6}" font-size="13" text-anchor="middle">{x_title}</text>"##,
        x = (left + style.width - right) / 2.0,
        y = style.height - 12.0,
    );
    let _ = writeln!(
        svg,
        r##"<text class="axis-label" x="16" y="{y:.6}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {y:.6})">evaluations</text>"##,
        y = (top + floor_y) / 2.0,
    );

    for (index, (algorithm, points)) in series.values().enumerate() {
        let color = SERIES_COLORS[index % SERIES_COLORS.len()];
        // Quartile band: upper hull forward, lower hull backward.
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd} {:.6} {:.6} ", x_px(p.x), y_px(p.upper));
        }
        for p in points.iter().rev() {
            let _ = write!(d, "L {:.6} {:.6} ", x_px(p.x), y_px(p.lower));
        }
        d.push('Z');
        let _ = writeln!(
            svg,
            r#"<path class="band" fill="{color}" fill-opacity="0.25" stroke="none" d="{d}"/>"#
        );
        let coords: Vec<String> = points
            .iter()
            .map(|p| format!("{:.6},{:.6}", x_px(p.x), y_px(p.median)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="median" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        for p in points {
            let _ = writeln!(
                svg,
                r#"<circle class="point" cx="{:.6}" cy="{:.6}" r="2.5" fill="{color}"/>"#,
                x_px(p.x),
                y_px(p.median)
            );
            if style.ratio_labels {
                let _ = writeln!(
                    svg,
                    r#"<text class="ratio" x="{:.6}" y="{:.6}" font-size="10" text-anchor="middle">{:.2}</text>"#,
                    x_px(p.x),
                    y_px(p.median) - 7.0,
                    p.ratio
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text class="legend" x="{x:.6}" y="{y:.6}" font-size="12" fill="{color}">{name}</text>"#,
            x = left + 12.0,
            y = top + 16.0 + 15.0 * index as f64,
            name = algorithm.display_name(),
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

// ---------------------------------------------------------------------------
// Command-line interface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "edabench",
    version,
    about = "Benchmark laboratory for estimation-of-distribution and evolutionary algorithms on deceptive block landscapes"
)]
struct Cli {
    /// Worker threads for parallel execution (default: all cores).
    #[arg(long, global = true, env = "EDABENCH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm configuration and report every run's outcome.
    Run(RunArgs),
    /// Execute the runtime sweep over problem sizes and write a CSV.
    Sweep(SweepArgs),
    /// Execute the population-size sweep at fixed n and write a CSV.
    MuSweep(MuSweepArgs),
    /// Recommend (mu, lambda, budget) for a problem size.
    Advise(AdviseArgs),
    /// Print the expected (1+1) EA run time and the high-probability
    /// threshold for a problem size.
    ExpectedEa(ExpectedEaArgs),
    /// Check the closed-form binomial tail bounds against exact tails.
    VerifyBounds,
    /// Fit per-algorithm power laws to a sweep CSV and print the exponents.
    Analyze(AnalyzeArgs),
    /// Render a log-log SVG plot from a sweep CSV.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm id: umda, mimic, opo_ea, comma_ea, comma_ga, opl_ea, mpo_ea.
    #[arg(long)]
    algorithm: String,
    /// Fitness id (dlb, dlb_k:<k>, leading_ones, const:<v>, neutral:<id>:<positions>).
    #[arg(long, default_value = "dlb")]
    fitness: String,
    /// Problem size in bits.
    #[arg(long)]
    n: usize,
    /// Parent population size.
    #[arg(long, default_value_t = 1)]
    mu: usize,
    /// Offspring population size.
    #[arg(long, default_value_t = 1)]
    lambda: usize,
    /// Evaluation budget (default 10 n^3).
    #[arg(long)]
    budget: Option<u64>,
    /// Number of independent runs.
    #[arg(long, default_value_t = 1)]
    runs: u32,
    /// Master seed for the per-run seed derivation.
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,
    /// Mutation-rate numerator chi (bits flip with probability chi/n).
    #[arg(long)]
    chi: Option<f64>,
    /// Crossover probability for the comma GA.
    #[arg(long)]
    pc: Option<f64>,
    /// Write per-iteration model diagnostics of a single run to this CSV
    /// (model-based algorithms only).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the run records to this CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated problem sizes (default 50,100,150,200,250,300).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["config", "desk"])]
    n: Option<Vec<usize>>,
    /// Runs per cell (default 100, or 30 with --desk).
    #[arg(long, conflicts_with = "config")]
    runs: Option<u32>,
    /// Desk-scale preset: 30 runs, model-based sizes capped at 150.
    #[arg(long, conflicts_with = "config")]
    desk: bool,
    /// Master seed (default: the plan's seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (default sweep.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON plan file to execute instead of the built-in sweep.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MuSweepArgs {
    /// Problem size (default 300, or 100 with --desk).
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated exponents e with mu = 2^e (default 1..=12).
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<u32>>,
    /// Runs per cell (default 100, or 30 with --desk).
    #[arg(long)]
    runs: Option<u32>,
    /// Desk-scale preset: n = 100 and 30 runs.
    #[arg(long)]
    desk: bool,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (default mu_sweep.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdviseArgs {
    /// Problem size in bits.
    #[arg(long)]
    n: usize,
    /// Parameter source: theorem (proof constants) or experiment
    /// (published setup).
    #[arg(long, default_value = "experiment")]
    mode: String,
    /// Slack parameter delta in (0, 1) (theorem mode).
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Slack parameter eps in (0, 1) (theorem mode).
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Slack parameter zeta in (0, 1) (theorem mode).
    #[arg(long, default_value_t = 0.25)]
    zeta: f64,
}

#[derive(Args)]
struct ExpectedEaArgs {
    /// Problem size in bits (even).
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input run-record CSV.
    #[arg(default_value = "sweep.csv")]
    input: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Input run-record CSV.
    #[arg(default_value = "sweep.csv")]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long, default_value = "plot.svg")]
    out: PathBuf,
    /// Use mu instead of n on the x axis.
    #[arg(long)]
    mu_axis: bool,
    /// Annotate points with success ratios.
    #[arg(long)]
    ratio_labels: bool,
}

fn resolve_threads(threads: Option<usize>) -> usize {
    threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|v| v.get())
            .unwrap_or(1)
    })
}

fn print_summary_table(summary: &[CellSummary]) {
    println!(
        "{:<10} {:>6} {:>7} {:>8} {:>5} {:>8} {:>14} {:>14} {:>14}",
        "algorithm", "n", "mu", "lambda", "runs", "success", "median", "q1", "q3"
    );
    let fmt = |q: Option<f64>| q.map_or_else(|| "-".to_string(), |v| format!("{v:.0}"));
    for cell in summary {
        println!(
            "{:<10} {:>6} {:>7} {:>8} {:>5} {:>8.2} {:>14} {:>14} {:>14}",
            cell.algorithm.id(),
            cell.n,
            cell.mu,
            cell.lambda,
            cell.runs,
            cell.success_ratio,
            fmt(cell.median),
            fmt(cell.lower_quartile),
            fmt(cell.upper_quartile),
        );
    }
}

fn run_command(args: &RunArgs, threads: usize) -> Result<()> {
    let algorithm: AlgorithmVariant = args.algorithm.parse()?;
    let budget = args.budget.unwrap_or_else(|| cubic_budget(args.n));
    let cell = PlanCell {
        algorithm,
        fitness: args.fitness.clone(),
        n: args.n,
        mu: args.mu,
        lambda: args.lambda,
        runs: args.runs,
        budget,
        chi: args.chi,
        pc: args.pc,
    };
    let plan = ExperimentPlan {
        name: "single-cell".to_string(),
        cells: vec![cell.clone()],
        master_seed: args.seed,
        out: None,
    };
    plan.validate()?;
    println!(
        "{} on {}, n={}, mu={}, lambda={}, budget={}",
        algorithm.id(),
        cell.fitness,
        cell.n,
        cell.mu,
        cell.lambda,
        cell.budget
    );
    let records = if let Some(trace_path) = &args.trace {
        if args.runs != 1 {
            return Err(EdaError::invalid(
                "--trace records a single run; use --runs 1",
            ));
        }
        let f: FitnessFunction = cell.fitness.parse()?;
        let seed = stable_seed(args.seed, algorithm, cell.n, cell.mu, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outcome = algorithms::run(&f, &cell.config(), cell.n, cell.budget, true, &mut rng)?;
        let trace = outcome.trace.as_deref().unwrap_or(&[]);
        fs::write(trace_path, render_trace_csv(trace))?;
        println!(
            "wrote trace ({} iterations) to {}",
            trace.len(),
            trace_path.display()
        );
        vec![RunRecord {
            algorithm,
            n: cell.n,
            mu: cell.mu,
            lambda: cell.lambda,
            seed,
            run_index: 0,
            budget: cell.budget,
            evaluations: outcome.evaluations,
            success: outcome.success,
        }]
    } else {
        execute(&plan, threads)?
    };
    if records.len() <= 20 {
        for r in &records {
            println!(
                "run {}: seed={} evaluations={} success={}",
                r.run_index, r.seed, r.evaluations, r.success
            );
        }
    }
    print_summary_table(&summarize_records(&records)?);
    if let Some(out) = &args.out {
        write_csv(&records, out)?;
        println!("wrote {} records to {}", records.len(), out.display());
    }
    Ok(())
}

fn load_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = fs::read_to_string(path)?;
    let plan: ExperimentPlan = serde_json::from_str(&text)
        .map_err(|e| EdaError::invalid(format!("config {}: {e}", path.display())))?;
    plan.validate()?;
    Ok(plan)
}

fn execute_and_report(
    mut plan: ExperimentPlan,
    seed: Option<u64>,
    out: Option<PathBuf>,
    default_out: &str,
    threads: usize,
) -> Result<()> {
    if let Some(seed) = seed {
        plan.master_seed = seed;
    }
    let out = out
        .or_else(|| plan.out.clone())
        .unwrap_or_else(|| PathBuf::from(default_out));
    println!(
        "executing plan `{}`: {} cells, {} runs, master seed {}, {} threads",
        plan.name,
        plan.cells.len(),
        plan.total_runs(),
        plan.master_seed,
        threads
    );
    let records = execute(&plan, threads)?;
    print_summary_table(&summarize_records(&records)?);
    write_csv(&records, &out)?;
    println!("wrote {} records to {}", records.len(), out.display());
    Ok(())
}

fn sweep_command(args: &SweepArgs, threads: usize) -> Result<()> {
    let plan = if let Some(config) = &args.config {
        load_plan(config)?
    } else {
        let runs = args.runs.unwrap_or(if args.desk { 30 } else { 100 });
        if args.desk {
            plan_runtime_sweep_desk(runs)?
        } else {
            let default_sizes = vec![50, 100, 150, 200, 250, 300];
            let sizes = args.n.clone().unwrap_or(default_sizes);
            plan_runtime_sweep(&sizes, runs)?
        }
    };
    execute_and_report(plan, args.seed, args.out.clone(), "sweep.csv", threads)
}

fn mu_sweep_command(args: &MuSweepArgs, threads: usize) -> Result<()> {
    let n = args.n.unwrap_or(if args.desk { 100 } else { 300 });
    let runs = args.runs.unwrap_or(if args.desk { 30 } else { 100 });
    let exponents: Vec<u32> = args.exponents.clone().unwrap_or_else(|| (1..=12).collect());
    let plan = plan_mu_sweep(n, &exponents, runs)?;
    execute_and_report(plan, args.seed, args.out.clone(), "mu_sweep.csv", threads)
}

fn advise_command(args: &AdviseArgs) -> Result<()> {
    let mode = match args.mode.as_str() {
        "theorem" => AdvisorMode::Theorem,
        "experiment" => AdvisorMode::Experiment,
        other => {
            return Err(EdaError::invalid(format!(
                "unknown mode `{other}`; expected `theorem` or `experiment`"
            )))
        }
    };
    let advice = recommend_parameters(args.n, mode, args.delta, args.eps, args.zeta)?;
    println!(
        "mu={} lambda={} budget={}",
        advice.mu, advice.lambda, advice.budget
    );
    Ok(())
}

fn format_value(value: f64) -> String {
    if (value - value.round()).abs() < 1e-9 && value.abs() < 1e15 {
        format!("{value:.0}")
    } else if value.abs() >= 1e6 {
        format!("{value:.6e}")
    } else {
        format!("{value:.4}")
    }
}

fn expected_ea_command(args: &ExpectedEaArgs) -> Result<()> {
    let closed = stats::ea_dlb_expected_time_closed(args.n)?;
    let recurrence = stats::ea_dlb_expected_time_recurrence(args.n)?;
    let (threshold, failure_bound) = stats::whp_threshold(args.n);
    println!(
        "expected evaluations (closed form): {}",
        format_value(closed)
    );
    println!(
        "expected evaluations (recurrence): {}",
        format_value(recurrence)
    );
    println!(
        "high-probability threshold n^3/(16e): {}",
        format_value(threshold)
    );
    println!(
        "probability of finishing below the threshold is at most exp(-n/(64e)) = {:.6}",
        failure_bound
    );
    Ok(())
}

fn verify_bounds_command() -> Result<()> {
    let mut failures = 0usize;
    let mut check = |label: String, ok: bool| {
        if ok {
            println!("ok   {label}");
        } else {
            println!("FAIL {label}");
            failures += 1;
        }
    };

    // Probability mass sums to one.
    let mut worst_mass = 0.0f64;
    for k in [10u64, 100, 1000] {
        for p in [0.1, 0.37, 0.5, 0.9] {
            let spec = BinomialSpec::new(k, p)?;
            let mass: f64 = (0..=k).map(|m| stats::binom_pmf(spec, m).unwrap()).sum();
            worst_mass = worst_mass.max((mass - 1.0).abs());
        }
    }
    check(
        format!("pmf mass balance, worst |sum - 1| = {worst_mass:.2e}"),
        worst_mass <= 1e-11,
    );

    // Closed-form tail bounds dominate the exact tails over the full grid.
    let mut upper_ok = true;
    let mut lower_ok = true;
    for k in (5..=100).step_by(5) {
        for tenths in 1..=9 {
            let p = tenths as f64 / 10.0;
            let spec = BinomialSpec::new(k, p)?;
            let mean = spec.mean();
            for m in 0..=k {
                let m_f = m as f64;
                if m_f > mean {
                    let exact = 1.0 - stats::binom_cdf(spec, m - 1)?;
                    if stats::binom_upper_tail_bound(spec, m)? < exact - 1e-12 {
                        upper_ok = false;
                    }
                }
                if m_f < mean {
                    let exact = stats::binom_cdf(spec, m)?;
                    if stats::binom_lower_tail_bound(spec, m)? < exact - 1e-12 {
                        lower_ok = false;
                    }
                }
            }
        }
    }
    check(
        "upper tail bound dominates exact tail on the (k, p, m) grid".to_string(),
        upper_ok,
    );
    check(
        "lower tail bound dominates exact tail on the (k, p, m) grid".to_string(),
        lower_ok,
    );

    // Boundary cases collapse to the pmf exactly.
    let spec = BinomialSpec::new(40, 0.3)?;
    let at_k = stats::binom_upper_tail_bound(spec, 40)?;
    check(
        "upper tail bound at m = k equals Pr[X = k]".to_string(),
        at_k == stats::binom_pmf(spec, 40)?,
    );
    let at_zero = stats::binom_lower_tail_bound(spec, 0)?;
    check(
        "lower tail bound at m = 0 equals Pr[X = 0]".to_string(),
        at_zero == stats::binom_pmf(spec, 0)?,
    );

    // Chernoff lower-tail bound dominates the exact lower tail.
    let mut chernoff_ok = true;
    for k in [20u64, 50, 100, 400] {
        for p in [0.2, 0.5, 0.8] {
            let spec = BinomialSpec::new(k, p)?;
            let mean = spec.mean();
            for tenths in 1..=9 {
                let delta = tenths as f64 / 10.0;
                let cut = ((1.0 - delta) * mean).floor();
                if cut < 0.0 {
                    continue;
                }
                let exact = stats::binom_cdf(spec, cut as u64)?;
                if stats::chernoff_lower_tail_bound(mean, delta) < exact - 1e-12 {
                    chernoff_ok = false;
                }
            }
        }
    }
    check(
        "Chernoff bound dominates the exact lower tail".to_string(),
        chernoff_ok,
    );

    if failures > 0 {
        return Err(EdaError::Execution(format!(
            "{failures} bound checks failed"
        )));
    }
    Ok(())
}

fn analyze_command(args: &AnalyzeArgs) -> Result<()> {
    let records = read_csv(&args.input)?;
    let summary = summarize_records(&records)?;
    for (algorithm, fit) in fit_medians(&summary)? {
        match fit {
            Some(fit) => println!(
                "{}: T ~ {:.4} * n^{:.4} (log-space residual {:.2e})",
                algorithm.id(),
                fit.scale,
                fit.exponent,
                fit.residual
            ),
            None => println!(
                "{}: skipped (needs at least two distinct sizes with a successful run)",
                algorithm.id()
            ),
        }
    }
    Ok(())
}

fn plot_command(args: &PlotArgs) -> Result<()> {
    let records = read_csv(&args.input)?;
    let summary = summarize_records(&records)?;
    let style = PlotStyle {
        x_axis: if args.mu_axis {
            PlotAxis::PopulationSize
        } else {
            PlotAxis::ProblemSize
        },
        ratio_labels: args.ratio_labels,
        ..PlotStyle::default()
    };
    let svg = emit_svg_loglog(&summary, &style)?;
    fs::write(&args.out, svg)?;
    println!("wrote plot to {}", args.out.display());
    Ok(())
}

/// Entry point of the `edabench` binary. Returns the process exit code: 0 on
/// success (including `--help`/`--version`), 2 on invalid input, 1 on
/// execution or I/O failure.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    let threads = resolve_threads(cli.threads);
    let result = match &cli.command {
        Command::Run(args) => run_command(args, threads),
        Command::Sweep(args) => sweep_command(args, threads),
        Command::MuSweep(args) => mu_sweep_command(args, threads),
        Command::Advise(args) => advise_command(args),
        Command::ExpectedEa(args) => expected_ea_command(args),
        Command::VerifyBounds => verify_bounds_command(),
        Command::Analyze(args) => analyze_command(args),
        Command::Plot(args) => plot_command(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                EdaError::InvalidInput(_) | EdaError::Parse { .. } => 2,
                EdaError::Io(_) | EdaError::Execution(_) => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke_plan() -> ExperimentPlan {
        ExperimentPlan {
            name: "smoke".to_string(),
            cells: vec![
                PlanCell {
                    algorithm: AlgorithmVariant::OnePlusOneEa,
                    fitness: "dlb".to_string(),
                    n: 10,
                    mu: 1,
                    lambda: 1,
                    runs: 4,
                    budget: 100_000,
                    chi: None,
                    pc: None,
                },
                PlanCell {
                    algorithm: AlgorithmVariant::Umda,
                    fitness: "dlb".to_string(),
                    n: 10,
                    mu: 8,
                    lambda: 32,
                    runs: 4,
                    budget: 200_000,
                    chi: None,
                    pc: None,
                },
            ],
            master_seed: 99,
            out: None,
        }
    }

    #[test]
    fn runtime_sweep_plan_uses_published_parameters() {
        let sizes = [50, 100, 150, 200, 250, 300];
        let plan = plan_runtime_sweep(&sizes, 100).unwrap();
        assert_eq!(plan.cells.len(), 30); // 5 algorithms x 6 sizes
        assert_eq!(plan.total_runs(), 3000);
        let umda_100 = plan
            .cells
            .iter()
            .find(|c| c.algorithm == AlgorithmVariant::Umda && c.n == 100)
            .unwrap();
        assert_eq!(umda_100.mu, 1382);
        assert_eq!(umda_100.lambda, 16584);
        assert_eq!(umda_100.budget, 10_000_000);
        let comma_50 = plan
            .cells
            .iter()
            .find(|c| c.algorithm == AlgorithmVariant::CommaEa && c.n == 50)
            .unwrap();
        assert_eq!(comma_50.mu, 4);
        assert_eq!(comma_50.lambda, 36);
        let any_300 = plan.cells.iter().find(|c| c.n == 300).unwrap();
        assert_eq!(any_300.budget, 270_000_000);
        assert!(plan.cells.iter().all(|c| c.fitness == "dlb"));
    }

    #[test]
    fn runtime_sweep_rejects_bad_sizes() {
        assert!(plan_runtime_sweep(&[51], 10).is_err());
        assert!(plan_runtime_sweep(&[0], 10).is_err());
        assert!(plan_runtime_sweep(&[50], 0).is_err());
    }

    #[test]
    fn desk_sweep_caps_model_based_sizes() {
        let plan = plan_runtime_sweep_desk(30).unwrap();
        assert_eq!(plan.cells.len(), 24); // 3 EAs x 6 sizes + 2 EDAs x 3 sizes
        let max_eda_n = plan
            .cells
            .iter()
            .filter(|c| c.algorithm.is_model_based())
            .map(|c| c.n)
            .max()
            .unwrap();
        assert_eq!(max_eda_n, 150);
        let max_ea_n = plan
            .cells
            .iter()
            .filter(|c| !c.algorithm.is_model_based())
            .map(|c| c.n)
            .max()
            .unwrap();
        assert_eq!(max_ea_n, 300);
    }

    #[test]
    fn mu_sweep_plan_spans_powers_of_two() {
        let exponents: Vec<u32> = (1..=12).collect();
        let plan = plan_mu_sweep(300, &exponents, 100).unwrap();
        assert_eq!(plan.cells.len(), 12);
        for (cell, e) in plan.cells.iter().zip(exponents) {
            assert_eq!(cell.algorithm, AlgorithmVariant::Umda);
            assert_eq!(cell.mu, 1 << e);
            assert_eq!(cell.lambda, 12 * cell.mu);
            assert_eq!(cell.budget, 270_000_000);
        }
        let desk = plan_mu_sweep(100, &[1, 2], 30).unwrap();
        assert_eq!(desk.cells[0].budget, 10_000_000);
        assert!(plan_mu_sweep(100, &[0], 30).is_err());
    }

    #[test]
    fn plan_json_round_trips_and_pins_field_names() {
        let plan = plan_runtime_sweep(&[50], 2).unwrap();
        let json = serde_json::to_string_pretty(&plan).unwrap();
        for field in [
            "\"name\"",
            "\"cells\"",
            "\"master_seed\"",
            "\"algorithm\"",
            "\"fitness\"",
            "\"n\"",
            "\"mu\"",
            "\"lambda\"",
            "\"runs\"",
            "\"budget\"",
        ] {
            assert!(json.contains(field), "missing {field} in {json}");
        }
        assert!(json.contains("\"opo_ea\""));
        assert!(!json.contains("chi"), "absent chi must not serialize");
        let back: ExperimentPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plan);

        let literal = r#"{
            "name": "tiny",
            "cells": [{"algorithm": "umda", "fitness": "dlb", "n": 10,
                       "mu": 4, "lambda": 16, "runs": 2, "budget": 100000}],
            "master_seed": 9
        }"#;
        let parsed: ExperimentPlan = serde_json::from_str(literal).unwrap();
        parsed.validate().unwrap();
        assert_eq!(parsed.cells[0].chi, None);
    }

    #[test]
    fn duplicate_cell_identity_is_rejected() {
        let mut plan = smoke_plan();
        let mut dup = plan.cells[0].clone();
        dup.lambda = 1;
        dup.runs = 7;
        plan.cells.push(dup);
        let err = plan.validate().unwrap_err();
        assert!(err.to_string().contains("duplicate cell identity"));
    }

    #[test]
    fn plan_validation_rejects_bad_cells() {
        let mut bad_runs = smoke_plan();
        bad_runs.cells[0].runs = 0;
        assert!(bad_runs.validate().is_err());

        let mut bad_budget = smoke_plan();
        bad_budget.cells[1].budget = 0;
        assert!(bad_budget.validate().is_err());

        let mut bad_fitness = smoke_plan();
        bad_fitness.cells[0].fitness = "warp".to_string();
        assert!(bad_fitness.validate().is_err());

        let mut bad_layout = smoke_plan();
        bad_layout.cells[0].n = 11;
        assert!(bad_layout.validate().is_err());

        let mut bad_shape = smoke_plan();
        bad_shape.cells[1].mu = 64; // mu > lambda for an EDA
        assert!(bad_shape.validate().is_err());

        assert!(ExperimentPlan {
            name: "empty".to_string(),
            cells: vec![],
            master_seed: 0,
            out: None
        }
        .validate()
        .is_err());
    }

    #[test]
    fn stable_seed_matches_reference_hash() {
        fn reference_fnv(bytes: &[u8]) -> u64 {
            let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
            for &b in bytes {
                hash ^= u64::from(b);
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
            hash
        }
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&7u64.to_le_bytes());
        bytes.extend_from_slice(b"umda");
        bytes.extend_from_slice(&50u64.to_le_bytes());
        bytes.extend_from_slice(&587u64.to_le_bytes());
        bytes.extend_from_slice(&3u32.to_le_bytes());
        assert_eq!(
            stable_seed(7, AlgorithmVariant::Umda, 50, 587, 3),
            reference_fnv(&bytes)
        );

        let base = stable_seed(7, AlgorithmVariant::Umda, 50, 587, 3);
        assert_eq!(base, stable_seed(7, AlgorithmVariant::Umda, 50, 587, 3));
        assert_ne!(base, stable_seed(8, AlgorithmVariant::Umda, 50, 587, 3));
        assert_ne!(base, stable_seed(7, AlgorithmVariant::Mimic, 50, 587, 3));
        assert_ne!(base, stable_seed(7, AlgorithmVariant::Umda, 52, 587, 3));
        assert_ne!(base, stable_seed(7, AlgorithmVariant::Umda, 50, 588, 3));
        assert_ne!(base, stable_seed(7, AlgorithmVariant::Umda, 50, 587, 4));
    }

    #[test]
    fn execution_is_deterministic_across_parallelism() {
        let plan = smoke_plan();
        let sequential = execute(&plan, 1).unwrap();
        let parallel = execute(&plan, 4).unwrap();
        assert_eq!(sequential, parallel);
        assert_eq!(render_csv(&sequential), render_csv(&parallel));
        assert!(sequential.iter().all(|r| r.evaluations >= 1));
        assert!(sequential.iter().all(|r| r.evaluations <= r.budget));
        let keys: Vec<_> = sequential.iter().map(record_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted, "records must come out sorted");
    }

    #[test]
    fn cell_order_does_not_change_the_records() {
        let plan = smoke_plan();
        let mut reversed = plan.clone();
        reversed.cells.reverse();
        assert_eq!(execute(&plan, 2).unwrap(), execute(&reversed, 2).unwrap());
    }

    #[test]
    fn panics_become_failed_records() {
        let template = RunRecord {
            algorithm: AlgorithmVariant::Umda,
            n: 10,
            mu: 4,
            lambda: 16,
            seed: 1,
            run_index: 0,
            budget: 100,
            evaluations: 0,
            success: false,
        };
        let record = finished_record(template.clone(), || panic!("boom"));
        assert_eq!(record, template);
        let record = finished_record(template.clone(), || Err(EdaError::invalid("nope")));
        assert_eq!(record, template);
    }

    #[test]
    fn csv_round_trip_preserves_records() {
        let records = execute(&smoke_plan(), 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.csv");
        write_csv(&records, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), records);
    }

    #[test]
    fn csv_parser_reports_line_numbers() {
        let err = parse_csv("algorithm,n\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("line 1"), "{text}");
        assert!(text.contains(CSV_HEADER), "{text}");

        let good = format!("{CSV_HEADER}\numda,10,4,16,1,0,100,50,true\n");
        assert_eq!(parse_csv(&good).unwrap().len(), 1);

        let bad_field =
            format!("{CSV_HEADER}\numda,10,4,16,1,0,100,50,true\numda,ten,4,16,1,1,100,50,true\n");
        let text = parse_csv(&bad_field).unwrap_err().to_string();
        assert!(text.contains("line 3"), "{text}");
        assert!(text.contains("bad n"), "{text}");

        let over_budget = format!("{CSV_HEADER}\numda,10,4,16,1,0,100,101,false\n");
        let text = parse_csv(&over_budget).unwrap_err().to_string();
        assert!(text.contains("line 2"), "{text}");
        assert!(text.contains("exceed budget"), "{text}");

        let bad_success = format!("{CSV_HEADER}\numda,10,4,16,1,0,100,50,TRUE\n");
        let text = parse_csv(&bad_success).unwrap_err().to_string();
        assert!(text.contains("`true` or `false`"), "{text}");

        let short_row = format!("{CSV_HEADER}\numda,10,4\n");
        let text = parse_csv(&short_row).unwrap_err().to_string();
        assert!(text.contains("expected 9 fields"), "{text}");
    }

    fn record(
        algorithm: AlgorithmVariant,
        n: usize,
        mu: usize,
        run_index: u32,
        evaluations: u64,
        success: bool,
    ) -> RunRecord {
        RunRecord {
            algorithm,
            n,
            mu,
            lambda: 4 * mu,
            seed: 0,
            run_index,
            budget: 1_000_000,
            evaluations,
            success,
        }
    }

    #[test]
    fn summaries_group_cells_and_use_successful_runs_only() {
        let mut records = Vec::new();
        for (i, evals) in [100u64, 101, 102, 103, 104].iter().enumerate() {
            records.push(record(
                AlgorithmVariant::Umda,
                10,
                4,
                i as u32,
                *evals,
                true,
            ));
        }
        // Mixed cell: only the successful half feeds the quantiles.
        for (i, (evals, success)) in [
            (10u64, true),
            (30, true),
            (1_000_000, false),
            (1_000_000, false),
        ]
        .iter()
        .enumerate()
        {
            records.push(record(
                AlgorithmVariant::Mimic,
                10,
                4,
                i as u32,
                *evals,
                *success,
            ));
        }
        // Hopeless cell: no quantiles at all.
        for i in 0..3 {
            records.push(record(
                AlgorithmVariant::OnePlusOneEa,
                10,
                1,
                i,
                1_000_000,
                false,
            ));
        }
        let summary = summarize_records(&records).unwrap();
        assert_eq!(summary.len(), 3);

        let umda = summary
            .iter()
            .find(|c| c.algorithm == AlgorithmVariant::Umda)
            .unwrap();
        assert_eq!(umda.median, Some(102.0));
        assert_eq!(umda.lower_quartile, Some(101.0));
        assert_eq!(umda.upper_quartile, Some(103.0));
        assert_eq!(umda.success_ratio, 1.0);
        assert_eq!(umda.runs, 5);

        let mimic = summary
            .iter()
            .find(|c| c.algorithm == AlgorithmVariant::Mimic)
            .unwrap();
        assert_eq!(mimic.median, Some(20.0));
        assert_eq!(mimic.success_ratio, 0.5);

        let opo = summary
            .iter()
            .find(|c| c.algorithm == AlgorithmVariant::OnePlusOneEa)
            .unwrap();
        assert_eq!(opo.median, None);
        assert_eq!(opo.lower_quartile, None);
        assert_eq!(opo.upper_quartile, None);
        assert_eq!(opo.success_ratio, 0.0);

        // Order-insensitive aggregation.
        records.reverse();
        assert_eq!(summarize_records(&records).unwrap(), summary);

        assert!(summarize_records(&[]).is_err());
    }

    fn cell_summary(
        algorithm: AlgorithmVariant,
        n: usize,
        median: Option<f64>,
        ratio: f64,
    ) -> CellSummary {
        CellSummary {
            algorithm,
            n,
            mu: 4,
            lambda: 16,
            runs: 30,
            median,
            lower_quartile: median.map(|m| m * 0.9),
            upper_quartile: median.map(|m| m * 1.1),
            success_ratio: ratio,
        }
    }

    #[test]
    fn svg_has_one_polyline_and_band_per_algorithm() {
        let summary = vec![
            cell_summary(AlgorithmVariant::Umda, 50, Some(1.0e5), 1.0),
            cell_summary(AlgorithmVariant::Umda, 100, Some(6.0e5), 1.0),
            cell_summary(AlgorithmVariant::OnePlusOneEa, 50, Some(2.0e5), 1.0),
            cell_summary(AlgorithmVariant::OnePlusOneEa, 100, Some(1.6e6), 1.0),
        ];
        let svg = emit_svg_loglog(&summary, &PlotStyle::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("class=\"band\"").count(), 2);
        assert_eq!(svg.matches("class=\"legend\"").count(), 2);
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
        assert_eq!(svg.matches("class=\"ratio\"").count(), 0);
    }

    /// Extracts the coordinate pairs of the first polyline in the document.
    fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("points=\"").unwrap() + "points=\"".len();
        let end = svg[start..].find('"').unwrap() + start;
        svg[start..end]
            .split_whitespace()
            .map(|pair| {
                let (x, y) = pair.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn exact_cubic_medians_render_as_a_straight_line() {
        let summary: Vec<CellSummary> = [50usize, 100, 150, 200, 250, 300]
            .iter()
            .map(|&n| {
                cell_summary(
                    AlgorithmVariant::OnePlusOneEa,
                    n,
                    Some((n as f64).powi(3)),
                    1.0,
                )
            })
            .collect();
        let svg = emit_svg_loglog(&summary, &PlotStyle::default()).unwrap();
        let points = polyline_points(&svg);
        assert_eq!(points.len(), 6);
        for window in points.windows(3) {
            let [(ax, ay), (bx, by), (cx, cy)] = window else {
                unreachable!()
            };
            let (v1x, v1y) = (bx - ax, by - ay);
            let (v2x, v2y) = (cx - bx, cy - by);
            let cross = (v1x * v2y - v1y * v2x).abs();
            let sine = cross / (v1x.hypot(v1y) * v2x.hypot(v2y));
            assert!(sine <= 1e-6, "polyline bends by sin = {sine:.3e}");
        }
    }

    #[test]
    fn ratio_labels_annotate_every_plotted_point() {
        let summary = vec![
            cell_summary(AlgorithmVariant::Umda, 100, Some(1.0e5), 1.0),
            {
                let mut c = cell_summary(AlgorithmVariant::Umda, 100, Some(2.0e5), 29.0 / 30.0);
                c.mu = 8;
                c
            },
            {
                let mut c = cell_summary(AlgorithmVariant::Umda, 100, None, 0.0);
                c.mu = 64;
                c
            },
        ];
        let style = PlotStyle {
            x_axis: PlotAxis::PopulationSize,
            ratio_labels: true,
            ..PlotStyle::default()
        };
        let svg = emit_svg_loglog(&summary, &style).unwrap();
        // The zero-success cell is omitted entirely; the others carry labels.
        assert_eq!(svg.matches("class=\"ratio\"").count(), 2);
        assert!(svg.contains(">0.97<"));
        assert!(svg.contains(">1.00<"));
        assert_eq!(polyline_points(&svg).len(), 2);
    }

    #[test]
    fn empty_or_all_failed_summaries_cannot_be_plotted() {
        assert!(emit_svg_loglog(&[], &PlotStyle::default()).is_err());
        let summary = vec![cell_summary(AlgorithmVariant::Umda, 100, None, 0.0)];
        assert!(emit_svg_loglog(&summary, &PlotStyle::default()).is_err());
    }

    #[test]
    fn fit_medians_recovers_a_cubic_and_skips_single_sizes() {
        let summary: Vec<CellSummary> = [50usize, 100, 200]
            .iter()
            .map(|&n| {
                cell_summary(
                    AlgorithmVariant::CommaEa,
                    n,
                    Some(2.0 * (n as f64).powi(3)),
                    1.0,
                )
            })
            .chain(std::iter::once(cell_summary(
                AlgorithmVariant::Umda,
                100,
                Some(5.0e5),
                1.0,
            )))
            .collect();
        let fits = fit_medians(&summary).unwrap();
        let comma = fits
            .iter()
            .find(|(a, _)| *a == AlgorithmVariant::CommaEa)
            .unwrap();
        let fit = comma.1.unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-9);
        assert!((fit.scale - 2.0).abs() < 1e-9);
        let umda = fits
            .iter()
            .find(|(a, _)| *a == AlgorithmVariant::Umda)
            .unwrap();
        assert!(umda.1.is_none());
    }

    #[test]
    fn trace_csv_renders_absent_blocks_as_empty_fields() {
        let trace = vec![
            IterationSnapshot {
                iteration: 1,
                frequencies: vec![0.5, 0.5],
                critical_block: Some(1),
                selection_relevant: Some(1),
                min_frequency_right_of_critical: 0.5,
            },
            IterationSnapshot {
                iteration: 2,
                frequencies: vec![0.9, 0.9],
                critical_block: None,
                selection_relevant: None,
                min_frequency_right_of_critical: 1.0,
            },
        ];
        let csv = render_trace_csv(&trace);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        assert_eq!(lines.next(), Some("1,1,1,0.500000"));
        assert_eq!(lines.next(), Some("2,,,1.000000"));
    }

    #[test]
    fn cli_maps_outcomes_to_exit_codes() {
        assert_eq!(cli(["edabench", "--help"]), 0);
        assert_eq!(cli(["edabench", "--version"]), 0);
        assert_eq!(cli(["edabench", "no-such-subcommand"]), 2);
        assert_eq!(
            cli(["edabench", "advise", "--n", "100", "--mode", "experiment"]),
            0
        );
        assert_eq!(cli(["edabench", "advise", "--n", "0"]), 2);
        assert_eq!(
            cli(["edabench", "advise", "--n", "100", "--mode", "sideways"]),
            2
        );
        assert_eq!(cli(["edabench", "expected-ea", "--n", "3"]), 2);
        assert_eq!(cli(["edabench", "expected-ea", "--n", "20"]), 0);
        assert_eq!(cli(["edabench", "sweep", "--desk", "--n", "50"]), 2); // conflict
        assert_eq!(
            cli(["edabench", "run", "--algorithm", "warp_drive", "--n", "10"]),
            2
        );
        assert_eq!(
            cli([
                "edabench",
                "run",
                "--algorithm",
                "opo_ea",
                "--n",
                "10",
                "--runs",
                "2",
                "--budget",
                "100000",
                "--threads",
                "1",
            ]),
            0
        );
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("missing.csv");
        assert_eq!(cli(["edabench", "analyze", missing.to_str().unwrap()]), 1);
    }
}
