//! Benchmark laboratory for univariate estimation-of-distribution algorithms
//! and simple evolutionary algorithms on deceptive block landscapes.
//!
//! The crate centers on the DeceptiveLeadingBlocks function — a deceptive,
//! epistatic relative of LeadingOnes — and provides:
//!
//! * [`fitness`]: the block fitness family, plus a neutral-bit wrapper;
//! * [`models`]: frequency vectors and bivariate chain models with their
//!   sampling, selection, and update rules;
//! * [`algorithms`]: the UMDA and MIMIC optimizers next to (1+1), (μ,λ),
//!   (1+λ) and (μ+1) evolutionary algorithms under one evaluation meter;
//! * [`diagnostics`]: trackers for the dynamics that decide success — the
//!   critical block, the selection-relevant block, and neutral-bit drift;
//! * [`stats`]: binomial tail bounds, expected-runtime formulas for the
//!   (1+1) EA, power-law fitting, and run summaries;
//! * [`harness`]: reproducible experiment plans, parallel execution with
//!   per-run seeds, CSV artifacts, SVG log-log plots, and the CLI.
//!
//! Every run is driven by a caller-supplied seed and is bit-for-bit
//! reproducible at any parallelism level.

pub mod algorithms;
pub mod diagnostics;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod models;
pub mod stats;

pub use error::{EdaError, Result};
