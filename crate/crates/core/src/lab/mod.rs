//! Seeded Monte Carlo experiments.
//!
//! An experiment is a grid of cells `(n, m, d)` times a number of trials.
//! Trial `t` of cell `c` draws from the stream seeded by
//! `child_seed(child_seed(master, c), t)`, so records depend only on the
//! master seed and never on the worker count or scheduling; results are
//! collected in (cell, trial) order.

pub mod config;
mod experiments;
pub mod record;
mod stats;

use rayon::prelude::*;

pub use config::{DeltaRule, ExperimentConfig, ExperimentKind, Family, HostSpec};
pub use record::{emit_results, summary_path, Check, ExperimentOutcome, SummaryRow, TrialRecord, Value};
pub use stats::{mean, percentile, std_dev};

use crate::error::{Error, Result};
use crate::rng::child_seed;

/// One grid point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl Cell {
    pub fn seed(&self, master: u64) -> u64 {
        child_seed(master, self.index as u64)
    }

    pub fn label(&self) -> String {
        format!("n={},m={},d={}", self.n, self.m, self.d)
    }
}

/// Validates `cfg` and runs the experiment it names.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    pool.install(|| experiments::run(cfg))
}

/// Runs `trial` for every (cell, trial index) pair in parallel and returns
/// the records in order.
pub(crate) fn run_trials<F>(cfg: &ExperimentConfig, cells: &[Cell], trial: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(&Cell, usize, u64) -> Result<TrialRecord> + Sync,
{
    let tasks: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|c| (0..cfg.trials).map(move |t| (*c, t)))
        .collect();
    tasks
        .par_iter()
        .map(|(c, t)| trial(c, *t, child_seed(c.seed(cfg.seed), *t as u64)))
        .collect()
}

pub fn run_typical_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::Typical)
}

pub fn run_growing_d_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::GrowingDegree)
}

pub fn run_fixed_function_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::FixedFunction)
}

pub fn run_fixed_h_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::FixedHost)
}

pub fn run_concentration_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::Concentration)
}

pub fn run_errorbound_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::ErrorBound)
}

pub fn run_diameter_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_kind(cfg, ExperimentKind::Diameter)
}

fn run_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<ExperimentOutcome> {
    if cfg.kind == kind {
        run_experiment(cfg)
    } else {
        run_experiment(&ExperimentConfig { kind, ..cfg.clone() })
    }
}
