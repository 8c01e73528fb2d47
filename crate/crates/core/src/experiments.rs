//! Monte Carlo comparison of greedy routes against exact optima.
//!
//! Each trial `t` places `n` collectibles uniformly on the plane using stream
//! `(master_seed, t)`. The noisy solver, when enabled, draws from stream
//! `(master_seed, trials + t)`, so runs that differ only in σ see the same
//! instances. Trials run in parallel; results are ordered by trial index
//! and do not depend on the worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{path_length_unchecked, Instance, Point};
use crate::noise::{derive_seed, derive_stream, RandomStream};
use crate::solvers::{greedy, greedy_with_error, ExactSolver};
use crate::stats::{summarize, TrialStats};

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_PLANE: f64 = 1000.0;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_N_GRID: std::ops::RangeInclusive<usize> = 4..=13;
pub const DEFAULT_SIGMA_GRID: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.4];
pub const DEFAULT_SIGMA_SWEEP_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_collectibles: usize,
    pub trials: usize,
    pub plane_width: f64,
    pub plane_height: f64,
    pub start: Point,
    /// `None` runs plain greedy.
    pub sigma: Option<f64>,
    pub master_seed: u64,
    pub exact_solver: ExactSolver,
    /// Worker threads; `0` uses rayon's default. Never affects results.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_collectibles: 11,
            trials: DEFAULT_TRIALS,
            plane_width: DEFAULT_PLANE,
            plane_height: DEFAULT_PLANE,
            start: Point::new(DEFAULT_PLANE / 2.0, DEFAULT_PLANE / 2.0),
            sigma: None,
            master_seed: DEFAULT_SEED,
            exact_solver: ExactSolver::HeldKarp,
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_collectibles == 0 {
            return fail("n must be at least 1 (excess ratio is undefined for an empty map)".into());
        }
        let limit = self.exact_solver.limit();
        if self.n_collectibles > limit {
            return fail(format!(
                "n = {} exceeds the {} limit of {limit}",
                self.n_collectibles,
                self.exact_solver.name()
            ));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        let w = self.plane_width;
        let h = self.plane_height;
        if !(w.is_finite() && h.is_finite() && w > 0.0 && h > 0.0) {
            return fail(format!("plane must have positive finite size, got {w} x {h}"));
        }
        let s = self.start;
        if !(0.0..=w).contains(&s.x) || !(0.0..=h).contains(&s.y) {
            return fail(format!("start ({}, {}) lies outside the {w} x {h} plane", s.x, s.y));
        }
        if let Some(sigma) = self.sigma {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return fail(format!("sigma must be finite and >= 0, got {sigma}"));
            }
        }
        Ok(())
    }

    /// One-line `key=value` echo for results metadata.
    pub fn describe(&self) -> String {
        format!(
            "n={} trials={} plane={}x{} start=({},{}) sigma={} exact={}",
            self.n_collectibles,
            self.trials,
            self.plane_width,
            self.plane_height,
            self.start.x,
            self.start.y,
            self.sigma.map_or_else(|| "none".to_string(), |s| s.to_string()),
            self.exact_solver.name(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub greedy_length: f64,
    pub optimal_length: f64,
    /// Percent by which the greedy route is longer than the optimum.
    pub excess_ratio: f64,
}

pub fn excess_ratio(heuristic: f64, optimal: f64) -> f64 {
    if optimal > 0.0 {
        100.0 * (heuristic - optimal) / optimal
    } else {
        0.0
    }
}

/// Uniform placement; x is drawn before y, points in index order.
pub fn generate_instance(config: &ExperimentConfig, rng: &mut RandomStream) -> Instance {
    let points = (0..config.n_collectibles)
        .map(|_| {
            let x = rng.uniform01() * config.plane_width;
            let y = rng.uniform01() * config.plane_height;
            Point::new(x, y)
        })
        .collect();
    Instance::new(config.start, points)
}

pub fn run_trial(config: &ExperimentConfig, t: usize) -> Result<TrialRecord> {
    let instance = generate_instance(config, &mut derive_stream(config.master_seed, t as u64));
    let heuristic = match config.sigma {
        None => greedy(&instance),
        Some(sigma) => {
            let mut noise = derive_stream(config.master_seed, (config.trials + t) as u64);
            greedy_with_error(&instance, sigma, &mut noise)?
        }
    };
    let optimal = config.exact_solver.solve(&instance)?;
    let greedy_length = path_length_unchecked(&instance, heuristic.route.order());
    let optimal_length = path_length_unchecked(&instance, optimal.route.order());
    Ok(TrialRecord {
        trial_index: t,
        greedy_length,
        optimal_length,
        excess_ratio: excess_ratio(greedy_length, optimal_length),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub stats: TrialStats,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let run = || (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect::<Result<Vec<_>>>();
    let records = if config.threads == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run)?
    };
    let ratios: Vec<f64> = records.iter().map(|r| r.excess_ratio).collect();
    let stats = summarize(&ratios)?;
    Ok(ExperimentResult { records, stats })
}

/// One row of a sweep table: the swept value and the stats at that value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub key: f64,
    pub stats: TrialStats,
}

/// Runs one experiment per N. Each N gets its own seed derived from the
/// template's master seed and N, so a repeated N reproduces its row.
pub fn sweep_n(n_values: &[usize], template: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    n_values
        .iter()
        .map(|&n| {
            let config = ExperimentConfig {
                n_collectibles: n,
                master_seed: derive_seed(template.master_seed, n as u64),
                ..template.clone()
            };
            Ok(SweepRow { key: n as f64, stats: run_experiment(&config)?.stats })
        })
        .collect()
}

/// Runs one noisy experiment per σ, all on the template's master seed so the
/// instances are paired across σ.
pub fn sweep_sigma(sigma_values: &[f64], template: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    sigma_values
        .iter()
        .map(|&sigma| {
            let config = ExperimentConfig { sigma: Some(sigma), ..template.clone() };
            Ok(SweepRow { key: sigma, stats: run_experiment(&config)?.stats })
        })
        .collect()
}
