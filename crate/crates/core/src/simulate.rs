//! Monte Carlo harness for the simple regression model
//! `yᵢ = β₀ + β₁xᵢ + εᵢ`, `εᵢ ~ iid N(0, σ²)`.
//!
//! # Random streams
//!
//! Every trial draws from its own ChaCha8 stream: the key is derived from
//! the master seed with `SeedableRng::seed_from_u64`, and the 64-bit stream
//! id is the trial index. Distinct stream ids give non-overlapping
//! keystreams, so trial `i`'s data depends only on `(seed, i)` and adding
//! trials never perturbs existing ones. The generator and the derivation
//! are part of the reproducibility contract and will not change.
//!
//! Uniforms take the top 53 bits of a `u64`. Normal variates use the
//! Box–Muller transform, consuming exactly two uniforms per pair of
//! variates (no rejection loop), in the order `cos`, `sin`.
//!
//! Within a trial, regressor values (when redrawn) are drawn before the
//! noise.
//!
//! # Aggregation
//!
//! Trials may run on any number of rayon workers. Results are collected by
//! trial index and reduced sequentially, so the report does not depend on
//! the degree of parallelism.

use std::f64::consts::TAU;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, RealVector};
use crate::regress::{
    fit_normal_equations, fit_projection, FitResult, SimpleRegressionData, DEGENERATE_TOLERANCE,
};

/// Per-trial agreement bound between solvers, relative to `1 + ‖y‖`.
pub const DISCREPANCY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum XSpec {
    /// `n_obs` equally spaced points from `a` to `b` inclusive, same for
    /// every trial.
    FixedGrid { a: f64, b: f64 },
    /// Fresh uniform draws on `[a, b)` in every trial.
    Uniform { a: f64, b: f64 },
}

impl Default for XSpec {
    fn default() -> Self {
        XSpec::FixedGrid { a: 0.0, b: 1.0 }
    }
}

impl XSpec {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            XSpec::FixedGrid { a, b } | XSpec::Uniform { a, b } => (a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    Projection,
    NormalEquations,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub beta0: f64,
    pub beta1: f64,
    /// Error standard deviation.
    pub sigma: f64,
    pub n_obs: usize,
    pub n_trials: usize,
    #[serde(default)]
    pub x_spec: XSpec,
    pub seed: u64,
    #[serde(default)]
    pub solver: Solver,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: impl Into<String>) -> Result<()> {
            Err(Error::InvalidConfig {
                field,
                reason: reason.into(),
            })
        }
        if !self.beta0.is_finite() {
            return bad("beta0", "must be finite");
        }
        if !self.beta1.is_finite() {
            return bad("beta1", "must be finite");
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(
                "sigma",
                format!("must be finite and > 0, got {}", self.sigma),
            );
        }
        if self.n_obs < 3 {
            return bad("n_obs", format!("must be at least 3, got {}", self.n_obs));
        }
        if self.n_trials < 1 {
            return bad("n_trials", "must be at least 1");
        }
        let (a, b) = self.x_spec.bounds();
        if !(a.is_finite() && b.is_finite() && a < b) {
            return bad("x_spec", format!("need finite a < b, got [{a}, {b}]"));
        }
        Ok(())
    }
}

/// Mean and median of per-trial wall time, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingSummary {
    pub mean: f64,
    pub median: f64,
}

impl TimingSummary {
    fn from_samples(samples: &[f64]) -> Self {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len().is_multiple_of(2) {
            0.5 * (sorted[mid - 1] + sorted[mid])
        } else {
            sorted[mid]
        };
        TimingSummary { mean, median }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WallTimes {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<TimingSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_equations: Option<TimingSummary>,
}

/// Aggregate statistics over all trials. Field order is the JSON key order.
///
/// When both solvers run, the coefficient statistics come from the
/// projection fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub mean_beta0: f64,
    pub mean_beta1: f64,
    pub sd_beta0: f64,
    pub sd_beta1: f64,
    /// Mean of rss/(n − 2).
    pub mean_sigma2_hat: f64,
    /// Largest elementwise ŷ disagreement between solvers over all trials.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_solver_discrepancy: Option<f64>,
    pub wall_time_per_trial: WallTimes,
    pub n_trials_completed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialTiming {
    pub trial: usize,
    pub projection: f64,
    pub normal_equations: f64,
}

/// Timing comparison of the two solvers on identical trial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub n_obs: usize,
    pub n_trials: usize,
    pub n_cols: usize,
    pub wall_time_per_trial: WallTimes,
    pub max_solver_discrepancy: f64,
    pub discrepancy_tolerance: f64,
    pub trials: Vec<TrialTiming>,
}

/// Standard-normal variates from one trial's stream.
struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        NormalStream { rng, spare: None }
    }

    /// Uniform on [0, 1).
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 − u lies in (0, 1], keeping ln finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }
}

/// Equally spaced grid of `n` points from `a` to `b`.
pub fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + step * i as f64 })
        .collect()
}

/// Data for trial `trial_index`, a pure function of `(config, trial_index)`.
pub fn generate_trial(config: &SimConfig, trial_index: usize) -> Result<SimpleRegressionData> {
    config.validate()?;
    if trial_index >= config.n_trials {
        return Err(Error::Index {
            index: trial_index,
            len: config.n_trials,
        });
    }
    let n = config.n_obs;
    let mut stream = NormalStream::new(config.seed, trial_index as u64);
    let x = match config.x_spec {
        XSpec::FixedGrid { a, b } => grid(a, b, n),
        XSpec::Uniform { a, b } => (0..n).map(|_| a + (b - a) * stream.uniform()).collect(),
    };
    let y = x
        .iter()
        .map(|xi| config.beta0 + config.beta1 * xi + config.sigma * stream.standard_normal())
        .collect();
    SimpleRegressionData::new(RealVector::new(x)?, RealVector::new(y)?)
}

struct TrialOutcome {
    beta0: f64,
    beta1: f64,
    sigma2_hat: f64,
    projection_time: Option<f64>,
    normal_time: Option<f64>,
    discrepancy: Option<f64>,
    y_norm: f64,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn coefficients_of(fit: &FitResult, data: &SimpleRegressionData) -> Result<(f64, f64)> {
    match &fit.coefficients {
        Some(c) => Ok((c[0], c[1])),
        None => {
            let x = data.x();
            let mean = x.mean();
            let sxx = x.iter().map(|v| (v - mean) * (v - mean)).sum();
            let x_norm = norm(x);
            Err(Error::DegenerateRegressor {
                sxx,
                threshold: DEGENERATE_TOLERANCE * (x_norm * x_norm).max(1.0),
            })
        }
    }
}

fn max_abs_diff(a: &RealVector, b: &RealVector) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn run_trial(config: &SimConfig, trial: usize) -> Result<TrialOutcome> {
    let data = generate_trial(config, trial)?;
    let design = data.design();
    let y = data.y();

    let projection = match config.solver {
        Solver::Projection | Solver::Both => {
            let (fit, t) = timed(|| fit_projection(&design, y));
            Some((fit?, t))
        }
        Solver::NormalEquations => None,
    };
    let normal = match config.solver {
        Solver::NormalEquations | Solver::Both => {
            let (fit, t) = timed(|| fit_normal_equations(&design, y));
            Some((fit?, t))
        }
        Solver::Projection => None,
    };

    let primary = projection
        .as_ref()
        .or(normal.as_ref())
        .map(|(fit, _)| fit)
        .expect("at least one solver runs");
    let (beta0, beta1) = coefficients_of(primary, &data)?;
    let discrepancy = match (&projection, &normal) {
        (Some((p, _)), Some((q, _))) => Some(max_abs_diff(&p.fitted, &q.fitted)),
        _ => None,
    };

    Ok(TrialOutcome {
        beta0,
        beta1,
        sigma2_hat: primary.rss / (data.len() - 2) as f64,
        projection_time: projection.as_ref().map(|(_, t)| *t),
        normal_time: normal.as_ref().map(|(_, t)| *t),
        discrepancy,
        y_norm: norm(y),
    })
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

fn collect_in_order(results: Vec<Result<TrialOutcome>>) -> Result<Vec<TrialOutcome>> {
    results
        .into_iter()
        .enumerate()
        .map(|(trial, r)| {
            r.map_err(|e| Error::TrialFailed {
                trial,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Runs `config.n_trials` independent trials and aggregates the sampling
/// distribution of the estimates.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let results: Vec<Result<TrialOutcome>> = (0..config.n_trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect();
    let outcomes = collect_in_order(results)?;

    let (mean_beta0, sd_beta0) = mean_sd(outcomes.iter().map(|o| o.beta0));
    let (mean_beta1, sd_beta1) = mean_sd(outcomes.iter().map(|o| o.beta1));
    let (mean_sigma2_hat, _) = mean_sd(outcomes.iter().map(|o| o.sigma2_hat));
    let max_solver_discrepancy = (config.solver == Solver::Both).then(|| {
        outcomes
            .iter()
            .filter_map(|o| o.discrepancy)
            .fold(0.0, f64::max)
    });

    Ok(SimReport {
        mean_beta0,
        mean_beta1,
        sd_beta0,
        sd_beta1,
        mean_sigma2_hat,
        max_solver_discrepancy,
        wall_time_per_trial: wall_times(&outcomes),
        n_trials_completed: outcomes.len(),
    })
}

fn wall_times(outcomes: &[TrialOutcome]) -> WallTimes {
    let summarize =
        |samples: Vec<f64>| (!samples.is_empty()).then(|| TimingSummary::from_samples(&samples));
    WallTimes {
        projection: summarize(outcomes.iter().filter_map(|o| o.projection_time).collect()),
        normal_equations: summarize(outcomes.iter().filter_map(|o| o.normal_time).collect()),
    }
}

/// Times both solvers on every trial, sequentially, and enforces the
/// per-trial agreement bound `DISCREPANCY_TOLERANCE · (1 + ‖y‖)`.
pub fn benchmark(config: &SimConfig) -> Result<BenchmarkReport> {
    config.validate()?;
    if config.solver != Solver::Both {
        return Err(Error::InvalidConfig {
            field: "solver",
            reason: "benchmark needs solver = \"both\"".into(),
        });
    }
    let mut outcomes = Vec::with_capacity(config.n_trials);
    for trial in 0..config.n_trials {
        let outcome = run_trial(config, trial).map_err(|e| Error::TrialFailed {
            trial,
            source: Box::new(e),
        })?;
        let discrepancy = outcome.discrepancy.unwrap_or(0.0);
        let tolerance = DISCREPANCY_TOLERANCE * (1.0 + outcome.y_norm);
        if discrepancy > tolerance {
            return Err(Error::Discrepancy {
                trial,
                discrepancy,
                tolerance,
            });
        }
        outcomes.push(outcome);
    }

    let trials = outcomes
        .iter()
        .enumerate()
        .map(|(trial, o)| TrialTiming {
            trial,
            projection: o.projection_time.unwrap_or_default(),
            normal_equations: o.normal_time.unwrap_or_default(),
        })
        .collect();
    let max_y_norm = outcomes.iter().map(|o| o.y_norm).fold(0.0, f64::max);
    Ok(BenchmarkReport {
        n_obs: config.n_obs,
        n_trials: config.n_trials,
        n_cols: 2,
        wall_time_per_trial: wall_times(&outcomes),
        max_solver_discrepancy: outcomes
            .iter()
            .filter_map(|o| o.discrepancy)
            .fold(0.0, f64::max),
        discrepancy_tolerance: DISCREPANCY_TOLERANCE * (1.0 + max_y_norm),
        trials,
    })
}
