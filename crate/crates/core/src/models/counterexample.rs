//! Partial-reward counterexample: unit cycles, zero cycle reward, and within
//! cycle `j` the reward `C_j · f(u)` with `C_j ~ Cauchy(0, 1)` and the
//! triangle `f`. `R(t)` vanishes at every integer, while `R(k + 1/2)` is
//! Cauchy(0, 1/2) and so has no mean at any finite `t`.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::estimators::{log_grid, ConvergenceTrace};
use crate::reward::{realize_rewarded_path, AccrualMode, JointCycleSampler, Shape};
use crate::rng::RngStream;
use crate::stats;

/// Number of leading cycles whose probes are reported.
const PROBE_CYCLES: usize = 10;

/// Running means are inspected from this many cycles on.
pub const RUNNING_MEAN_FROM: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    /// 0-based cycle index `j`; the probe time is `j + offset`.
    pub cycle: usize,
    pub offset: f64,
    pub t: f64,
    pub value: f64,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub n_cycles: usize,
    pub seed: u64,
    /// `R(k) == 0.0` for every integer `0 <= k <= n_cycles`.
    pub integers_zero: bool,
    pub max_abs_integer_value: f64,
    pub probes: Vec<Probe>,
    /// KS distance of `R(k + 1/2)` from Cauchy(0, 1/2).
    pub ks_statistic: f64,
    pub ks_critical_1pct: f64,
    pub ks_pass: bool,
    /// `max |running mean of R(k + 1/2)|` over `n >= RUNNING_MEAN_FROM`
    /// (or over all `n` for shorter runs).
    pub max_abs_running_mean: f64,
    /// Running mean of `R(k + 1/2)` at log-spaced cycle counts.
    pub running_mean_trace: ConvergenceTrace,
    /// `R(k + 1/2)` for `k = 0..n_cycles`.
    #[serde(skip)]
    pub half_values: Vec<f64>,
}

pub fn cauchy_counterexample(n_cycles: usize, seed: u64, probe_offsets: &[f64]) -> Result<CounterexampleReport> {
    if n_cycles < 1 {
        return Err(Error::arg("n_cycles", "must be >= 1"));
    }
    if let Some(bad) = probe_offsets.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(Error::arg("probes", format!("offset {bad} outside [0, 1]")));
    }
    let sampler = JointCycleSampler::cauchy_triangle();
    let rp = realize_rewarded_path(&sampler, n_cycles as f64, &mut RngStream::new(seed, 0))?;
    let mode = AccrualMode::Partial(Shape::triangle());
    let reward = |t: f64| rp.cumulative_reward(&mode, t);

    let mut max_abs_integer_value = 0.0f64;
    for k in 0..=n_cycles {
        max_abs_integer_value = max_abs_integer_value.max(reward(k as f64)?.abs());
    }

    let mut probes = Vec::new();
    for j in 0..n_cycles.min(PROBE_CYCLES) {
        for &u in probe_offsets {
            let t = j as f64 + u;
            probes.push(Probe {
                cycle: j,
                offset: u,
                t,
                value: reward(t)?,
                coeff: rp.cycles()[j].partial_coeff(),
            });
        }
    }

    let half_values = (0..n_cycles)
        .map(|k| reward(k as f64 + 0.5))
        .collect::<Result<Vec<f64>>>()?;
    let half_law = DistributionSpec::cauchy(0.0, 0.5)?;
    let ks_statistic = stats::ks_statistic(&half_values, |x| half_law.cdf(x));
    let ks_critical_1pct = stats::ks_critical_1pct(n_cycles);

    let running = stats::running_mean(&half_values);
    let from = if n_cycles > RUNNING_MEAN_FROM { RUNNING_MEAN_FROM - 1 } else { 0 };
    let max_abs_running_mean = running[from..].iter().map(|m| m.abs()).fold(0.0, f64::max);
    let grid = log_grid(n_cycles as u64);
    let running_mean_trace = ConvergenceTrace::new(
        grid.iter().map(|&n| n as f64).collect(),
        grid.iter().map(|&n| running[n as usize - 1]).collect(),
    )?;

    Ok(CounterexampleReport {
        n_cycles,
        seed,
        integers_zero: max_abs_integer_value == 0.0,
        max_abs_integer_value,
        probes,
        ks_statistic,
        ks_critical_1pct,
        ks_pass: ks_statistic < ks_critical_1pct,
        max_abs_running_mean,
        running_mean_trace,
        half_values,
    })
}
