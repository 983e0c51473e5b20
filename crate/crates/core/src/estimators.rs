//! Long-run reward-rate estimators.
//!
//! * [`pathwise_rate`]: `R(t)/t` along one path (the almost-sure limit).
//! * [`ensemble_mean_rate`]: mean of `R(t)/t` over independent replications
//!   (the limit of `E[R(t)]/t`).
//! * [`regenerative_ratio`]: `Σr/Σx` over i.i.d. cycles with a delta-method
//!   interval.
//! * [`wald_check`]: `E[S_{N(t)+1}]` against `E[N(t)+1]·E[X]`.
//! * [`as_vs_mean_demo`]: a sequence converging to 0 almost surely whose
//!   means stay at 1.
//!
//! Replication `i` always runs on stream `i` of the given seed and results
//! are reduced in index order, so the execution mode never changes output.

use serde::Serialize;

use crate::distributions::{DistributionSpec, Moment};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::reward::{realize_rewarded_path, AccrualMode, CycleSample, JointCycleSampler, RewardedPath};
use crate::rng::RngStream;
use crate::stats::{self, Z_95};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub point: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_cycles: usize,
    pub heavy_tail_flag: bool,
}

impl RatioEstimate {
    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }

    pub fn with_heavy_tail_flag(self, flag: bool) -> Self {
        Self {
            heavy_tail_flag: flag,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub checkpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl ConvergenceTrace {
    pub fn new(checkpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if checkpoints.len() != values.len() {
            return Err(Error::arg("checkpoints", "trace lengths differ"));
        }
        if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::arg("checkpoints", "checkpoints must be strictly increasing"));
        }
        Ok(Self { checkpoints, values })
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// Ensemble estimate of `E[R(t)]/t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleEstimate {
    pub point: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_reps: usize,
    pub heavy_tail_flag: bool,
    /// Reported when the sampler is heavy-tailed.
    pub median: Option<f64>,
    pub iqr: Option<f64>,
    /// `R(t)/t` per replication, by replication index.
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// `R(t)/t` at each checkpoint along one path.
pub fn pathwise_rate(path: &RewardedPath, mode: &AccrualMode, checkpoints: &[f64]) -> Result<ConvergenceTrace> {
    let values = checkpoints
        .iter()
        .map(|&t| path.reward_rate(mode, t))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new(checkpoints.to_vec(), values)
}

pub fn ensemble_mean_rate(
    sampler: &JointCycleSampler,
    mode: &AccrualMode,
    t: f64,
    n_reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<EnsembleEstimate> {
    if n_reps < 2 {
        return Err(Error::arg("n_reps", format!("need at least 2 replications, got {n_reps}")));
    }
    if !(t > 0.0) {
        return Err(Error::arg("t", format!("must be > 0, got {t}")));
    }
    sampler.validate()?;
    let values = exec
        .map(n_reps as u64, |i| {
            let mut rng = RngStream::new(seed, i);
            realize_rewarded_path(sampler, t, &mut rng)?.reward_rate(mode, t)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let point = stats::mean(&values);
    let stderr = stats::std_error(&values);
    let heavy = sampler.heavy_tailed();
    let (median, iqr) = if heavy {
        let (m, q) = stats::median_iqr(&values);
        (Some(m), Some(q))
    } else {
        (None, None)
    };
    Ok(EnsembleEstimate {
        point,
        stderr,
        ci_low: point - Z_95 * stderr,
        ci_high: point + Z_95 * stderr,
        n_reps,
        heavy_tail_flag: heavy,
        median,
        iqr,
        values,
    })
}

/// Regenerative ratio estimator over i.i.d. cycles. The point estimate is
/// `Σr / Σx` (both summed left to right, so it equals `R(S_K)/S_K` on the
/// path the cycles came from) and the standard error is
/// `sd(r_n - point·x_n) / (mean(x) · sqrt(n))`.
pub fn regenerative_ratio(cycles: &[CycleSample]) -> Result<RatioEstimate> {
    let n = cycles.len();
    if n < 2 {
        return Err(Error::DegenerateCycles { n });
    }
    let sum_r: f64 = cycles.iter().map(|c| c.reward).sum();
    let sum_x: f64 = cycles.iter().map(|c| c.length).sum();
    let point = sum_r / sum_x;
    let resid_sq: f64 = cycles
        .iter()
        .map(|c| {
            let d = c.reward - point * c.length;
            d * d
        })
        .sum();
    let s = (resid_sq / (n - 1) as f64).sqrt();
    let mean_x = sum_x / n as f64;
    let stderr = s / (mean_x * (n as f64).sqrt());
    Ok(RatioEstimate {
        point,
        stderr,
        ci_low: point - Z_95 * stderr,
        ci_high: point + Z_95 * stderr,
        n_cycles: n,
        heavy_tail_flag: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaldReport {
    /// Ensemble mean of `S_{N(t)+1} = X_1 + ... + X_{N(t)+1}`.
    pub mean_stopped_sum: f64,
    /// Ensemble mean of `N(t) + 1`.
    pub mean_stopped_count: f64,
    /// Analytic `E[X]`.
    pub mean_length: f64,
    /// `mean_stopped_count · mean_length`.
    pub predicted: f64,
    /// `|mean_stopped_sum - predicted| / predicted`.
    pub relative_gap: f64,
    pub n_reps: usize,
}

/// Wald's identity for the stopping time `N(t) + 1`.
pub fn wald_check(
    sampler: &JointCycleSampler,
    t: f64,
    n_reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<WaldReport> {
    if n_reps < 1 {
        return Err(Error::arg("n_reps", "need at least 1 replication"));
    }
    sampler.validate()?;
    let mean_length = match sampler.mean_length() {
        Moment::Finite(m) => m,
        _ => return Err(Error::arg("sampler", "cycle length must have a finite mean")),
    };
    let draws = exec
        .map(n_reps as u64, |i| {
            let rp = realize_rewarded_path(sampler, t, &mut RngStream::new(seed, i))?;
            Ok((rp.path().overshoot(), rp.cycles().len() as f64))
        })
        .into_iter()
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let reps = n_reps as f64;
    let mean_stopped_sum = draws.iter().map(|d| d.0).sum::<f64>() / reps;
    let mean_stopped_count = draws.iter().map(|d| d.1).sum::<f64>() / reps;
    let predicted = mean_stopped_count * mean_length;
    Ok(WaldReport {
        mean_stopped_sum,
        mean_stopped_count,
        mean_length,
        predicted,
        relative_gap: (mean_stopped_sum - predicted).abs() / predicted,
        n_reps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsVsMeanRow {
    pub n: u64,
    /// `E[Y_n]`, exactly 1 for every `n`.
    pub analytic_mean: f64,
    /// `P[Y_n != 0] = 1/(n+1)`.
    pub nonzero_probability: f64,
    pub empirical_nonzero: f64,
    pub empirical_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsVsMeanTrace {
    pub rows: Vec<AsVsMeanRow>,
    pub reps: usize,
    /// Whether `E[Y_n] == 1.0` held exactly for every `n` in `1..=n_max`.
    pub analytic_mean_exact: bool,
    /// Fraction of replications still nonzero at some grid point `>= n_max / 10`.
    pub late_nonzero_fraction: f64,
}

/// The law `P[Y_n = 0] = n/(n+1)`, `P[Y_n = n+1] = 1/(n+1)`.
pub fn y_law(n: u64) -> DistributionSpec {
    let nf = n as f64;
    DistributionSpec::two_point_weighted(nf, 1.0, 0.0, nf + 1.0).expect("valid two-point law")
}

/// Grid `1, 2, 5, 10, 20, 50, ...` up to and including `n_max`.
pub fn log_grid(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let n = decade * m;
            if n >= n_max {
                break 'outer;
            }
            out.push(n);
        }
        decade *= 10;
    }
    out.push(n_max);
    out
}

/// Samples the whole sequence `Y_1, Y_2, ...` from one uniform per
/// replication (`Y_n = F_n^{-1}(U)`), so each replication is nonzero only for
/// `n + 1 <= 1 / (1 - U)` and converges to 0 almost surely while every
/// `E[Y_n]` equals 1. Replication `j` uses stream `j`.
pub fn as_vs_mean_demo(n_max: u64, reps: usize, seed: u64, exec: Execution) -> Result<AsVsMeanTrace> {
    if n_max < 1 {
        return Err(Error::arg("n_max", "must be >= 1"));
    }
    if reps < 1 {
        return Err(Error::arg("reps", "must be >= 1"));
    }
    let grid = log_grid(n_max);
    let laws: Vec<DistributionSpec> = grid.iter().map(|&n| y_law(n)).collect();
    let uniforms = exec.map(reps as u64, |j| RngStream::new(seed, j).uniform());

    let rows = grid
        .iter()
        .zip(&laws)
        .map(|(&n, law)| {
            let draws: Vec<f64> = uniforms.iter().map(|&u| law.quantile(u)).collect();
            let nonzero = draws.iter().filter(|&&y| y != 0.0).count();
            AsVsMeanRow {
                n,
                analytic_mean: law.mean().finite().expect("finite"),
                nonzero_probability: 1.0 / (n as f64 + 1.0),
                empirical_nonzero: nonzero as f64 / reps as f64,
                empirical_mean: stats::mean(&draws),
            }
        })
        .collect();

    let analytic_mean_exact = (1..=n_max).all(|n| y_law(n).mean() == Moment::Finite(1.0));
    let late: Vec<&DistributionSpec> = grid
        .iter()
        .zip(&laws)
        .filter(|(&n, _)| n * 10 >= n_max)
        .map(|(_, l)| l)
        .collect();
    let late_nonzero = uniforms
        .iter()
        .filter(|&&u| late.iter().any(|l| l.quantile(u) != 0.0))
        .count();
    Ok(AsVsMeanTrace {
        rows,
        reps,
        analytic_mean_exact,
        late_nonzero_fraction: late_nonzero as f64 / reps as f64,
    })
}
