//! Time averages of age, residual life and spread: the long-run average of
//! the covering cycle length is `E[X²]/E[X]`, which exceeds `E[X]` unless `X`
//! is constant.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::Result;
use crate::estimators::regenerative_ratio;
use crate::renewal::Process;
use crate::reward::{realize_rewarded_path, JointCycleSampler, RewardFn};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgeExcessReport {
    pub age_average: f64,
    pub residual_average: f64,
    pub spread_average: f64,
    /// Regenerative standard error of the age (and residual) average.
    pub stderr: f64,
    /// `E[X]`
    pub mean_length: f64,
    /// `E[X²] / (2 E[X])`
    pub analytic_age: f64,
    /// `E[X²] / E[X]`
    pub analytic_spread: f64,
    pub t_max: f64,
}

pub fn age_excess(interarrival: &DistributionSpec, t_max: f64, seed: u64) -> Result<AgeExcessReport> {
    let sampler = JointCycleSampler::function_of_length(*interarrival, RewardFn::HalfSquare)?;
    let rp = realize_rewarded_path(&sampler, t_max, &mut RngStream::new(seed, 0))?;
    let path = rp.path();
    let mean_length = interarrival.mean().finite().unwrap_or(f64::NAN);
    let second = interarrival.second_moment().finite().unwrap_or(f64::INFINITY);
    let stderr = regenerative_ratio(rp.complete_cycles())
        .map(|r| r.stderr)
        .unwrap_or(f64::NAN);
    Ok(AgeExcessReport {
        age_average: path.time_average(Process::Age, t_max)?,
        residual_average: path.time_average(Process::Residual, t_max)?,
        spread_average: path.time_average(Process::Spread, t_max)?,
        stderr,
        mean_length,
        analytic_age: second / (2.0 * mean_length),
        analytic_spread: second / mean_length,
        t_max,
    })
}
