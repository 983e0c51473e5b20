//! Alternating ON/OFF renewal process. Each cycle is an ON period followed by
//! an OFF period; the cycle reward is the ON duration.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::Result;
use crate::reward::{realize_rewarded_path, AccrualMode, JointCycleSampler, RewardedPath};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlternatingReport {
    /// Exact ON time in `[0, t_max]` divided by `t_max`.
    pub on_fraction: f64,
    /// Exact OFF time in `[0, t_max]` divided by `t_max`.
    pub off_fraction: f64,
    /// ON time of completed cycles only, `R(t_max)/t_max`.
    pub end_of_cycle_rate: f64,
    /// `E[ON] / (E[ON] + E[OFF])`.
    pub analytic: f64,
    pub cycles_completed: usize,
    pub t_max: f64,
}

/// ON time in `[0, t]` on a path from [`JointCycleSampler::Alternating`].
pub fn on_time(rp: &RewardedPath, t: f64) -> Result<f64> {
    let n = rp.path().count(t)?;
    let completed = rp.cumulative_reward(&AccrualMode::EndOfCycle, t)?;
    let elapsed = t - rp.path().epoch(n);
    Ok(completed + elapsed.min(rp.cycles()[n].reward))
}

/// OFF time in `[0, t]`; the alternating process with the phases' rewards
/// swapped.
pub fn off_time(rp: &RewardedPath, t: f64) -> Result<f64> {
    let n = rp.path().count(t)?;
    let completed: f64 = rp.cycles()[..n].iter().map(|c| c.length - c.reward).sum();
    let elapsed = t - rp.path().epoch(n);
    Ok(completed + (elapsed - rp.cycles()[n].reward).max(0.0))
}

pub fn alternating_on_fraction(
    on: &DistributionSpec,
    off: &DistributionSpec,
    t_max: f64,
    seed: u64,
) -> Result<AlternatingReport> {
    let sampler = JointCycleSampler::alternating(*on, *off)?;
    let rp = realize_rewarded_path(&sampler, t_max, &mut RngStream::new(seed, 0))?;
    let analytic = sampler.long_run_rate().finite().unwrap_or(f64::NAN);
    Ok(AlternatingReport {
        on_fraction: on_time(&rp, t_max)? / t_max,
        off_fraction: off_time(&rp, t_max)? / t_max,
        end_of_cycle_rate: rp.reward_rate(&AccrualMode::EndOfCycle, t_max)?,
        analytic,
        cycles_completed: rp.path().renewals(),
        t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DistributionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn symmetric_lattice() {
        for t in [2.0, 10.0, 1000.0] {
            let r = alternating_on_fraction(&d("det:1"), &d("det:1"), t, 0).unwrap();
            assert_eq!(r.on_fraction, 0.5);
            assert_eq!(r.off_fraction, 0.5);
        }
        // mid-ON: [0, 2.5] has ON time 1 + 0.5
        let r = alternating_on_fraction(&d("det:1"), &d("det:1"), 2.5, 0).unwrap();
        assert_eq!(r.on_fraction, 1.5 / 2.5);
    }

    #[test]
    fn on_plus_off_is_elapsed_time() {
        let r = alternating_on_fraction(&d("exp:1"), &d("unif:0,4"), 500.0, 4).unwrap();
        assert!((r.on_fraction + r.off_fraction - 1.0).abs() < 1e-12);
        assert!(r.end_of_cycle_rate <= r.on_fraction);
    }

    #[test]
    fn rejects_cauchy_phase() {
        assert!(alternating_on_fraction(&d("cauchy:1,1"), &d("exp:1"), 10.0, 0).is_err());
    }
}
