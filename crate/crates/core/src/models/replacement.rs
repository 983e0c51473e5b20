//! Age replacement: replace on failure at cost `c_f`, or preventively at age
//! `T` at cost `c`. Cycles are `min(X, T)` long and the long-run cost rate is
//!
//! ```text
//! g(T) = [c (1 - F(T)) + c_f F(T)] / E[min(X, T)]
//! ```

use serde::Serialize;

use crate::distributions::{DistributionSpec, Moment, Role};
use crate::error::{Error, Result};
use crate::estimators::{regenerative_ratio, RatioEstimate};
use crate::optimize::golden_section_minimize;
use crate::reward::{realize_rewarded_path, AccrualMode, JointCycleSampler};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplacementPolicy {
    /// `T`; may be `+inf` for pure failure replacement.
    pub preventive_age: f64,
    /// `c`
    pub preventive_cost: f64,
    /// `c_f`
    pub failure_cost: f64,
}

impl ReplacementPolicy {
    /// Requires `T > 0` and `0 < c <= c_f`. Equal costs are allowed for
    /// evaluation; [`optimize_replacement`] insists on `c < c_f`.
    pub fn new(preventive_age: f64, preventive_cost: f64, failure_cost: f64) -> Result<Self> {
        if !(preventive_age > 0.0) {
            return Err(Error::arg("T", format!("preventive age must be > 0, got {preventive_age}")));
        }
        if !(preventive_cost > 0.0 && preventive_cost <= failure_cost && failure_cost.is_finite()) {
            return Err(Error::InvalidCosts {
                c: preventive_cost,
                c_f: failure_cost,
            });
        }
        Ok(Self {
            preventive_age,
            preventive_cost,
            failure_cost,
        })
    }

    /// `(cycle length, cost)` for a component with life `life`.
    pub fn cycle(&self, life: f64) -> (f64, f64) {
        if life <= self.preventive_age {
            (life, self.failure_cost)
        } else {
            (self.preventive_age, self.preventive_cost)
        }
    }
}

/// Analytic long-run cost rate `g(T)`.
pub fn replacement_cost_rate(policy: &ReplacementPolicy, life: &DistributionSpec) -> Result<f64> {
    life.validate_role(Role::Life)?;
    Ok(cost_rate_unchecked(policy, life))
}

fn cost_rate_unchecked(policy: &ReplacementPolicy, life: &DistributionSpec) -> f64 {
    let t = policy.preventive_age;
    let fail = if t.is_infinite() { 1.0 } else { life.cdf(t) };
    let cost = policy.preventive_cost * (1.0 - fail) + policy.failure_cost * fail;
    match life.truncated_mean(t) {
        Moment::Finite(m) => cost / m,
        _ => f64::NAN,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplacementOptimum {
    pub t_star: f64,
    pub g_star: f64,
    /// Set when no interior minimum exists in the bracket and the optimum
    /// sits on an end.
    pub boundary: Option<Boundary>,
    pub evaluations: usize,
}

impl ReplacementOptimum {
    pub fn monotone(&self) -> bool {
        self.boundary.is_some()
    }
}

/// Absolute tolerance on `T*`.
pub const T_TOLERANCE: f64 = 1e-6;

/// Golden-section minimisation of `g(T)` over `bracket`.
pub fn optimize_replacement(
    life: &DistributionSpec,
    preventive_cost: f64,
    failure_cost: f64,
    bracket: (f64, f64),
) -> Result<ReplacementOptimum> {
    life.validate_role(Role::Life)?;
    if !(preventive_cost > 0.0 && preventive_cost < failure_cost && failure_cost.is_finite()) {
        return Err(Error::InvalidCosts {
            c: preventive_cost,
            c_f: failure_cost,
        });
    }
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::arg("bracket", format!("need 0 < lo < hi < inf, got ({lo}, {hi})")));
    }
    let g = |t: f64| {
        let policy = ReplacementPolicy {
            preventive_age: t,
            preventive_cost,
            failure_cost,
        };
        cost_rate_unchecked(&policy, life)
    };
    let found = golden_section_minimize(g, lo, hi, T_TOLERANCE);
    let edge = 10.0 * T_TOLERANCE;
    let (g_lo, g_hi) = (g(lo), g(hi));
    let boundary = if hi - found.x < edge && g_hi <= found.fx {
        Some(Boundary::Upper)
    } else if found.x - lo < edge && g_lo <= found.fx {
        Some(Boundary::Lower)
    } else {
        None
    };
    let (t_star, g_star) = match boundary {
        Some(Boundary::Upper) => (hi, g_hi),
        Some(Boundary::Lower) => (lo, g_lo),
        None => (found.x, found.fx),
    };
    Ok(ReplacementOptimum {
        t_star,
        g_star,
        boundary,
        evaluations: found.evaluations + 2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplacementSimulation {
    /// Cost per unit time `R(t_max) / t_max`.
    pub rate: f64,
    /// Regenerative estimate over the completed cycles.
    pub ratio: RatioEstimate,
    pub analytic: f64,
    pub t_max: f64,
}

/// Renewal reward simulation of the policy on stream 0 of `seed`.
pub fn simulate_replacement(
    policy: &ReplacementPolicy,
    life: &DistributionSpec,
    t_max: f64,
    seed: u64,
) -> Result<ReplacementSimulation> {
    let sampler = JointCycleSampler::age_replacement(*life, *policy)?;
    let rp = realize_rewarded_path(&sampler, t_max, &mut RngStream::new(seed, 0))?;
    Ok(ReplacementSimulation {
        rate: rp.reward_rate(&AccrualMode::EndOfCycle, t_max)?,
        ratio: regenerative_ratio(rp.complete_cycles())?,
        analytic: cost_rate_unchecked(policy, life),
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
    fn uniform_half() {
        let p = ReplacementPolicy::new(0.5, 1.0, 5.0).unwrap();
        assert!((replacement_cost_rate(&p, &d("unif:0,1")).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn beyond_support_is_failure_only() {
        for t in [1.0, 2.0, f64::INFINITY] {
            let p = ReplacementPolicy::new(t, 1.0, 5.0).unwrap();
            assert_eq!(replacement_cost_rate(&p, &d("unif:0,1")).unwrap(), 10.0);
        }
    }

    #[test]
    fn equal_costs_decrease_in_t() {
        let life = d("unif:0,1");
        let rates: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 1.0]
            .iter()
            .map(|&t| replacement_cost_rate(&ReplacementPolicy::new(t, 5.0, 5.0).unwrap(), &life).unwrap())
            .collect();
        assert!(rates.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(*rates.last().unwrap(), 10.0);
    }

    #[test]
    fn policy_validation() {
        assert!(matches!(ReplacementPolicy::new(1.0, 6.0, 5.0), Err(Error::InvalidCosts { .. })));
        assert!(matches!(ReplacementPolicy::new(1.0, 0.0, 5.0), Err(Error::InvalidCosts { .. })));
        assert!(ReplacementPolicy::new(0.0, 1.0, 5.0).is_err());
        assert!(matches!(
            optimize_replacement(&d("unif:0,1"), 5.0, 5.0, (0.01, 0.99)),
            Err(Error::InvalidCosts { .. })
        ));
        assert!(optimize_replacement(&d("unif:0,1"), 1.0, 5.0, (0.5, 0.1)).is_err());
    }

    #[test]
    fn deterministic_life_never_fails_before_t() {
        let p = ReplacementPolicy::new(0.5, 1.0, 5.0).unwrap();
        let sim = simulate_replacement(&p, &d("det:1"), 1000.0, 3).unwrap();
        assert_eq!(sim.rate, 2.0);
        assert_eq!(sim.analytic, 2.0);
    }
}
