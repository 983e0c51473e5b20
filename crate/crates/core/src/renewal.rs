//! Renewal paths and the processes read off them.
//!
//! A path stores the epochs `S_1 < ... < S_K <= t_max` plus the first epoch
//! beyond the horizon, so age, residual life and spread are defined on the
//! whole closed interval `[0, t_max]`. `N(t)` counts a renewal that happens
//! exactly at `t`, hence the age at an epoch is 0.

use std::str::FromStr;

use serde::Serialize;

use crate::distributions::{DistributionSpec, Role};
use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    Age,
    Residual,
    Spread,
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "age" => Ok(Process::Age),
            "residual" | "excess" => Ok(Process::Residual),
            "spread" => Ok(Process::Spread),
            other => Err(Error::arg("process", format!("unknown process `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenewalPath {
    /// `S_1, ..., S_K, S_{K+1}` with `S_K <= horizon < S_{K+1}`.
    epochs: Vec<f64>,
    horizon: f64,
    delayed_first: bool,
    seed: u64,
    stream: u64,
}

impl RenewalPath {
    /// Accumulates cycle lengths from `next_length` until the first epoch
    /// beyond `horizon`. The caller guarantees positive lengths.
    pub(crate) fn build(
        horizon: f64,
        delayed_first: bool,
        rng: &RngStream,
        mut next_length: impl FnMut() -> f64,
    ) -> Self {
        let mut epochs = Vec::with_capacity(64);
        let mut s = 0.0;
        loop {
            s += next_length();
            epochs.push(s);
            if s > horizon {
                break;
            }
        }
        Self {
            epochs,
            horizon,
            delayed_first,
            seed: rng.seed(),
            stream: rng.stream(),
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn delayed_first(&self) -> bool {
        self.delayed_first
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Epochs inside the horizon, `S_1..S_K`.
    pub fn epochs(&self) -> &[f64] {
        &self.epochs[..self.epochs.len() - 1]
    }

    /// Epochs including the overshoot `S_{K+1}`.
    pub fn all_epochs(&self) -> &[f64] {
        &self.epochs
    }

    /// First epoch strictly beyond the horizon.
    pub fn overshoot(&self) -> f64 {
        *self.epochs.last().expect("path always holds the overshoot epoch")
    }

    /// `K = N(horizon)`.
    pub fn renewals(&self) -> usize {
        self.epochs.len() - 1
    }

    /// `S_n` with `S_0 = 0`; valid for `n <= K + 1`.
    pub fn epoch(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.epochs[n - 1]
        }
    }

    /// Length of cycle `n` (1-based), `S_n - S_{n-1}`.
    pub fn cycle_length(&self, n: usize) -> f64 {
        self.epoch(n) - self.epoch(n - 1)
    }

    fn check(&self, t: f64) -> Result<()> {
        if (0.0..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::OutOfHorizon {
                t,
                horizon: self.horizon,
            })
        }
    }

    /// `N(t) = max{n : S_n <= t}`.
    pub fn count(&self, t: f64) -> Result<usize> {
        self.check(t)?;
        Ok(self.count_unchecked(t))
    }

    pub(crate) fn count_unchecked(&self, t: f64) -> usize {
        self.epochs.partition_point(|&s| s <= t)
    }

    /// `A(t) = t - S_{N(t)}`.
    pub fn age(&self, t: f64) -> Result<f64> {
        let n = self.count(t)?;
        Ok(t - self.epoch(n))
    }

    /// `B(t) = S_{N(t)+1} - t`.
    pub fn residual(&self, t: f64) -> Result<f64> {
        let n = self.count(t)?;
        Ok(self.epoch(n + 1) - t)
    }

    /// `X_{N(t)+1} = S_{N(t)+1} - S_{N(t)}`, the length of the covering cycle.
    pub fn spread(&self, t: f64) -> Result<f64> {
        let n = self.count(t)?;
        Ok(self.cycle_length(n + 1))
    }

    pub fn process(&self, process: Process, t: f64) -> Result<f64> {
        match process {
            Process::Age => self.age(t),
            Process::Residual => self.residual(t),
            Process::Spread => self.spread(t),
        }
    }

    /// `(1/t) ∫_0^t process(s) ds`, exact per cycle: a complete cycle of
    /// length `x` contributes `x²/2` to the age and residual integrals and
    /// `x²` to the spread integral; the cycle in progress at `t` is split
    /// analytically.
    pub fn time_average(&self, process: Process, t: f64) -> Result<f64> {
        self.check(t)?;
        if t <= 0.0 {
            return Err(Error::arg("t", "time average needs t > 0"));
        }
        let n = self.count_unchecked(t);
        let mut squares = 0.0;
        let mut prev = 0.0;
        for &s in &self.epochs[..n] {
            let x = s - prev;
            squares += x * x;
            prev = s;
        }
        let elapsed = t - prev;
        let current = self.epochs[n] - prev;
        let integral = match process {
            Process::Age => 0.5 * squares + 0.5 * elapsed * elapsed,
            Process::Residual => 0.5 * squares + elapsed * (current - 0.5 * elapsed),
            Process::Spread => squares + elapsed * current,
        };
        Ok(integral / t)
    }
}

/// Generates an ordinary (or, with `first_cycle`, delayed) renewal path up to
/// and including the first epoch beyond `t_max`. Consumes one word of `rng`
/// per cycle.
pub fn generate_path(
    interarrival: &DistributionSpec,
    t_max: f64,
    rng: &mut RngStream,
    first_cycle: Option<&DistributionSpec>,
) -> Result<RenewalPath> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::arg("t_max", format!("must be finite and > 0, got {t_max}")));
    }
    interarrival.validate_role(Role::Interarrival)?;
    if let Some(first) = first_cycle {
        first.validate_role(Role::FirstCycle)?;
    }
    let stream = rng.clone();
    let mut first = first_cycle;
    Ok(RenewalPath::build(t_max, first_cycle.is_some(), &stream, || {
        match first.take() {
            Some(d) => d.sample(rng),
            None => interarrival.sample(rng),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DistributionSpec {
        s.parse().unwrap()
    }

    fn lattice(t_max: f64) -> RenewalPath {
        generate_path(&d("det:1"), t_max, &mut RngStream::new(0, 0), None).unwrap()
    }

    #[test]
    fn lattice_epochs() {
        let p = lattice(2.5);
        assert_eq!(p.epochs(), &[1.0, 2.0]);
        assert_eq!(p.overshoot(), 3.0);
        assert_eq!(p.count(2.5).unwrap(), 2);
        assert_eq!(p.count(0.0).unwrap(), 0);
        assert_eq!(p.count(2.0).unwrap(), 2);
        assert_eq!(p.count(1.999).unwrap(), 1);
    }

    #[test]
    fn delayed_lattice() {
        let p = generate_path(
            &d("det:1"),
            2.2,
            &mut RngStream::new(0, 0),
            Some(&d("det:0.5")),
        )
        .unwrap();
        assert_eq!(p.epochs(), &[0.5, 1.5]);
        assert_eq!(p.overshoot(), 2.5);
        assert!(p.delayed_first());
    }

    #[test]
    fn age_residual_spread_on_lattice() {
        let p = lattice(2.5);
        assert_eq!(p.age(2.5).unwrap(), 0.5);
        assert_eq!(p.residual(2.5).unwrap(), 0.5);
        assert_eq!(p.spread(2.5).unwrap(), 1.0);
        assert_eq!(p.age(2.0).unwrap(), 0.0);
        assert_eq!(p.residual(2.0).unwrap(), 1.0);
        assert_eq!(p.age(0.0).unwrap(), 0.0);
    }

    #[test]
    fn time_average_on_lattice() {
        let p = lattice(2.0);
        assert_eq!(p.time_average(Process::Age, 2.0).unwrap(), 0.5);
        assert_eq!(p.time_average(Process::Residual, 2.0).unwrap(), 0.5);
        assert_eq!(p.time_average(Process::Spread, 2.0).unwrap(), 1.0);
        let q = lattice(2.5);
        // ∫_0^2.5 A = 0.5 + 0.5 + 0.125
        assert_eq!(q.time_average(Process::Age, 2.5).unwrap(), 1.125 / 2.5);
        // ∫_0^2.5 B = 0.5 + 0.5 + (0.5 - 0.125)
        assert_eq!(q.time_average(Process::Residual, 2.5).unwrap(), 1.375 / 2.5);
    }

    #[test]
    fn out_of_horizon() {
        let p = lattice(2.5);
        assert!(matches!(p.count(2.6), Err(Error::OutOfHorizon { .. })));
        assert!(matches!(p.age(-0.1), Err(Error::OutOfHorizon { .. })));
        assert!(p.time_average(Process::Age, 0.0).is_err());
    }

    #[test]
    fn rejects_invalid_roles() {
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(
            generate_path(&d("cauchy:0,1"), 10.0, &mut rng, None),
            Err(Error::InvalidRole { .. })
        ));
        assert!(matches!(
            generate_path(&d("exp:1"), 10.0, &mut rng, Some(&d("pareto:0.5,1"))),
            Err(Error::InvalidRole { .. })
        ));
        assert!(generate_path(&d("exp:1"), 0.0, &mut rng, None).is_err());
    }

    #[test]
    fn one_word_per_cycle() {
        let mut rng = RngStream::new(5, 2);
        let p = generate_path(&d("exp:1"), 100.0, &mut rng, None).unwrap();
        assert_eq!(rng.words_consumed(), p.all_epochs().len() as u128);
    }
}
