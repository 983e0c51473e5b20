//! Reward structures on renewal paths.
//!
//! A [`JointCycleSampler`] emits i.i.d. [`CycleSample`]s `(x_n, r_n, coeff_n)`;
//! the lengths build the renewal path and the rewards are credited according
//! to an [`AccrualMode`]. Partial accrual credits every completed cycle in
//! full and adds `coeff · shape(u)` for the cycle in progress, `u` being the
//! elapsed fraction of that cycle. With `shape = ramp` and `coeff = r_n` this
//! is a constant accrual rate; with `shape = triangle`, `r_n = 0` and a Cauchy
//! coefficient it is the partial-reward counterexample whose cumulative
//! reward is zero at every renewal and undefined in mean in between.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distributions::{DistributionSpec, Moment, Role};
use crate::error::{Error, Result};
use crate::models::ReplacementPolicy;
use crate::renewal::RenewalPath;
use crate::rng::RngStream;

/// One cycle: length, reward credited for it, and an optional coefficient
/// for partial accrual (defaults to the reward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleSample {
    pub length: f64,
    pub reward: f64,
    pub coeff: Option<f64>,
}

impl CycleSample {
    pub fn new(length: f64, reward: f64) -> Self {
        Self {
            length,
            reward,
            coeff: None,
        }
    }

    /// Coefficient applied to the shape during partial accrual.
    pub fn partial_coeff(&self) -> f64 {
        self.coeff.unwrap_or(self.reward)
    }
}

/// Reward as a deterministic function of the cycle length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardFn {
    Constant(f64),
    /// `r = x`
    Identity,
    /// `r = x²`
    Square,
    /// `r = x²/2`, the integral of the age over one cycle.
    HalfSquare,
}

impl RewardFn {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            RewardFn::Constant(c) => c,
            RewardFn::Identity => x,
            RewardFn::Square => x * x,
            RewardFn::HalfSquare => 0.5 * x * x,
        }
    }

    /// `E[g(X)]` for the length law `x`.
    pub fn expectation(self, x: &DistributionSpec) -> Moment {
        match self {
            RewardFn::Constant(c) => Moment::Finite(c),
            RewardFn::Identity => x.mean(),
            RewardFn::Square => x.second_moment(),
            RewardFn::HalfSquare => match x.second_moment() {
                Moment::Finite(m) => Moment::Finite(0.5 * m),
                other => other,
            },
        }
    }
}

impl fmt::Display for RewardFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewardFn::Constant(c) if *c == 1.0 => write!(f, "one"),
            RewardFn::Constant(c) => write!(f, "const:{c}"),
            RewardFn::Identity => write!(f, "x"),
            RewardFn::Square => write!(f, "x2"),
            RewardFn::HalfSquare => write!(f, "half-x2"),
        }
    }
}

impl FromStr for RewardFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "one" => Ok(RewardFn::Constant(1.0)),
            "x" => Ok(RewardFn::Identity),
            "x2" => Ok(RewardFn::Square),
            "half-x2" => Ok(RewardFn::HalfSquare),
            other => match other.strip_prefix("const:") {
                Some(v) => v
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(RewardFn::Constant)
                    .ok_or_else(|| Error::arg("reward", format!("bad constant `{v}`"))),
                None => Err(Error::arg("reward", format!("unknown reward function `{other}`"))),
            },
        }
    }
}

/// Source of i.i.d. `(length, reward, coeff)` triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JointCycleSampler {
    /// Length and reward drawn independently (length first).
    Independent {
        length: DistributionSpec,
        reward: DistributionSpec,
    },
    /// Reward is `g(length)`.
    FunctionOfLength {
        length: DistributionSpec,
        reward: RewardFn,
    },
    /// Cycle `min(X, T)` with cost `c_f` on failure (`X <= T`), else `c`.
    AgeReplacement {
        life: DistributionSpec,
        policy: ReplacementPolicy,
    },
    /// Cycle `on + off` (on drawn first) with reward equal to the ON time.
    Alternating {
        on: DistributionSpec,
        off: DistributionSpec,
    },
    /// Unit cycles with zero reward and a coefficient drawn from `coefficient`.
    CauchyTriangle { coefficient: DistributionSpec },
}

impl JointCycleSampler {
    pub fn independent(length: DistributionSpec, reward: DistributionSpec) -> Result<Self> {
        length.validate_role(Role::Interarrival)?;
        Ok(Self::Independent { length, reward })
    }

    pub fn function_of_length(length: DistributionSpec, reward: RewardFn) -> Result<Self> {
        length.validate_role(Role::Interarrival)?;
        Ok(Self::FunctionOfLength { length, reward })
    }

    /// Plain renewal counting: every cycle earns 1.
    pub fn counting(length: DistributionSpec) -> Result<Self> {
        Self::function_of_length(length, RewardFn::Constant(1.0))
    }

    pub fn age_replacement(life: DistributionSpec, policy: ReplacementPolicy) -> Result<Self> {
        life.validate_role(Role::Life)?;
        Ok(Self::AgeReplacement { life, policy })
    }

    pub fn alternating(on: DistributionSpec, off: DistributionSpec) -> Result<Self> {
        on.validate_role(Role::On)?;
        off.validate_role(Role::Off)?;
        Ok(Self::Alternating { on, off })
    }

    /// Unit cycles, zero reward, Cauchy(0, 1) coefficients.
    pub fn cauchy_triangle() -> Self {
        Self::CauchyTriangle {
            coefficient: DistributionSpec::cauchy(0.0, 1.0).expect("valid Cauchy"),
        }
    }

    /// Re-checks length roles; samplers built through the constructors are
    /// always valid, but the enum is public.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Independent { length, .. } | Self::FunctionOfLength { length, .. } => {
                length.validate_role(Role::Interarrival)
            }
            Self::AgeReplacement { life, .. } => life.validate_role(Role::Life),
            Self::Alternating { on, off } => {
                on.validate_role(Role::On)?;
                off.validate_role(Role::Off)
            }
            Self::CauchyTriangle { .. } => Ok(()),
        }
    }

    /// Draws one cycle. Word usage per call: `Independent` and `Alternating`
    /// two, every other kind one.
    pub fn sample(&self, rng: &mut RngStream) -> CycleSample {
        match self {
            Self::Independent { length, reward } => {
                let x = length.sample(rng);
                CycleSample::new(x, reward.sample(rng))
            }
            Self::FunctionOfLength { length, reward } => {
                let x = length.sample(rng);
                CycleSample::new(x, reward.apply(x))
            }
            Self::AgeReplacement { life, policy } => {
                let (x, cost) = policy.cycle(life.sample(rng));
                CycleSample::new(x, cost)
            }
            Self::Alternating { on, off } => {
                let up = on.sample(rng);
                let down = off.sample(rng);
                CycleSample::new(up + down, up)
            }
            Self::CauchyTriangle { coefficient } => CycleSample {
                length: 1.0,
                reward: 0.0,
                coeff: Some(coefficient.sample(rng)),
            },
        }
    }

    /// Whether the reward (or partial coefficient) lacks a finite mean.
    pub fn heavy_tailed(&self) -> bool {
        match self {
            Self::Independent { reward, .. } => reward.heavy_tailed(),
            Self::FunctionOfLength { length, reward } => !reward.expectation(length).is_finite(),
            Self::CauchyTriangle { coefficient } => coefficient.heavy_tailed(),
            _ => false,
        }
    }

    /// `τ = E[X]`.
    pub fn mean_length(&self) -> Moment {
        match self {
            Self::Independent { length, .. } | Self::FunctionOfLength { length, .. } => length.mean(),
            Self::AgeReplacement { life, policy } => life.truncated_mean(policy.preventive_age),
            Self::Alternating { on, off } => match (on.mean(), off.mean()) {
                (Moment::Finite(a), Moment::Finite(b)) => Moment::Finite(a + b),
                _ => Moment::Infinite,
            },
            Self::CauchyTriangle { .. } => Moment::Finite(1.0),
        }
    }

    /// `r = E[R]`.
    pub fn mean_reward(&self) -> Moment {
        match self {
            Self::Independent { reward, .. } => reward.mean(),
            Self::FunctionOfLength { length, reward } => reward.expectation(length),
            Self::AgeReplacement { life, policy } => {
                let fail = life.cdf(policy.preventive_age);
                Moment::Finite(policy.preventive_cost * (1.0 - fail) + policy.failure_cost * fail)
            }
            Self::Alternating { on, .. } => on.mean(),
            Self::CauchyTriangle { .. } => Moment::Finite(0.0),
        }
    }

    /// The long-run rate `r / τ`.
    pub fn long_run_rate(&self) -> Moment {
        match (self.mean_reward(), self.mean_length()) {
            (Moment::Finite(r), Moment::Finite(tau)) => Moment::Finite(r / tau),
            _ => Moment::Undefined,
        }
    }
}

impl fmt::Display for JointCycleSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Independent { length, reward } => write!(f, "independent(x={length}, r={reward})"),
            Self::FunctionOfLength { length, reward } => write!(f, "function(x={length}, r={reward})"),
            Self::AgeReplacement { life, policy } => write!(
                f,
                "age-replacement(life={life}, T={}, c={}, cf={})",
                policy.preventive_age, policy.preventive_cost, policy.failure_cost
            ),
            Self::Alternating { on, off } => write!(f, "alternating(on={on}, off={off})"),
            Self::CauchyTriangle { coefficient } => write!(f, "cauchy-triangle(coeff={coefficient})"),
        }
    }
}

/// Piecewise-linear accrual shape on `[0, 1]` with `shape(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shape {
    breakpoints: Vec<(f64, f64)>,
}

impl Shape {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |reason: &str| Err(Error::arg("shape", reason.to_string()));
        if breakpoints.len() < 2 {
            return bad("needs at least two breakpoints");
        }
        if breakpoints[0] != (0.0, 0.0) {
            return bad("must start at (0, 0)");
        }
        if breakpoints.last().map(|p| p.0) != Some(1.0) {
            return bad("must end at u = 1");
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return bad("breakpoints must be strictly increasing in u");
        }
        if breakpoints.iter().any(|p| !p.1.is_finite()) {
            return bad("values must be finite");
        }
        Ok(Self { breakpoints })
    }

    /// `f(u) = u`: constant-rate accrual.
    pub fn ramp() -> Self {
        Self {
            breakpoints: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    /// `f(u) = u` on `[0, 1/2]`, `1 - u` on `[1/2, 1]`.
    pub fn triangle() -> Self {
        Self {
            breakpoints: vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.0)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let i = self
            .breakpoints
            .partition_point(|p| p.0 <= u)
            .clamp(1, self.breakpoints.len() - 1);
        let (u0, y0) = self.breakpoints[i - 1];
        let (u1, y1) = self.breakpoints[i];
        if u == u0 {
            return y0;
        }
        y0 + (u - u0) * (y1 - y0) / (u1 - u0)
    }

    /// Largest `|f(u)|`.
    pub fn sup_norm(&self) -> f64 {
        self.breakpoints.iter().map(|p| p.1.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Shape::ramp() {
            return write!(f, "ramp");
        }
        if *self == Shape::triangle() {
            return write!(f, "triangle");
        }
        write!(f, "pl:")?;
        for (i, (u, y)) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}/{y}")?;
        }
        Ok(())
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// `ramp`, `triangle`, or `pl:U0/Y0,U1/Y1,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ramp" => Ok(Shape::ramp()),
            "triangle" => Ok(Shape::triangle()),
            other => {
                let body = other
                    .strip_prefix("pl:")
                    .ok_or_else(|| Error::arg("shape", format!("unknown shape `{other}`")))?;
                let points = body
                    .split(',')
                    .map(|pair| {
                        let (u, y) = pair
                            .split_once('/')
                            .ok_or_else(|| Error::arg("shape", format!("bad breakpoint `{pair}`")))?;
                        let num = |v: &str| {
                            v.trim()
                                .parse::<f64>()
                                .map_err(|e| Error::arg("shape", format!("`{v}`: {e}")))
                        };
                        Ok((num(u)?, num(y)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Shape::new(points)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", content = "shape", rename_all = "snake_case")]
pub enum AccrualMode {
    /// `R(t) = Σ_{n <= N(t)} r_n`
    EndOfCycle,
    /// `R(t) = Σ_{n <= N(t)+1} r_n`
    StartOfCycle,
    /// Completed cycles in full plus `coeff · shape(u)` for the current one.
    Partial(Shape),
}

impl fmt::Display for AccrualMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccrualMode::EndOfCycle => write!(f, "end"),
            AccrualMode::StartOfCycle => write!(f, "start"),
            AccrualMode::Partial(shape) => write!(f, "partial:{shape}"),
        }
    }
}

impl FromStr for AccrualMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "end" => Ok(AccrualMode::EndOfCycle),
            "start" => Ok(AccrualMode::StartOfCycle),
            other => match other.strip_prefix("partial:") {
                Some(shape) => Ok(AccrualMode::Partial(shape.parse()?)),
                None => Err(Error::arg("mode", format!("unknown accrual mode `{other}`"))),
            },
        }
    }
}

/// A renewal path with one [`CycleSample`] per cycle, including the overshoot
/// cycle, so `cycles()[n - 1]` belongs to cycle `n`.
#[derive(Debug, Clone)]
pub struct RewardedPath {
    path: RenewalPath,
    cycles: Vec<CycleSample>,
    /// `prefix[k] = r_1 + ... + r_k`, summed left to right.
    prefix: Vec<f64>,
    heavy_tailed: bool,
    sampler: String,
}

impl RewardedPath {
    fn assemble(path: RenewalPath, cycles: Vec<CycleSample>, heavy_tailed: bool, sampler: String) -> Self {
        debug_assert_eq!(path.all_epochs().len(), cycles.len());
        let mut prefix = Vec::with_capacity(cycles.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for c in &cycles {
            acc += c.reward;
            prefix.push(acc);
        }
        Self {
            path,
            cycles,
            prefix,
            heavy_tailed,
            sampler,
        }
    }

    pub fn path(&self) -> &RenewalPath {
        &self.path
    }

    /// All cycles, the last one being the overshoot cycle.
    pub fn cycles(&self) -> &[CycleSample] {
        &self.cycles
    }

    /// Cycles completed within the horizon.
    pub fn complete_cycles(&self) -> &[CycleSample] {
        &self.cycles[..self.path.renewals()]
    }

    pub fn heavy_tailed(&self) -> bool {
        self.heavy_tailed
    }

    /// Human-readable sampler description for provenance.
    pub fn sampler(&self) -> &str {
        &self.sampler
    }

    /// `R(t)` under `mode`.
    pub fn cumulative_reward(&self, mode: &AccrualMode, t: f64) -> Result<f64> {
        let n = self.path.count(t)?;
        Ok(match mode {
            AccrualMode::EndOfCycle => self.prefix[n],
            AccrualMode::StartOfCycle => self.prefix[n + 1],
            AccrualMode::Partial(shape) => {
                let start = self.path.epoch(n);
                let u = (t - start) / (self.path.epoch(n + 1) - start);
                self.prefix[n] + self.cycles[n].partial_coeff() * shape.eval(u)
            }
        })
    }

    /// `R(t) / t`.
    pub fn reward_rate(&self, mode: &AccrualMode, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::arg("t", "reward rate needs t > 0"));
        }
        Ok(self.cumulative_reward(mode, t)? / t)
    }

    /// Same path with every reward replaced by `max(r_n, -m)`.
    pub fn truncated(&self, m: f64) -> Result<Self> {
        Ok(Self::assemble(
            self.path.clone(),
            truncate(&self.cycles, m)?,
            self.heavy_tailed,
            format!("{} truncated at -{m}", self.sampler),
        ))
    }
}

/// `r_n^M = max(r_n, -M)`; lengths and coefficients unchanged.
pub fn truncate(cycles: &[CycleSample], m: f64) -> Result<Vec<CycleSample>> {
    if !(m > 0.0) {
        return Err(Error::arg("M", format!("truncation level must be > 0, got {m}")));
    }
    Ok(cycles
        .iter()
        .map(|c| CycleSample {
            reward: c.reward.max(-m),
            ..*c
        })
        .collect())
}

/// Draws cycles until the first epoch beyond `t_max`.
pub fn realize_rewarded_path(
    sampler: &JointCycleSampler,
    t_max: f64,
    rng: &mut RngStream,
) -> Result<RewardedPath> {
    realize(None, sampler, t_max, rng)
}

/// Delayed variant: the first cycle comes from `first`, the rest from `rest`.
pub fn realize_delayed_rewarded_path(
    first: &JointCycleSampler,
    rest: &JointCycleSampler,
    t_max: f64,
    rng: &mut RngStream,
) -> Result<RewardedPath> {
    realize(Some(first), rest, t_max, rng)
}

fn realize(
    first: Option<&JointCycleSampler>,
    sampler: &JointCycleSampler,
    t_max: f64,
    rng: &mut RngStream,
) -> Result<RewardedPath> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::arg("t_max", format!("must be finite and > 0, got {t_max}")));
    }
    sampler.validate()?;
    if let Some(f) = first {
        f.validate()?;
    }
    let provenance = rng.clone();
    let mut cycles = Vec::new();
    let mut pending_first = first;
    let path = RenewalPath::build(t_max, first.is_some(), &provenance, || {
        let c = match pending_first.take() {
            Some(f) => f.sample(rng),
            None => sampler.sample(rng),
        };
        cycles.push(c);
        c.length
    });
    let heavy = sampler.heavy_tailed() || first.is_some_and(|f| f.heavy_tailed());
    let description = match first {
        Some(f) => format!("delayed(first={f}, rest={sampler})"),
        None => sampler.to_string(),
    };
    Ok(RewardedPath::assemble(path, cycles, heavy, description))
}

/// Exactly `n` i.i.d. cycles, without building a path.
pub fn sample_cycles(sampler: &JointCycleSampler, n: usize, rng: &mut RngStream) -> Result<Vec<CycleSample>> {
    sampler.validate()?;
    Ok((0..n).map(|_| sampler.sample(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DistributionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn independent_lattice() {
        let s = JointCycleSampler::independent(d("det:1"), d("det:3")).unwrap();
        let rp = realize_rewarded_path(&s, 4.5, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(rp.path().epochs(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(rp.cycles().len(), 5);
        assert!(rp.cycles().iter().all(|c| c.length == 1.0 && c.reward == 3.0));
        assert_eq!(rp.complete_cycles().len(), 4);
    }

    #[test]
    fn cauchy_triangle_cycles() {
        let s = JointCycleSampler::cauchy_triangle();
        let mut rng = RngStream::new(11, 0);
        let rp = realize_rewarded_path(&s, 3.5, &mut rng).unwrap();
        assert_eq!(rp.cycles().len(), 4);
        assert_eq!(rng.words_consumed(), 4);
        assert!(rp.cycles().iter().all(|c| c.length == 1.0 && c.reward == 0.0 && c.coeff.is_some()));
        assert!(rp.heavy_tailed());
    }

    #[test]
    fn zero_at_time_zero() {
        let s = JointCycleSampler::independent(d("exp:1"), d("unif:-1,2")).unwrap();
        let rp = realize_rewarded_path(&s, 10.0, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(rp.cumulative_reward(&AccrualMode::EndOfCycle, 0.0).unwrap(), 0.0);
        assert_eq!(rp.cumulative_reward(&AccrualMode::Partial(Shape::ramp()), 0.0).unwrap(), 0.0);
        assert_eq!(
            rp.cumulative_reward(&AccrualMode::StartOfCycle, 0.0).unwrap(),
            rp.cycles()[0].reward
        );
    }

    #[test]
    fn triangle_counterexample_values() {
        let rp = realize_rewarded_path(&JointCycleSampler::cauchy_triangle(), 20.0, &mut RngStream::new(3, 0))
            .unwrap();
        let mode = AccrualMode::Partial(Shape::triangle());
        let c1 = rp.cycles()[0].coeff.unwrap();
        assert_eq!(rp.cumulative_reward(&mode, 0.5).unwrap(), c1 / 2.0);
        assert_eq!(rp.cumulative_reward(&mode, 0.25).unwrap(), c1 * 0.25);
        for k in 0..=20 {
            assert_eq!(rp.cumulative_reward(&mode, k as f64).unwrap(), 0.0);
        }
    }

    #[test]
    fn ramp_telescopes_at_epochs() {
        let s = JointCycleSampler::function_of_length(d("exp:1"), RewardFn::Square).unwrap();
        let rp = realize_rewarded_path(&s, 50.0, &mut RngStream::new(8, 0)).unwrap();
        let ramp = AccrualMode::Partial(Shape::ramp());
        for (n, &s) in rp.path().epochs().iter().enumerate() {
            let partial = rp.cumulative_reward(&ramp, s).unwrap();
            let end = rp.cumulative_reward(&AccrualMode::EndOfCycle, s).unwrap();
            assert_eq!(partial, end, "epoch {}", n + 1);
        }
    }

    #[test]
    fn truncation_examples() {
        let cycles = vec![CycleSample::new(1.0, -5.0), CycleSample::new(1.0, 3.0)];
        let t = truncate(&cycles, 2.0).unwrap();
        assert_eq!(t[0].reward, -2.0);
        assert_eq!(t[1].reward, 3.0);
        assert!(truncate(&cycles, 0.0).is_err());
    }

    #[test]
    fn rate_lattice_exact() {
        let s = JointCycleSampler::independent(d("det:1"), d("det:3")).unwrap();
        let rp = realize_rewarded_path(&s, 100.0, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(rp.reward_rate(&AccrualMode::EndOfCycle, 100.0).unwrap(), 3.0);
        assert!(rp.reward_rate(&AccrualMode::EndOfCycle, 0.0).is_err());
        assert!(matches!(
            rp.cumulative_reward(&AccrualMode::EndOfCycle, 100.5),
            Err(Error::OutOfHorizon { .. })
        ));
    }

    #[test]
    fn shapes() {
        let tri = Shape::triangle();
        assert_eq!(tri.eval(0.0), 0.0);
        assert_eq!(tri.eval(0.25), 0.25);
        assert_eq!(tri.eval(0.5), 0.5);
        assert_eq!(tri.eval(0.75), 0.25);
        assert_eq!(tri.eval(1.0), 0.0);
        assert_eq!("pl:0/0,0.5/0.5,1/0".parse::<Shape>().unwrap(), tri);
        assert!("pl:0/1,1/0".parse::<Shape>().is_err());
        assert!("pl:0/0,0.5/1,0.5/0,1/0".parse::<Shape>().is_err());
        assert_eq!(tri.to_string(), "triangle");
    }

    #[test]
    fn modes_parse() {
        assert_eq!("end".parse::<AccrualMode>().unwrap(), AccrualMode::EndOfCycle);
        assert_eq!(
            "partial:triangle".parse::<AccrualMode>().unwrap(),
            AccrualMode::Partial(Shape::triangle())
        );
        assert!("middle".parse::<AccrualMode>().is_err());
        for m in ["end", "start", "partial:ramp", "partial:pl:0/0,0.3/2,1/1"] {
            assert_eq!(m.parse::<AccrualMode>().unwrap().to_string(), m);
        }
    }

    #[test]
    fn analytic_rates() {
        let s = JointCycleSampler::function_of_length(d("exp:1"), RewardFn::Square).unwrap();
        assert_eq!(s.long_run_rate(), Moment::Finite(2.0));
        assert_eq!(JointCycleSampler::cauchy_triangle().long_run_rate(), Moment::Finite(0.0));
        let alt = JointCycleSampler::alternating(d("exp:1"), d("exp:0.5")).unwrap();
        assert!((alt.long_run_rate().finite().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_role_rejected() {
        assert!(matches!(
            JointCycleSampler::independent(d("cauchy:0,1"), d("det:1")),
            Err(Error::InvalidRole { .. })
        ));
        let raw = JointCycleSampler::FunctionOfLength {
            length: d("pareto:0.8,1"),
            reward: RewardFn::Identity,
        };
        assert!(realize_rewarded_path(&raw, 10.0, &mut RngStream::new(0, 0)).is_err());
    }
}
