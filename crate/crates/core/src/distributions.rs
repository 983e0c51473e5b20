//! Parametric distribution families.
//!
//! Every family is sampled by inverse transform from a single uniform draw,
//! so a call to [`DistributionSpec::sample`] always advances its stream by
//! exactly one 64-bit word. Moments that do not exist are reported as
//! [`Moment::Undefined`] or [`Moment::Infinite`] instead of NaN.
//!
//! The text literal form (`exp:2`, `unif:0,1`, `twopoint:0.5,0,2`, ...) is
//! accepted by [`str::parse`] and produced by `Display`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Deterministic {
        value: f64,
    },
    Exponential {
        rate: f64,
    },
    Uniform {
        low: f64,
        high: f64,
    },
    Pareto {
        shape: f64,
        scale: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    Cauchy {
        location: f64,
        scale: f64,
    },
    /// Mass `w0 / (w0 + w1)` at `x0` and `w1 / (w0 + w1)` at `x1`.
    ///
    /// Weights rather than a single probability keep laws such as
    /// `P[Y = n + 1] = 1 / (n + 1)` exact: with `w0 = n`, `w1 = 1` the mean
    /// `(w0 x0 + w1 x1) / (w0 + w1)` is computed without cancellation.
    TwoPoint {
        w0: f64,
        w1: f64,
        x0: f64,
        x1: f64,
    },
}

/// A moment that may fail to exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Moment {
    Finite(f64),
    /// Exists as `+inf` (e.g. the Pareto mean with shape <= 1).
    Infinite,
    /// No well-defined value (e.g. the Cauchy mean).
    Undefined,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Moment::Finite(_))
    }
}

/// The part a distribution plays in a model. Every role requires support in
/// `(0, inf)` and a finite mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Interarrival,
    FirstCycle,
    Service,
    On,
    Off,
    Life,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Interarrival => "interarrival time",
            Role::FirstCycle => "first-cycle length",
            Role::Service => "service time",
            Role::On => "ON time",
            Role::Off => "OFF time",
            Role::Life => "component life",
        }
    }
}

/// A validated distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DistributionSpec {
    family: Family,
}

fn invalid(family: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family,
        reason: reason.into(),
    }
}

fn finite(family: &'static str, name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(family, format!("{name} must be finite, got {v}")))
    }
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Deterministic { value } => finite("det", "value", value)?,
            Family::Exponential { rate } => {
                finite("exp", "rate", rate)?;
                if rate <= 0.0 {
                    return Err(invalid("exp", format!("rate must be > 0, got {rate}")));
                }
            }
            Family::Uniform { low, high } => {
                finite("unif", "low", low)?;
                finite("unif", "high", high)?;
                if low >= high {
                    return Err(invalid("unif", format!("need low < high, got {low} >= {high}")));
                }
            }
            Family::Pareto { shape, scale } => {
                finite("pareto", "shape", shape)?;
                finite("pareto", "scale", scale)?;
                if shape <= 0.0 || scale <= 0.0 {
                    return Err(invalid("pareto", "shape and scale must be > 0"));
                }
            }
            Family::Lognormal { mu, sigma } => {
                finite("lognorm", "mu", mu)?;
                finite("lognorm", "sigma", sigma)?;
                if sigma <= 0.0 {
                    return Err(invalid("lognorm", format!("sigma must be > 0, got {sigma}")));
                }
            }
            Family::Cauchy { location, scale } => {
                finite("cauchy", "location", location)?;
                finite("cauchy", "scale", scale)?;
                if scale <= 0.0 {
                    return Err(invalid("cauchy", format!("scale must be > 0, got {scale}")));
                }
            }
            Family::TwoPoint { w0, w1, x0, x1 } => {
                for (name, v) in [("w0", w0), ("w1", w1), ("x0", x0), ("x1", x1)] {
                    finite("twopoint", name, v)?;
                }
                if w0 < 0.0 || w1 < 0.0 || w0 + w1 <= 0.0 {
                    return Err(invalid("twopoint", "weights must be >= 0 with a positive sum"));
                }
            }
        }
        Ok(Self { family })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        Self::new(Family::Deterministic { value })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        Self::new(Family::Exponential { rate })
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        Self::new(Family::Uniform { low, high })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Pareto { shape, scale })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Lognormal { mu, sigma })
    }

    pub fn cauchy(location: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Cauchy { location, scale })
    }

    /// `P[X = x0] = p`, `P[X = x1] = 1 - p`.
    pub fn two_point(p: f64, x0: f64, x1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("twopoint", format!("p must lie in [0, 1], got {p}")));
        }
        Self::new(Family::TwoPoint {
            w0: p,
            w1: 1.0 - p,
            x0,
            x1,
        })
    }

    /// Two-point law given by unnormalised weights.
    pub fn two_point_weighted(w0: f64, w1: f64, x0: f64, x1: f64) -> Result<Self> {
        Self::new(Family::TwoPoint { w0, w1, x0, x1 })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Inverse of the distribution function at `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        match self.family {
            Family::Deterministic { value } => value,
            Family::Exponential { rate } => -(-u).ln_1p() / rate,
            Family::Uniform { low, high } => low + (high - low) * u,
            Family::Pareto { shape, scale } => scale * (1.0 - u).powf(-1.0 / shape),
            Family::Lognormal { mu, sigma } => (mu + sigma * standard_normal_quantile(u)).exp(),
            Family::Cauchy { location, scale } => location + scale * (PI * (u - 0.5)).tan(),
            Family::TwoPoint { w0, w1, x0, x1 } => {
                if u < w0 / (w0 + w1) {
                    x0
                } else {
                    x1
                }
            }
        }
    }

    /// One variate; consumes exactly one word of `rng`.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.uniform();
        self.quantile(u)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Deterministic { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Family::Uniform { low, high } => ((x - low) / (high - low)).clamp(0.0, 1.0),
            Family::Pareto { shape, scale } => {
                if x <= scale {
                    0.0
                } else {
                    1.0 - (scale / x).powf(shape)
                }
            }
            Family::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    standard_normal_cdf((x.ln() - mu) / sigma)
                }
            }
            Family::Cauchy { location, scale } => 0.5 + ((x - location) / scale).atan() / PI,
            Family::TwoPoint { w0, w1, x0, x1 } => {
                let mut mass = 0.0;
                if x >= x0 {
                    mass += w0;
                }
                if x >= x1 {
                    mass += w1;
                }
                mass / (w0 + w1)
            }
        }
    }

    pub fn mean(&self) -> Moment {
        match self.family {
            Family::Deterministic { value } => Moment::Finite(value),
            Family::Exponential { rate } => Moment::Finite(1.0 / rate),
            Family::Uniform { low, high } => Moment::Finite(0.5 * (low + high)),
            Family::Pareto { shape, scale } => {
                if shape > 1.0 {
                    Moment::Finite(shape * scale / (shape - 1.0))
                } else {
                    Moment::Infinite
                }
            }
            Family::Lognormal { mu, sigma } => Moment::Finite((mu + 0.5 * sigma * sigma).exp()),
            Family::Cauchy { .. } => Moment::Undefined,
            Family::TwoPoint { w0, w1, x0, x1 } => Moment::Finite((w0 * x0 + w1 * x1) / (w0 + w1)),
        }
    }

    pub fn second_moment(&self) -> Moment {
        match self.family {
            Family::Deterministic { value } => Moment::Finite(value * value),
            Family::Exponential { rate } => Moment::Finite(2.0 / (rate * rate)),
            Family::Uniform { low, high } => {
                Moment::Finite((low * low + low * high + high * high) / 3.0)
            }
            Family::Pareto { shape, scale } => {
                if shape > 2.0 {
                    Moment::Finite(shape * scale * scale / (shape - 2.0))
                } else {
                    Moment::Infinite
                }
            }
            Family::Lognormal { mu, sigma } => Moment::Finite((2.0 * mu + 2.0 * sigma * sigma).exp()),
            // E[X^2] diverges to +inf, but the Cauchy law has no first moment
            // either; report the stronger statement.
            Family::Cauchy { .. } => Moment::Undefined,
            Family::TwoPoint { w0, w1, x0, x1 } => {
                Moment::Finite((w0 * x0 * x0 + w1 * x1 * x1) / (w0 + w1))
            }
        }
    }

    pub fn variance(&self) -> Moment {
        match (self.mean(), self.second_moment()) {
            (Moment::Finite(m), Moment::Finite(s)) => Moment::Finite((s - m * m).max(0.0)),
            (_, Moment::Undefined) | (Moment::Undefined, _) => Moment::Undefined,
            _ => Moment::Infinite,
        }
    }

    /// `E[min(X, T)]`, i.e. `∫_0^T (1 - F(u)) du` for non-negative laws, in
    /// closed form for every family.
    pub fn truncated_mean(&self, horizon: f64) -> Moment {
        if horizon.is_infinite() && horizon > 0.0 {
            return self.mean();
        }
        let t = horizon;
        match self.family {
            Family::Deterministic { value } => Moment::Finite(value.min(t)),
            Family::Exponential { rate } => {
                if t <= 0.0 {
                    Moment::Finite(t)
                } else {
                    Moment::Finite(-(-rate * t).exp_m1() / rate)
                }
            }
            Family::Uniform { low, high } => {
                if t <= low {
                    Moment::Finite(t)
                } else if t >= high {
                    Moment::Finite(0.5 * (low + high))
                } else {
                    let w = high - low;
                    let tail = high - t;
                    Moment::Finite(low + (w * w - tail * tail) / (2.0 * w))
                }
            }
            Family::Pareto { shape, scale } => {
                if t <= scale {
                    Moment::Finite(t)
                } else if (shape - 1.0).abs() < 1e-12 {
                    Moment::Finite(scale + scale * (t / scale).ln())
                } else {
                    let tail = 1.0 - (scale / t).powf(shape - 1.0);
                    Moment::Finite(scale + scale * tail / (shape - 1.0))
                }
            }
            Family::Lognormal { mu, sigma } => {
                if t <= 0.0 {
                    return Moment::Finite(t);
                }
                let z = (t.ln() - mu) / sigma;
                let partial = (mu + 0.5 * sigma * sigma).exp() * standard_normal_cdf(z - sigma);
                Moment::Finite(partial + t * standard_normal_cdf(-z))
            }
            Family::Cauchy { .. } => Moment::Undefined,
            Family::TwoPoint { w0, w1, x0, x1 } => {
                Moment::Finite((w0 * x0.min(t) + w1 * x1.min(t)) / (w0 + w1))
            }
        }
    }

    /// Smallest point of the support.
    pub fn support_min(&self) -> f64 {
        match self.family {
            Family::Deterministic { value } => value,
            Family::Exponential { .. } | Family::Lognormal { .. } => 0.0,
            Family::Uniform { low, .. } => low,
            Family::Pareto { scale, .. } => scale,
            Family::Cauchy { .. } => f64::NEG_INFINITY,
            Family::TwoPoint { w0, w1, x0, x1 } => match (w0 > 0.0, w1 > 0.0) {
                (true, true) => x0.min(x1),
                (true, false) => x0,
                _ => x1,
            },
        }
    }

    /// Largest point of the support.
    pub fn support_max(&self) -> f64 {
        match self.family {
            Family::Deterministic { value } => value,
            Family::Uniform { high, .. } => high,
            Family::TwoPoint { w0, w1, x0, x1 } => match (w0 > 0.0, w1 > 0.0) {
                (true, true) => x0.max(x1),
                (true, false) => x0,
                _ => x1,
            },
            _ => f64::INFINITY,
        }
    }

    /// Checks that the law can serve as a time in `role`: supported on
    /// `(0, inf)` with a finite mean. Continuous laws whose support closes at
    /// 0 (exponential, `unif:0,b`) are accepted since 0 has probability zero
    /// and the sampler never returns it.
    pub fn validate_role(&self, role: Role) -> Result<()> {
        let fail = |reason| Error::InvalidRole {
            role: role.name(),
            dist: self.to_string(),
            reason,
        };
        if matches!(self.family, Family::Cauchy { .. }) {
            return Err(fail("Cauchy law has unbounded support and no mean"));
        }
        let positive = match self.family {
            Family::Deterministic { value } => value > 0.0,
            Family::Uniform { low, .. } => low >= 0.0,
            Family::TwoPoint { .. } => self.support_min() > 0.0,
            _ => true,
        };
        if !positive {
            return Err(fail("support must lie in (0, inf)"));
        }
        if !self.mean().is_finite() {
            return Err(fail("mean must be finite"));
        }
        Ok(())
    }

    /// True when the law has no finite first moment.
    pub fn heavy_tailed(&self) -> bool {
        !self.mean().is_finite()
    }
}

/// `Φ(z)` via the complementary error function.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

pub fn standard_normal_quantile(u: f64) -> f64 {
    Normal::standard().inverse_cdf(u)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Deterministic { value } => write!(f, "det:{value}"),
            Family::Exponential { rate } => write!(f, "exp:{rate}"),
            Family::Uniform { low, high } => write!(f, "unif:{low},{high}"),
            Family::Pareto { shape, scale } => write!(f, "pareto:{shape},{scale}"),
            Family::Lognormal { mu, sigma } => write!(f, "lognorm:{mu},{sigma}"),
            Family::Cauchy { location, scale } => write!(f, "cauchy:{location},{scale}"),
            Family::TwoPoint { w0, w1, x0, x1 } => {
                write!(f, "twopoint:{},{x0},{x1}", w0 / (w0 + w1))
            }
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(literal: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            literal: literal.to_string(),
            reason,
        };
        let (name, args) = literal
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err("expected FAMILY:PARAMS".into()))?;
        let values = args
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| parse_err(format!("`{}`: {e}", s.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arity = |n: usize| {
            if values.len() == n {
                Ok(())
            } else {
                Err(parse_err(format!("{name} takes {n} parameter(s), got {}", values.len())))
            }
        };
        let spec = match name.trim() {
            "det" => {
                arity(1)?;
                Self::deterministic(values[0])
            }
            "exp" => {
                arity(1)?;
                Self::exponential(values[0])
            }
            "unif" => {
                arity(2)?;
                Self::uniform(values[0], values[1])
            }
            "pareto" => {
                arity(2)?;
                Self::pareto(values[0], values[1])
            }
            "lognorm" => {
                arity(2)?;
                Self::lognormal(values[0], values[1])
            }
            "cauchy" => {
                arity(2)?;
                Self::cauchy(values[0], values[1])
            }
            "twopoint" => {
                arity(3)?;
                Self::two_point(values[0], values[1], values[2])
            }
            other => return Err(parse_err(format!("unknown family `{other}`"))),
        };
        spec.map_err(|e| parse_err(e.to_string()))
    }
}
