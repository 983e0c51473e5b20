//! Simulation and estimation toolkit for renewal reward processes.
//!
//! The crate is organised bottom-up:
//!
//! * [`distributions`] and [`rng`]: parametric laws sampled by inverse
//!   transform from reproducible ChaCha8 streams.
//! * [`renewal`]: renewal paths with exact counting, age, residual-life and
//!   spread evaluation.
//! * [`reward`]: joint cycle samplers and the cumulative reward `R(t)` under
//!   end-of-cycle, start-of-cycle and partial accrual.
//! * [`estimators`]: pathwise and ensemble reward-rate estimators, the
//!   regenerative ratio estimator, Wald checks and the a.s.-versus-mean demo.
//! * [`models`]: turnkey experiments (age replacement, alternating renewal,
//!   age/excess averages, GI/GI/1 Little's law, Cauchy partial-reward
//!   counterexample).
//!
//! Ensemble work runs on rayon when the `parallel` feature is enabled (the
//! default) and falls back to a sequential loop otherwise. Results are reduced
//! in replication-index order, so both paths give bit-identical output.

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod export;
pub mod models;
pub mod optimize;
pub mod renewal;
pub mod reward;
pub mod rng;
pub mod stats;

pub use distributions::{DistributionSpec, Family, Moment, Role};
pub use error::{Error, Result};
pub use exec::Execution;
pub use renewal::{Process, RenewalPath};
pub use reward::{AccrualMode, CycleSample, JointCycleSampler, RewardFn, RewardedPath, Shape};
pub use rng::RngStream;

/// Crate version embedded in experiment provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
