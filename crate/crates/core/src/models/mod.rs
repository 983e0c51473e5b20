//! Turnkey experiments built on the renewal and reward engines.

mod age_excess;
mod alternating;
mod counterexample;
mod queue;
mod replacement;

pub use age_excess::{age_excess, AgeExcessReport};
pub use alternating::{alternating_on_fraction, off_time, on_time, AlternatingReport};
pub use counterexample::{cauchy_counterexample, CounterexampleReport, Probe};
pub use queue::{gg1_simulate, little_check, CustomerRecord, LittleReport, QueueCycle, QueueTrace, DEFAULT_EVENT_CAP};
pub use replacement::{
    optimize_replacement, replacement_cost_rate, simulate_replacement, Boundary, ReplacementOptimum,
    ReplacementPolicy, ReplacementSimulation,
};
