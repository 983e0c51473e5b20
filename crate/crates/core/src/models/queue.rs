//! GI/GI/1 FIFO queue simulated event by event, split into regeneration
//! cycles that start whenever an arrival finds the system empty.
//!
//! The queue-length integral of every cycle is accumulated from the event
//! clock (`n · Δt` between events) and, independently, the sojourn times are
//! read off the customer records. The two agree up to rounding because both
//! count the time every customer spends in the system.

use std::collections::VecDeque;

use serde::Serialize;

use crate::distributions::{DistributionSpec, Role};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Default cap on customers in a single regeneration cycle.
pub const DEFAULT_EVENT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CustomerRecord {
    pub arrival: f64,
    pub service_start: f64,
    pub departure: f64,
    pub sojourn: f64,
    pub cycle_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueueCycle {
    pub start: f64,
    /// `C`, the time until the next arrival to an empty system.
    pub length: f64,
    /// `∫ n(y) dy` over the cycle, from the event clock.
    pub area: f64,
    /// `N`, customers arriving in the cycle.
    pub customers: usize,
    /// `T_1 + ... + T_N` from the customer records.
    pub sojourn_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueueTrace {
    /// Customers of the complete cycles, in arrival (= departure) order.
    pub customers: Vec<CustomerRecord>,
    pub cycles: Vec<QueueCycle>,
    /// `λ = 1 / E[interarrival]`.
    pub arrival_rate: f64,
    /// `E[service] / E[interarrival]`.
    pub traffic_intensity: f64,
    pub seed: u64,
}

/// Simulates until `n_cycles` regeneration cycles are complete, starting
/// with an arrival to an empty system at time 0. Interarrival times come
/// from stream 0 of `seed`, service times from stream 1. A departure and an
/// arrival at the same instant are processed departure first.
pub fn gg1_simulate(
    arrival: &DistributionSpec,
    service: &DistributionSpec,
    n_cycles: usize,
    seed: u64,
    event_cap: usize,
) -> Result<QueueTrace> {
    arrival.validate_role(Role::Interarrival)?;
    service.validate_role(Role::Service)?;
    if n_cycles == 0 {
        return Err(Error::arg("n_cycles", "must be >= 1"));
    }
    let mean_a = arrival.mean().finite().expect("validated");
    let mean_s = service.mean().finite().expect("validated");
    let rho = mean_s / mean_a;
    if rho >= 1.0 {
        return Err(Error::Unstable { rho });
    }

    let mut arrivals = RngStream::new(seed, 0);
    let mut services = RngStream::new(seed, 1);

    let mut customers: Vec<CustomerRecord> = Vec::new();
    let mut service_times: Vec<f64> = Vec::new();
    let mut in_system: VecDeque<usize> = VecDeque::new();
    let mut cycles: Vec<QueueCycle> = Vec::with_capacity(n_cycles);

    let mut clock = 0.0;
    let mut next_arrival = 0.0;
    let mut next_departure: Option<f64> = None;
    let mut cycle_start = 0.0;
    let mut cycle_first = 0usize;
    let mut area = 0.0;

    loop {
        match next_departure {
            Some(dep) if dep <= next_arrival => {
                area += in_system.len() as f64 * (dep - clock);
                clock = dep;
                let done = in_system.pop_front().expect("departure from empty system");
                let rec = &mut customers[done];
                rec.departure = dep;
                rec.sojourn = dep - rec.arrival;
                next_departure = in_system.front().map(|&next| {
                    customers[next].service_start = clock;
                    clock + service_times[next]
                });
            }
            _ => {
                area += in_system.len() as f64 * (next_arrival - clock);
                clock = next_arrival;
                if in_system.is_empty() && !customers.is_empty() {
                    let members = &customers[cycle_first..];
                    cycles.push(QueueCycle {
                        start: cycle_start,
                        length: clock - cycle_start,
                        area,
                        customers: members.len(),
                        sojourn_sum: members.iter().map(|c| c.sojourn).sum(),
                    });
                    if cycles.len() == n_cycles {
                        break;
                    }
                    cycle_start = clock;
                    cycle_first = customers.len();
                    area = 0.0;
                }
                if customers.len() - cycle_first >= event_cap {
                    return Err(Error::NonConvergence { cap: event_cap });
                }
                let id = customers.len();
                customers.push(CustomerRecord {
                    arrival: clock,
                    service_start: f64::NAN,
                    departure: f64::NAN,
                    sojourn: f64::NAN,
                    cycle_id: cycles.len(),
                });
                service_times.push(service.sample(&mut services));
                in_system.push_back(id);
                if in_system.len() == 1 {
                    customers[id].service_start = clock;
                    next_departure = Some(clock + service_times[id]);
                }
                next_arrival = clock + arrival.sample(&mut arrivals);
            }
        }
    }

    Ok(QueueTrace {
        customers,
        cycles,
        arrival_rate: 1.0 / mean_a,
        traffic_intensity: rho,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LittleReport {
    /// `Σ area / Σ C`
    pub l_hat: f64,
    /// `Σ N / Σ C`
    pub lambda_hat: f64,
    /// `Σ T_i / Σ N`
    pub t_hat: f64,
    /// `|L̂ - λ̂ T̂| / L̂`
    pub relative_gap: f64,
    /// `|Σ area - Σ T_i|` over complete cycles.
    pub identity_residual: f64,
    /// `identity_residual / Σ T_i`
    pub identity_residual_relative: f64,
    /// Largest per-cycle `|area - Σ T_i| / Σ T_i`.
    pub max_cycle_residual_relative: f64,
    pub mean_cycle_length: f64,
    pub mean_customers: f64,
    /// `|mean(C) · λ - mean(N)| / mean(N)` with the analytic arrival rate.
    pub wald_gap: f64,
    pub n_cycles: usize,
}

pub fn little_check(trace: &QueueTrace) -> Result<LittleReport> {
    if trace.cycles.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let k = trace.cycles.len() as f64;
    let total_len: f64 = trace.cycles.iter().map(|c| c.length).sum();
    let total_area: f64 = trace.cycles.iter().map(|c| c.area).sum();
    let total_n: usize = trace.cycles.iter().map(|c| c.customers).sum();
    let total_sojourn: f64 = trace.cycles.iter().map(|c| c.sojourn_sum).sum();

    let l_hat = total_area / total_len;
    let lambda_hat = total_n as f64 / total_len;
    let t_hat = total_sojourn / total_n as f64;
    let identity_residual = (total_area - total_sojourn).abs();
    let max_cycle_residual_relative = trace
        .cycles
        .iter()
        .map(|c| (c.area - c.sojourn_sum).abs() / c.sojourn_sum)
        .fold(0.0, f64::max);
    let mean_cycle_length = total_len / k;
    let mean_customers = total_n as f64 / k;
    Ok(LittleReport {
        l_hat,
        lambda_hat,
        t_hat,
        relative_gap: (l_hat - lambda_hat * t_hat).abs() / l_hat,
        identity_residual,
        identity_residual_relative: identity_residual / total_sojourn,
        max_cycle_residual_relative,
        mean_cycle_length,
        mean_customers,
        wald_gap: (mean_cycle_length * trace.arrival_rate - mean_customers).abs() / mean_customers,
        n_cycles: trace.cycles.len(),
    })
}
