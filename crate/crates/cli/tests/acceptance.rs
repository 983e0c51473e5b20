//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed here and must not be loosened.

use std::process::{Command, ExitCode};

use serde_json::Value;

use renewalkit::estimators::{as_vs_mean_demo, ensemble_mean_rate, regenerative_ratio, wald_check, y_law};
use renewalkit::models::{
    age_excess, alternating_on_fraction, cauchy_counterexample, gg1_simulate, little_check, optimize_replacement,
    simulate_replacement, ReplacementPolicy, DEFAULT_EVENT_CAP,
};
use renewalkit::reward::{realize_rewarded_path, sample_cycles, truncate};
use renewalkit::{AccrualMode, DistributionSpec, Execution, JointCycleSampler, Moment, RewardFn, RngStream, Shape};

fn d(s: &str) -> DistributionSpec {
    s.parse().unwrap()
}

fn squared_exp() -> JointCycleSampler {
    JointCycleSampler::function_of_length(d("exp:1"), RewardFn::Square).unwrap()
}

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, f: impl FnOnce() -> Result<String, String>) {
        match f() {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL criterion {id:>2} {name}: {detail}");
            }
        }
    }
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Fraction of 20 seeds with `|R(t)/t - 2| < 0.05` for Exp(2) lengths, unit
/// reward and the given accrual mode at t = 1e4.
fn elementary_renewal_hits(mode: &AccrualMode) -> usize {
    let s = JointCycleSampler::counting(d("exp:2")).unwrap();
    (0..20)
        .filter(|&seed| {
            let rp = realize_rewarded_path(&s, 1e4, &mut RngStream::new(seed, 0)).unwrap();
            (rp.reward_rate(mode, 1e4).unwrap() - 2.0).abs() < 0.05
        })
        .count()
}

fn c1() -> Result<String, String> {
    let hits = elementary_renewal_hits(&AccrualMode::EndOfCycle);
    ensure(hits >= 19, format!("{hits}/20 seeds within 0.05 of 2"))
}

fn c2() -> Result<String, String> {
    let rp = realize_rewarded_path(&squared_exp(), 1e5, &mut RngStream::new(2, 0)).unwrap();
    let rate = rp.reward_rate(&AccrualMode::EndOfCycle, 1e5).unwrap();
    // oracle E[X²]/E[X] for Exp(1)
    let oracle = 2.0 / 1.0;
    ensure((rate - oracle).abs() < 0.1, format!("R(t)/t = {rate:.5}, oracle {oracle}"))
}

fn c3() -> Result<String, String> {
    let e = ensemble_mean_rate(&squared_exp(), &AccrualMode::EndOfCycle, 1e3, 200, 3, Execution::default()).unwrap();
    let covered = (0..100)
        .filter(|&seed| {
            let c = sample_cycles(&squared_exp(), 10_000, &mut RngStream::new(seed, 0)).unwrap();
            regenerative_ratio(&c).unwrap().covers(2.0)
        })
        .count();
    ensure(
        (e.point - 2.0).abs() < 0.15 && covered >= 90,
        format!("ensemble mean {:.5}; CI covered 2.0 in {covered}/100 sweeps", e.point),
    )
}

fn c4() -> Result<String, String> {
    let s = JointCycleSampler::independent(d("exp:1"), d("unif:-150,50")).unwrap();
    let levels = [1.0, 10.0, 100.0];
    let mut probes = 0usize;
    for seed in 0..10 {
        let rp = realize_rewarded_path(&s, 1000.0, &mut RngStream::new(seed, 0)).unwrap();
        for &m in &levels {
            let tr = rp.truncated(m).unwrap();
            for i in 0..=4000 {
                let t = i as f64 * 0.25;
                let (a, b) = (
                    tr.cumulative_reward(&AccrualMode::EndOfCycle, t).unwrap(),
                    rp.cumulative_reward(&AccrualMode::EndOfCycle, t).unwrap(),
                );
                if a < b {
                    return Err(format!("seed {seed} M={m} t={t}: R^M = {a} < R = {b}"));
                }
                probes += 1;
            }
        }
        let cycles = rp.complete_cycles();
        let points: Vec<f64> = levels
            .iter()
            .map(|&m| regenerative_ratio(&truncate(cycles, m).unwrap()).unwrap().point)
            .collect();
        if points.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("seed {seed}: truncated ratios {points:?} increase in M"));
        }
    }
    Ok(format!("R^M(t) >= R(t) at {probes} probes; ratio nonincreasing over M in {levels:?}"))
}

fn c5() -> Result<String, String> {
    let s = JointCycleSampler::counting(d("exp:1")).unwrap();
    let w = wald_check(&s, 100.0, 500, 5, Execution::default()).unwrap();
    ensure(w.relative_gap < 0.02, format!("relative gap {:.5}", w.relative_gap))
}

fn c6() -> Result<String, String> {
    let exact = (1..=1_000_000u64).all(|n| y_law(n).mean() == Moment::Finite(1.0));
    let tr = as_vs_mean_demo(1000, 10_000, 6, Execution::default()).unwrap();
    let row = tr.rows.iter().find(|r| r.n == 1000).unwrap();
    ensure(
        exact && row.empirical_nonzero < 0.005,
        format!("E[Y_n] == 1 for all n <= 1e6: {exact}; nonzero frequency at n=1000: {}", row.empirical_nonzero),
    )
}

fn c7() -> Result<String, String> {
    let r = alternating_on_fraction(&d("exp:1"), &d("exp:0.5"), 1e4, 7).unwrap();
    ensure(
        (r.on_fraction - 1.0 / 3.0).abs() < 0.02,
        format!("ON fraction {:.5}", r.on_fraction),
    )
}

fn c8() -> Result<String, String> {
    let r = age_excess(&d("unif:0,1"), 1e4, 8).unwrap();
    let ok = (r.age_average - 1.0 / 3.0).abs() < 0.02
        && (r.spread_average - 2.0 / 3.0).abs() < 0.02
        && r.spread_average > 0.5
        && (r.age_average - r.residual_average).abs() < 3.0 * r.stderr;
    ensure(
        ok,
        format!(
            "age {:.5}, residual {:.5} (se {:.5}), spread {:.5}",
            r.age_average, r.residual_average, r.stderr, r.spread_average
        ),
    )
}

/// g(T) for Uniform(0,1) life written out by hand: E[min(X,T)] = T - T²/2.
fn uniform_cost_rate(t: f64, c: f64, cf: f64) -> f64 {
    (c * (1.0 - t) + cf * t) / (t - t * t / 2.0)
}

fn c9() -> Result<String, String> {
    let opt = optimize_replacement(&d("unif:0,1"), 1.0, 5.0, (0.01, 0.99)).unwrap();
    let (t_grid, g_grid) = (0..1000)
        .map(|i| 0.01 + 0.98 * i as f64 / 999.0)
        .map(|t| (t, uniform_cost_rate(t, 1.0, 5.0)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let policy = ReplacementPolicy::new(opt.t_star, 1.0, 5.0).unwrap();
    let sim = simulate_replacement(&policy, &d("unif:0,1"), 1e5, 9).unwrap();
    let ok = (opt.t_star - 0.5).abs() < 1e-4
        && (opt.g_star - 8.0).abs() < 1e-3
        && opt.g_star <= g_grid
        && (sim.rate - 8.0).abs() < 0.02 * 8.0;
    ensure(
        ok,
        format!(
            "T* = {:.7}, g* = {:.7} (grid T = {t_grid:.4}, g = {g_grid:.5}); simulated {:.5}",
            opt.t_star, opt.g_star, sim.rate
        ),
    )
}

fn c10() -> Result<String, String> {
    let mut worst = 0.0f64;
    for (i, (a, s)) in [("exp:0.5", "exp:1"), ("unif:0,2", "lognorm:-0.5,0.5"), ("det:2", "det:1")]
        .iter()
        .enumerate()
    {
        let tr = gg1_simulate(&d(a), &d(s), 2_000, 100 + i as u64, DEFAULT_EVENT_CAP).unwrap();
        worst = worst.max(little_check(&tr).unwrap().max_cycle_residual_relative);
    }
    let tr = gg1_simulate(&d("exp:0.5"), &d("exp:1"), 10_000, 10, DEFAULT_EVENT_CAP).unwrap();
    let rep = little_check(&tr).unwrap();
    worst = worst.max(rep.max_cycle_residual_relative);
    // birth-death oracle for M/M/1
    let (lambda, mu) = (0.5, 1.0);
    let rho: f64 = lambda / mu;
    let (l_oracle, t_oracle) = (rho / (1.0 - rho), 1.0 / (mu - lambda));
    let ok = worst < 1e-9
        && (rep.l_hat - l_oracle).abs() < 0.05 * l_oracle
        && (rep.t_hat - t_oracle).abs() < 0.05 * t_oracle
        && rep.relative_gap < 1e-6;
    ensure(
        ok,
        format!(
            "max cycle residual {worst:.1e}; L = {:.5}, T = {:.5}, |L - λT|/L = {:.1e}",
            rep.l_hat, rep.t_hat, rep.relative_gap
        ),
    )
}

fn c11() -> Result<String, String> {
    let r = cauchy_counterexample(100_000, 11, &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
    let unstable = (0..20)
        .filter(|&seed| cauchy_counterexample(100_000, seed, &[]).unwrap().max_abs_running_mean > 1.0)
        .count();
    let benign = elementary_renewal_hits(&AccrualMode::Partial(Shape::ramp()));
    let ok = r.integers_zero && r.ks_pass && unstable >= 15 && benign >= 19;
    ensure(
        ok,
        format!(
            "R(k) == 0: {}; KS D = {:.5} < {:.5}: {}; unstable in {unstable}/20 seeds; bounded shape converged in {benign}/20",
            r.integers_zero, r.ks_statistic, r.ks_critical_1pct, r.ks_pass
        ),
    )
}

const CLI_RUNS: [&[&str]; 11] = [
    &["rate", "--x", "exp:1", "--reward", "one", "--t-max", "1e4", "--seed", "7"],
    &["ensemble", "--x", "exp:1", "--reward", "x2", "--t", "1e3", "--reps", "200", "--seed", "3"],
    &["ratio", "--x", "exp:1", "--reward", "x2", "--cycles", "1e4", "--truncate", "1,10,100", "--seed", "4"],
    &["wald", "--x", "exp:1", "--t", "100", "--reps", "500", "--seed", "5"],
    &["as-vs-mean", "--n-max", "1000", "--reps", "10000", "--seed", "6"],
    &["replacement", "--life", "unif:0,1", "--c", "1", "--cf", "5", "--age", "0.5", "--seed", "9"],
    &["replacement-opt", "--life", "unif:0,1", "--c", "1", "--cf", "5", "--bracket", "0.01,0.99", "--seed", "1"],
    &["alternating", "--on", "exp:1", "--off", "exp:0.5", "--seed", "7"],
    &["age-excess", "--x", "unif:0,1", "--seed", "8"],
    &["queue", "--arrival", "exp:0.5", "--service", "exp:1", "--cycles", "1e4", "--seed", "10"],
    &["counterexample", "--cycles", "100000", "--seed", "3"],
];

fn run_cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_renewalkit"))
        .args(args)
        .env_remove("RENEWALKIT_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    let mut v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    v["metadata"]
        .as_object_mut()
        .ok_or("missing metadata")?
        .remove("timestamp_unix_ms")
        .ok_or("missing timestamp")?;
    Ok(v)
}

fn c12() -> Result<String, String> {
    for args in CLI_RUNS {
        let (a, b) = (run_cli(args)?, run_cli(args)?);
        let (a, b) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        if a != b {
            return Err(format!("{} differs between runs", args[0]));
        }
    }
    Ok(format!("{} commands reproduced byte-identical JSON", CLI_RUNS.len()))
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    gate.check(1, "elementary renewal", c1);
    gate.check(2, "pathwise rate, dependent reward", c2);
    gate.check(3, "mean rate and ratio CI coverage", c3);
    gate.check(4, "truncation chain", c4);
    gate.check(5, "Wald identity", c5);
    gate.check(6, "a.s. vs mean convergence", c6);
    gate.check(7, "alternating renewal", c7);
    gate.check(8, "age, excess and inspection paradox", c8);
    gate.check(9, "age replacement", c9);
    gate.check(10, "Little's law", c10);
    gate.check(11, "partial-reward counterexample", c11);
    gate.check(12, "CLI determinism", c12);
    if gate.failures == 0 {
        println!("acceptance: all 12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 12 criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
