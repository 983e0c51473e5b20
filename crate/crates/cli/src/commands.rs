//! One function per subcommand: validate parameters, run, and collect the
//! JSON result, CSV artifacts and a one-line summary.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use renewalkit::distributions::Role;
use renewalkit::estimators::{as_vs_mean_demo, ensemble_mean_rate, pathwise_rate, regenerative_ratio, wald_check};
use renewalkit::export::{write_queue_csv, write_rewarded_path_csv, write_trace_csv};
use renewalkit::models::{
    age_excess, alternating_on_fraction, cauchy_counterexample, gg1_simulate, little_check, optimize_replacement,
    replacement_cost_rate, simulate_replacement, ReplacementPolicy,
};
use renewalkit::reward::{realize_rewarded_path, sample_cycles, truncate};
use renewalkit::{AccrualMode, DistributionSpec, JointCycleSampler, RewardFn, RngStream};

use crate::args::*;
use crate::config::{CliError, Resolved};

pub struct Outcome {
    pub result: Value,
    pub summary: String,
    /// `(file name, contents)`
    pub csv: Vec<(String, String)>,
}

pub fn run(cfg: &Resolved) -> Result<Outcome, CliError> {
    match cfg.experiment {
        "rate" => rate(cfg, cfg.params()?),
        "ensemble" => ensemble(cfg, cfg.params()?),
        "ratio" => ratio(cfg, cfg.params()?),
        "wald" => wald(cfg, cfg.params()?),
        "as-vs-mean" => as_vs_mean(cfg, cfg.params()?),
        "replacement" => replacement(cfg, cfg.params()?),
        "replacement-opt" => replacement_opt(cfg, cfg.params()?),
        "alternating" => alternating(cfg, cfg.params()?),
        "age-excess" => age_excess_cmd(cfg, cfg.params()?),
        "queue" => queue(cfg, cfg.params()?),
        "counterexample" => counterexample(cfg, cfg.params()?),
        other => unreachable!("unknown experiment {other}"),
    }
}

fn required<T: Clone>(field: &str, v: &Option<T>) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::config(field, "missing required value"))
}

fn parse<T>(field: &str, v: &Option<String>) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    required(field, v)?.parse().map_err(|e| CliError::config(field, e))
}

fn dist(field: &str, v: &Option<String>, role: Role) -> Result<DistributionSpec, CliError> {
    let d: DistributionSpec = parse(field, v)?;
    d.validate_role(role).map_err(|e| CliError::config(field, e))?;
    Ok(d)
}

fn positive(field: &str, v: Option<f64>) -> Result<f64, CliError> {
    let x = required(field, &v)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {x}")))
    }
}

fn count(field: &str, v: Option<f64>, min: usize) -> Result<usize, CliError> {
    let x = required(field, &v)?;
    if x.fract() != 0.0 || !(x >= min as f64) || x > 1e15 {
        return Err(CliError::config(field, format!("must be an integer >= {min}, got {x}")));
    }
    Ok(x as usize)
}

fn list(field: &str, v: &Option<String>) -> Result<Vec<f64>, CliError> {
    required(field, v)?
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::config(field, format!("{s:?}: {e}"))))
        .collect()
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn csv_text(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> String {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

fn meta(cfg: &Resolved) -> Vec<(&'static str, String)> {
    vec![
        ("experiment", cfg.experiment.to_string()),
        ("version", renewalkit::VERSION.to_string()),
        ("rng", renewalkit::rng::RNG_ALGORITHM.to_string()),
    ]
}

fn sampler(x: &Option<String>, reward: &Option<String>, r: &Option<String>) -> Result<JointCycleSampler, CliError> {
    let length = dist("x", x, Role::Interarrival)?;
    let s = match r {
        Some(_) => {
            let r: DistributionSpec = parse("r", r)?;
            JointCycleSampler::independent(length, r).map_err(|e| CliError::config("r", e))?
        }
        None => {
            let f: RewardFn = parse("reward", reward)?;
            JointCycleSampler::function_of_length(length, f).map_err(|e| CliError::config("reward", e))?
        }
    };
    Ok(s)
}

/// Powers of ten below `t_max`, then `t_max`.
fn default_checkpoints(t_max: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (1..)
        .map(|k| 10f64.powi(k))
        .take_while(|&c| c < t_max)
        .collect();
    out.push(t_max);
    out
}

fn rate(cfg: &Resolved, a: RateArgs) -> Result<Outcome, CliError> {
    let s = sampler(&a.x, &a.reward, &a.r)?;
    let t_max = positive("t-max", a.t_max)?;
    let mode: AccrualMode = parse("mode", &a.mode)?;
    let checkpoints = match &a.checkpoints {
        Some(_) => list("checkpoints", &a.checkpoints)?,
        None => default_checkpoints(t_max),
    };
    if checkpoints.is_empty()
        || checkpoints.iter().any(|&c| !(c > 0.0 && c <= t_max))
        || checkpoints.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(CliError::config("checkpoints", "need increasing times in (0, t-max]"));
    }

    let rp = realize_rewarded_path(&s, t_max, &mut RngStream::new(cfg.seed, 0))?;
    let trace = pathwise_rate(&rp, &mode, &checkpoints)?;
    let point = trace.last().expect("nonempty");
    let analytic = s.long_run_rate().finite();
    let result = json!({
        "point": point,
        "t": t_max,
        "renewals": rp.path().renewals(),
        "analytic": analytic,
        "heavy_tail_flag": s.heavy_tailed(),
        "sampler": s.to_string(),
        "mode": mode.to_string(),
        "stream": 0,
        "trace": trace,
    });
    let m = meta(cfg);
    let csv = vec![
        ("rate_trace.csv".into(), csv_text(|w| write_trace_csv(w, &trace, &m))),
        ("rate_path.csv".into(), csv_text(|w| write_rewarded_path_csv(w, &rp, &m))),
    ];
    let summary = format!(
        "rate: R(t)/t = {point:.6} at t = {t_max} over {} renewals (analytic {})",
        rp.path().renewals(),
        fmt_opt(analytic)
    );
    Ok(Outcome { result, summary, csv })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"))
}

fn ensemble(cfg: &Resolved, a: EnsembleArgs) -> Result<Outcome, CliError> {
    let s = sampler(&a.x, &a.reward, &a.r)?;
    let t = positive("t", a.t)?;
    let reps = count("reps", a.reps, 2)?;
    let mode: AccrualMode = parse("mode", &a.mode)?;

    let est = ensemble_mean_rate(&s, &mode, t, reps, cfg.seed, cfg.execution)?;
    let analytic = s.long_run_rate().finite();
    let mut result = to_json(&est);
    result["analytic"] = json!(analytic);
    result["t"] = json!(t);
    result["sampler"] = json!(s.to_string());
    result["mode"] = json!(mode.to_string());
    let mut values = String::from("replication,value\n");
    for (i, v) in est.values.iter().enumerate() {
        writeln!(values, "{i},{v}").unwrap();
    }
    let summary = format!(
        "ensemble: mean R(t)/t = {:.6} ± {:.6} (95% CI [{:.6}, {:.6}], {} reps, analytic {})",
        est.point,
        est.stderr,
        est.ci_low,
        est.ci_high,
        reps,
        fmt_opt(analytic)
    );
    Ok(Outcome {
        result,
        summary,
        csv: vec![("ensemble_values.csv".into(), values)],
    })
}

fn ratio(cfg: &Resolved, a: RatioArgs) -> Result<Outcome, CliError> {
    let s = sampler(&a.x, &a.reward, &a.r)?;
    let cycles = count("cycles", a.cycles, 2)?;
    let levels = match &a.truncate {
        Some(_) => list("truncate", &a.truncate)?,
        None => Vec::new(),
    };
    if levels.iter().any(|&m| !(m > 0.0)) {
        return Err(CliError::config("truncate", "levels must be > 0"));
    }

    let sample = sample_cycles(&s, cycles, &mut RngStream::new(cfg.seed, 0))?;
    let est = regenerative_ratio(&sample)?.with_heavy_tail_flag(s.heavy_tailed());
    let truncated = levels
        .iter()
        .map(|&m| Ok(json!({"m": m, "point": regenerative_ratio(&truncate(&sample, m)?)?.point})))
        .collect::<Result<Vec<Value>, renewalkit::Error>>()?;
    let analytic = s.long_run_rate().finite();
    let mut result = to_json(&est);
    result["analytic"] = json!(analytic);
    result["sampler"] = json!(s.to_string());
    result["truncated"] = Value::Array(truncated);
    let mut text = String::from("n,x_n,r_n\n");
    for (i, c) in sample.iter().enumerate() {
        writeln!(text, "{},{},{}", i + 1, c.length, c.reward).unwrap();
    }
    let summary = format!(
        "ratio: {:.6} (95% CI [{:.6}, {:.6}], {} cycles, analytic {})",
        est.point,
        est.ci_low,
        est.ci_high,
        cycles,
        fmt_opt(analytic)
    );
    Ok(Outcome {
        result,
        summary,
        csv: vec![("ratio_cycles.csv".into(), text)],
    })
}

fn wald(cfg: &Resolved, a: WaldArgs) -> Result<Outcome, CliError> {
    let x = dist("x", &a.x, Role::Interarrival)?;
    let t = positive("t", a.t)?;
    let reps = count("reps", a.reps, 1)?;
    let s = JointCycleSampler::counting(x)?;
    let rep = wald_check(&s, t, reps, cfg.seed, cfg.execution)?;
    let summary = format!(
        "wald: E[S_(N+1)] = {:.6} vs E[N+1]·E[X] = {:.6}, relative gap {:.2e} ({} reps)",
        rep.mean_stopped_sum, rep.predicted, rep.relative_gap, reps
    );
    Ok(Outcome {
        result: to_json(&rep),
        summary,
        csv: Vec::new(),
    })
}

fn as_vs_mean(cfg: &Resolved, a: AsVsMeanArgs) -> Result<Outcome, CliError> {
    let n_max = count("n-max", a.n_max, 1)?;
    let reps = count("reps", a.reps, 1)?;
    let tr = as_vs_mean_demo(n_max as u64, reps, cfg.seed, cfg.execution)?;
    let mut text = String::from("n,analytic_mean,nonzero_probability,empirical_nonzero,empirical_mean\n");
    for r in &tr.rows {
        writeln!(
            text,
            "{},{},{},{},{}",
            r.n, r.analytic_mean, r.nonzero_probability, r.empirical_nonzero, r.empirical_mean
        )
        .unwrap();
    }
    let last = tr.rows.last().expect("nonempty grid");
    let summary = format!(
        "as-vs-mean: E[Y_n] = 1 exactly for n <= {n_max}: {}; P[Y_{} != 0] empirical {:.5} ({} reps)",
        tr.analytic_mean_exact, last.n, last.empirical_nonzero, reps
    );
    Ok(Outcome {
        result: to_json(&tr),
        summary,
        csv: vec![("as_vs_mean.csv".into(), text)],
    })
}

fn costs(c: Option<f64>, cf: Option<f64>, strict: bool) -> Result<(f64, f64), CliError> {
    let c = positive("c", c)?;
    let cf = positive("cf", cf)?;
    if cf < c || (strict && cf == c) {
        let op = if strict { ">" } else { ">=" };
        return Err(CliError::config("cf", format!("failure cost must be {op} c = {c}, got {cf}")));
    }
    Ok((c, cf))
}

fn replacement(cfg: &Resolved, a: ReplacementArgs) -> Result<Outcome, CliError> {
    let life = dist("life", &a.life, Role::Life)?;
    let (c, cf) = costs(a.c, a.cf, false)?;
    let age: f64 = parse("age", &a.age)?;
    if !(age > 0.0) {
        return Err(CliError::config("age", format!("must be > 0 or inf, got {age}")));
    }
    let t_max = positive("t-max", a.t_max)?;
    let policy = ReplacementPolicy::new(age, c, cf).map_err(|e| CliError::config("age", e))?;

    let sim = simulate_replacement(&policy, &life, t_max, cfg.seed)?;
    let mut result = to_json(&sim);
    result["age"] = json!(age.to_string());
    let summary = format!(
        "replacement: cost rate {:.6} at T = {age} (analytic g(T) = {:.6}, t = {t_max})",
        sim.rate, sim.analytic
    );
    Ok(Outcome {
        result,
        summary,
        csv: Vec::new(),
    })
}

fn replacement_opt(cfg: &Resolved, a: ReplacementOptArgs) -> Result<Outcome, CliError> {
    let life = dist("life", &a.life, Role::Life)?;
    let (c, cf) = costs(a.c, a.cf, true)?;
    let bracket = match &a.bracket {
        Some(_) => match list("bracket", &a.bracket)?[..] {
            [lo, hi] if lo > 0.0 && lo < hi && hi.is_finite() => (lo, hi),
            _ => return Err(CliError::config("bracket", "need LO,HI with 0 < LO < HI < inf")),
        },
        None => {
            let mean = life.mean().finite().expect("validated life");
            (0.01 * mean, 4.0 * mean)
        }
    };
    let t_max = positive("t-max", a.t_max)?;

    let opt = optimize_replacement(&life, c, cf, bracket)?;
    let policy = ReplacementPolicy::new(opt.t_star, c, cf)?;
    let sim = simulate_replacement(&policy, &life, t_max, cfg.seed)?;
    let result = json!({
        "optimum": opt,
        "bracket": [bracket.0, bracket.1],
        "simulation": sim,
    });

    let mut curve = String::from("T,g\n");
    for i in 0..=200 {
        let t = bracket.0 + (bracket.1 - bracket.0) * i as f64 / 200.0;
        let g = replacement_cost_rate(&ReplacementPolicy::new(t, c, cf)?, &life)?;
        writeln!(curve, "{t},{g}").unwrap();
    }
    let edge = match opt.boundary {
        Some(b) => format!(", on the {} end of the bracket", to_json(&b).as_str().unwrap_or("?")),
        None => String::new(),
    };
    let summary = format!(
        "replacement-opt: T* = {:.6}, g* = {:.6}{edge}; simulated rate at T* {:.6}",
        opt.t_star, opt.g_star, sim.rate
    );
    Ok(Outcome {
        result,
        summary,
        csv: vec![("replacement_curve.csv".into(), curve)],
    })
}

fn alternating(cfg: &Resolved, a: AlternatingArgs) -> Result<Outcome, CliError> {
    let on = dist("on", &a.on, Role::On)?;
    let off = dist("off", &a.off, Role::Off)?;
    let t_max = positive("t-max", a.t_max)?;
    let rep = alternating_on_fraction(&on, &off, t_max, cfg.seed)?;
    let summary = format!(
        "alternating: ON fraction {:.6} over t = {t_max} (analytic {:.6})",
        rep.on_fraction, rep.analytic
    );
    Ok(Outcome {
        result: to_json(&rep),
        summary,
        csv: Vec::new(),
    })
}

fn age_excess_cmd(cfg: &Resolved, a: AgeExcessArgs) -> Result<Outcome, CliError> {
    let x = dist("x", &a.x, Role::Interarrival)?;
    let t_max = positive("t-max", a.t_max)?;
    let rep = age_excess(&x, t_max, cfg.seed)?;
    let summary = format!(
        "age-excess: age {:.6}, residual {:.6}, spread {:.6} vs E[X] = {:.6}",
        rep.age_average, rep.residual_average, rep.spread_average, rep.mean_length
    );
    Ok(Outcome {
        result: to_json(&rep),
        summary,
        csv: Vec::new(),
    })
}

fn queue(cfg: &Resolved, a: QueueArgs) -> Result<Outcome, CliError> {
    let arrival = dist("arrival", &a.arrival, Role::Interarrival)?;
    let service = dist("service", &a.service, Role::Service)?;
    let cycles = count("cycles", a.cycles, 1)?;
    let cap = count("event-cap", a.event_cap, 1)?;
    let rho = service.mean().finite().expect("validated") / arrival.mean().finite().expect("validated");
    if rho >= 1.0 {
        return Err(CliError::config(
            "service",
            format!("Unstable: traffic intensity {rho} >= 1"),
        ));
    }

    let tr = gg1_simulate(&arrival, &service, cycles, cfg.seed, cap)?;
    let rep = little_check(&tr)?;
    let result = json!({
        "little": rep,
        "traffic_intensity": tr.traffic_intensity,
        "arrival_rate": tr.arrival_rate,
        "customers": tr.customers.len(),
    });
    let m = meta(cfg);
    let summary = format!(
        "queue: L = {:.6}, lambda = {:.6}, T = {:.6}, |L - lambda T|/L = {:.1e} over {} cycles",
        rep.l_hat, rep.lambda_hat, rep.t_hat, rep.relative_gap, rep.n_cycles
    );
    Ok(Outcome {
        result,
        summary,
        csv: vec![("queue_trace.csv".into(), csv_text(|w| write_queue_csv(w, &tr, &m)))],
    })
}

fn counterexample(cfg: &Resolved, a: CounterexampleArgs) -> Result<Outcome, CliError> {
    let cycles = count("cycles", a.cycles, 1)?;
    let probes = list("probes", &a.probes)?;
    if probes.iter().any(|u| !(0.0..=1.0).contains(u)) {
        return Err(CliError::config("probes", "offsets must lie in [0, 1]"));
    }
    let rep = cauchy_counterexample(cycles, cfg.seed, &probes)?;
    let m = meta(cfg);
    let summary = format!(
        "counterexample: R(k) = 0 at all integers: {}; KS D = {:.5} (1% critical {:.5}, pass {}); max |running mean| {:.3}",
        rep.integers_zero, rep.ks_statistic, rep.ks_critical_1pct, rep.ks_pass, rep.max_abs_running_mean
    );
    Ok(Outcome {
        csv: vec![(
            "counterexample_running_mean.csv".into(),
            csv_text(|w| write_trace_csv(w, &rep.running_mean_trace, &m)),
        )],
        result: to_json(&rep),
        summary,
    })
}
