use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "renewalkit", version, about = "Renewal reward simulation experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Base seed; falls back to the config file, then RENEWALKIT_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for JSON and CSV artifacts. Without it JSON goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with top-level `seed`/`out`/`format`/`sequential` and one
    /// table per subcommand; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run replications on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pathwise R(t)/t along one path, with a convergence trace.
    Rate(RateArgs),
    /// Ensemble mean of R(t)/t over independent replications.
    Ensemble(EnsembleArgs),
    /// Regenerative ratio estimate with a delta-method confidence interval.
    Ratio(RatioArgs),
    /// Wald's identity for the stopping time N(t)+1.
    Wald(WaldArgs),
    /// Sequence that converges to 0 almost surely while every mean is 1.
    AsVsMean(AsVsMeanArgs),
    /// Simulate an age-replacement policy and compare with its cost rate.
    Replacement(ReplacementArgs),
    /// Minimise the age-replacement cost rate over a bracket.
    ReplacementOpt(ReplacementOptArgs),
    /// Long-run ON fraction of an alternating renewal process.
    Alternating(AlternatingArgs),
    /// Time averages of age, residual life and spread.
    AgeExcess(AgeExcessArgs),
    /// GI/GI/1 FIFO queue with Little's law checks over regeneration cycles.
    Queue(QueueArgs),
    /// Partial-reward counterexample with Cauchy cycle coefficients.
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RateArgs {
    /// Cycle-length law, e.g. `exp:1`.
    #[arg(long)]
    pub x: Option<String>,
    /// Reward as a function of the cycle length: one, const:V, x, x2, half-x2.
    #[arg(long)]
    pub reward: Option<String>,
    /// Reward law drawn independently of the length (overrides --reward).
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// end, start or partial:SHAPE (ramp, triangle, pl:u/y,...).
    #[arg(long)]
    pub mode: Option<String>,
    /// Comma-separated times in (0, t-max]; default powers of ten and t-max.
    #[arg(long)]
    pub checkpoints: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EnsembleArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub reward: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    /// Horizon of each replication.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub reps: Option<f64>,
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RatioArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub reward: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub cycles: Option<f64>,
    /// Comma-separated truncation levels M; rewards become max(r, -M).
    #[arg(long)]
    pub truncate: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct WaldArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub reps: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct AsVsMeanArgs {
    #[arg(long)]
    pub n_max: Option<f64>,
    #[arg(long)]
    pub reps: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ReplacementArgs {
    /// Component lifetime law.
    #[arg(long)]
    pub life: Option<String>,
    /// Preventive replacement cost.
    #[arg(long)]
    pub c: Option<f64>,
    /// Failure replacement cost.
    #[arg(long)]
    pub cf: Option<f64>,
    /// Preventive replacement age T; `inf` never replaces preventively.
    #[arg(long)]
    #[serde(deserialize_with = "number_or_string")]
    pub age: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ReplacementOptArgs {
    #[arg(long)]
    pub life: Option<String>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub cf: Option<f64>,
    /// `LO,HI`; default `0.01·E[X], 4·E[X]`.
    #[arg(long)]
    pub bracket: Option<String>,
    /// Horizon of the confirming simulation at T*.
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct AlternatingArgs {
    #[arg(long)]
    pub on: Option<String>,
    #[arg(long)]
    pub off: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct AgeExcessArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct QueueArgs {
    /// Interarrival law.
    #[arg(long)]
    pub arrival: Option<String>,
    #[arg(long)]
    pub service: Option<String>,
    /// Complete regeneration cycles to simulate.
    #[arg(long)]
    pub cycles: Option<f64>,
    /// Largest number of customers allowed in one cycle.
    #[arg(long)]
    pub event_cap: Option<f64>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub cycles: Option<f64>,
    /// Comma-separated offsets in [0, 1] probed in the first cycles.
    #[arg(long)]
    pub probes: Option<String>,
}

fn number_or_string<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }
    Ok(Option::<Raw>::deserialize(d)?.map(|raw| match raw {
        Raw::Num(v) => v.to_string(),
        Raw::Str(s) => s,
    }))
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rate(_) => "rate",
            Command::Ensemble(_) => "ensemble",
            Command::Ratio(_) => "ratio",
            Command::Wald(_) => "wald",
            Command::AsVsMean(_) => "as-vs-mean",
            Command::Replacement(_) => "replacement",
            Command::ReplacementOpt(_) => "replacement-opt",
            Command::Alternating(_) => "alternating",
            Command::AgeExcess(_) => "age-excess",
            Command::Queue(_) => "queue",
            Command::Counterexample(_) => "counterexample",
        }
    }

    /// Flags given on the command line, as a JSON object without unset keys.
    pub fn flags(&self) -> Value {
        let v = match self {
            Command::Rate(a) => serde_json::to_value(a),
            Command::Ensemble(a) => serde_json::to_value(a),
            Command::Ratio(a) => serde_json::to_value(a),
            Command::Wald(a) => serde_json::to_value(a),
            Command::AsVsMean(a) => serde_json::to_value(a),
            Command::Replacement(a) => serde_json::to_value(a),
            Command::ReplacementOpt(a) => serde_json::to_value(a),
            Command::Alternating(a) => serde_json::to_value(a),
            Command::AgeExcess(a) => serde_json::to_value(a),
            Command::Queue(a) => serde_json::to_value(a),
            Command::Counterexample(a) => serde_json::to_value(a),
        }
        .expect("flag structs serialize");
        match v {
            Value::Object(mut m) => {
                m.retain(|_, v| !v.is_null());
                Value::Object(m)
            }
            other => other,
        }
    }

    pub fn defaults(&self) -> Value {
        match self {
            Command::Rate(_) => json!({"reward": "one", "t-max": 1e4, "mode": "end"}),
            Command::Ensemble(_) => json!({"reward": "one", "t": 1e3, "reps": 200, "mode": "end"}),
            Command::Ratio(_) => json!({"reward": "one", "cycles": 1e4}),
            Command::Wald(_) => json!({"t": 100, "reps": 500}),
            Command::AsVsMean(_) => json!({"n-max": 1000, "reps": 10000}),
            Command::Replacement(_) => json!({"t-max": 1e5}),
            Command::ReplacementOpt(_) => json!({"t-max": 1e5}),
            Command::Alternating(_) => json!({"t-max": 1e4}),
            Command::AgeExcess(_) => json!({"t-max": 1e4}),
            Command::Queue(_) => json!({"cycles": 1e4, "event-cap": 1e7}),
            Command::Counterexample(_) => json!({"cycles": 1e5, "probes": "0,0.25,0.5,0.75,1"}),
        }
    }
}
