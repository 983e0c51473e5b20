//! Resolution of defaults, config file and flags into one configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::args::{Cli, Format};
use renewalkit::Execution;

pub const SEED_ENV: &str = "RENEWALKIT_SEED";

const GLOBAL_KEYS: [&str; 4] = ["seed", "out", "format", "sequential"];

#[derive(Debug)]
pub enum CliError {
    /// Invalid or missing configuration; exit status 2.
    Config { field: String, reason: String },
    /// Failure while running an experiment; exit status 1.
    Runtime(renewalkit::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl fmt::Display) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.to_string(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, reason } => write!(f, "ConfigError: {field}: {reason}"),
            CliError::Runtime(e) => write!(f, "{}: {e}", e.name()),
            CliError::Io { path, source } => write!(f, "IoError: {}: {source}", path.display()),
        }
    }
}

impl From<renewalkit::Error> for CliError {
    fn from(e: renewalkit::Error) -> Self {
        CliError::Runtime(e)
    }
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub experiment: &'static str,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub execution: Execution,
    /// Experiment parameters after defaults, file and flags are merged.
    pub params: Value,
}

impl Resolved {
    /// The resolved configuration as echoed in every result.
    pub fn echo(&self) -> Value {
        serde_json::json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "out": self.out.as_ref().map(|p| p.display().to_string()),
            "format": self.format,
            "execution": match self.execution {
                Execution::Parallel if Execution::parallel_available() => "parallel",
                _ => "sequential",
            },
            "params": self.params,
        })
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_path_to_error::deserialize(self.params.clone()).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "params".to_string() } else { path };
            CliError::config(field, e.into_inner())
        })
    }
}

fn load_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::config("config", e.message()))?;
    match serde_json::to_value(table) {
        Ok(Value::Object(m)) => Ok(m),
        _ => Err(CliError::config("config", "not a table")),
    }
}

fn overlay(base: &mut Map<String, Value>, top: &Map<String, Value>) {
    for (k, v) in top {
        base.insert(k.clone(), v.clone());
    }
}

fn typed<T: DeserializeOwned>(field: &str, v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::config(field, e))
}

pub fn resolve(cli: &Cli, env_seed: Option<String>) -> Result<Resolved, CliError> {
    let experiment = cli.command.name();
    let file = match &cli.common.config {
        Some(p) => load_file(p)?,
        None => Map::new(),
    };
    for (k, v) in &file {
        let known = GLOBAL_KEYS.contains(&k.as_str()) || (v.is_object() && is_experiment(k));
        if !known {
            return Err(CliError::config(k.clone(), "unknown key in config file"));
        }
    }

    let seed = match (cli.common.seed, file.get("seed"), env_seed) {
        (Some(s), _, _) => s,
        (None, Some(v), _) => typed("seed", v)?,
        (None, None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|e| CliError::config("seed", format!("{SEED_ENV}={s:?}: {e}")))?,
        (None, None, None) => 0,
    };
    let out = match (&cli.common.out, file.get("out")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(v)) => Some(typed::<PathBuf>("out", v)?),
        (None, None) => None,
    };
    let format = match (cli.common.format, file.get("format")) {
        (Some(f), _) => f,
        (None, Some(v)) => typed("format", v)?,
        (None, None) => Format::Json,
    };
    let sequential = cli.common.sequential
        || match file.get("sequential") {
            Some(v) => typed("sequential", v)?,
            None => false,
        };
    if format.csv() && out.is_none() {
        return Err(CliError::config("out", "CSV output needs --out DIR"));
    }

    let mut params = match cli.command.defaults() {
        Value::Object(m) => m,
        _ => unreachable!("defaults are objects"),
    };
    if let Some(Value::Object(section)) = file.get(experiment) {
        overlay(&mut params, section);
    }
    if let Value::Object(flags) = cli.command.flags() {
        overlay(&mut params, &flags);
    }

    Ok(Resolved {
        experiment,
        seed,
        out,
        format,
        execution: if sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        params: Value::Object(params),
    })
}

fn is_experiment(name: &str) -> bool {
    [
        "rate",
        "ensemble",
        "ratio",
        "wald",
        "as-vs-mean",
        "replacement",
        "replacement-opt",
        "alternating",
        "age-excess",
        "queue",
        "counterexample",
    ]
    .contains(&name)
}
