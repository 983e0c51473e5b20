mod args;
mod commands;
mod config;

use std::fs;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde_json::{json, Value};

use args::Cli;
use commands::Outcome;
use config::{CliError, Resolved, SEED_ENV};

fn document(cfg: &Resolved, outcome: &Outcome) -> Value {
    let millis = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    json!({
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "result": outcome.result,
        "metadata": {
            "version": renewalkit::VERSION,
            "rng_algorithm": renewalkit::rng::RNG_ALGORITHM,
            "stream_derivation": renewalkit::rng::STREAM_DERIVATION,
            "config": cfg.echo(),
            "timestamp_unix_ms": millis,
        },
    })
}

fn emit(cfg: &Resolved, outcome: &Outcome) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(&document(cfg, outcome)).expect("json") + "\n";
    let Some(dir) = &cfg.out else {
        print!("{json}");
        eprintln!("{}", outcome.summary);
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    if cfg.format.json() {
        let path = dir.join(format!("{}.json", cfg.experiment));
        fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
    }
    if cfg.format.csv() {
        for (name, text) in &outcome.csv {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        }
    }
    println!("{}", outcome.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = config::resolve(&cli, std::env::var(SEED_ENV).ok())
        .and_then(|cfg| commands::run(&cfg).and_then(|outcome| emit(&cfg, &outcome)));
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
