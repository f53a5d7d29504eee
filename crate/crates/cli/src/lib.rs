//! Batch front-end: resolves a run configuration, dispatches the
//! subcommand and renders its report as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use serde_json::{json, Value};

use config::{RawConfig, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{}: {}", .0.name(), .0)]
    Numerical(#[from] resonance_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Resonance,
    Sweep,
    BranchMap,
    Trajectory,
    Caustic,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Resonance => "resonance",
            Command::Sweep => "sweep",
            Command::BranchMap => "branch-map",
            Command::Trajectory => "trajectory",
            Command::Caustic => "caustic",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Sweep | Command::BranchMap => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub config: Option<PathBuf>,
    pub set: Vec<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn provenance(command: Command, raw: &RawConfig, cfg: &RunConfig) -> Value {
    json!({
        "tool": "eres",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "config": raw.as_json(),
        "tolerances": {
            "tol_newton": cfg.tol.newton,
            "quad_abs_tol": cfg.tol.quad_abs,
            "root_tol": cfg.tol.root,
        },
    })
}

/// Runs `command` and returns the rendered output.
pub fn render(command: Command, inv: &Invocation) -> Result<String, CliError> {
    let raw = RawConfig::resolve(inv.config.as_deref(), &inv.set)?;
    let cfg = RunConfig::from_raw(&raw)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config {
            key: "threads".into(),
            message: e.to_string(),
        })?;
    let report = pool.install(|| match command {
        Command::Resonance => commands::resonance(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::BranchMap => commands::branch_map(&cfg),
        Command::Trajectory => commands::trajectory(&cfg),
        Command::Caustic => commands::caustic(&cfg),
    })?;
    let prov = provenance(command, &raw, &cfg);
    Ok(match inv.format.unwrap_or(command.default_format()) {
        Format::Csv => report.table.to_csv(&prov),
        Format::Json => output::to_json(report.json, prov),
    })
}

/// Runs `command` and writes to `--output` or stdout.
pub fn run(command: Command, inv: &Invocation) -> Result<(), CliError> {
    let text = render(command, inv)?;
    match &inv.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
