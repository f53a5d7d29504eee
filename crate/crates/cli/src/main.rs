use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resonance_cli::{run, Command, Format, Invocation};

#[derive(Parser)]
#[command(name = "eres", version, about = "Euclidean resonance solver for tunneling from an inhomogeneous wire")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Resonant Gaussian width and slope of A/B below it
    Resonance(Common),
    /// A/B over a grid of Gaussian widths
    Sweep(Common),
    /// Action branches along lines of constant y
    BranchMap(Common),
    /// Imaginary-time trajectory and its action parts
    Trajectory(Common),
    /// Caustic pinning points
    Caustic(Common),
}

#[derive(Args)]
struct Common {
    /// Flat JSON file of dotted keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a key, e.g. --set profile.a=38 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Resonance(c) => (Command::Resonance, c),
        Sub::Sweep(c) => (Command::Sweep, c),
        Sub::BranchMap(c) => (Command::BranchMap, c),
        Sub::Trajectory(c) => (Command::Trajectory, c),
        Sub::Caustic(c) => (Command::Caustic, c),
    };
    let inv = Invocation {
        config: common.config,
        set: common.set,
        output: common.output,
        format: common.format,
    };
    match run(command, &inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eres {}: {e}", command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
