//! `lwreg`: runs the regularized-field computations from a config file.
//!
//! Exit status 0 when every verdict passes, 1 when one fails, 2 on a config,
//! usage or input error. Failures print one `kind: reason` line on stderr.

mod check;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ConfigError, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("input: {0}")]
    Input(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(
    name = "lwreg",
    version,
    about = "Regularized Lienard-Wiechert fields and self-energies"
)]
struct Cli {
    /// Run configuration; built-in defaults when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Output file, overriding `[output] path`; stdout when neither is set.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Retarded kinematics at each observer, as JSON lines.
    Kinematics,
    /// Field quantities at each observer and grid ε.
    Fields {
        #[command(subcommand)]
        action: FieldsAction,
    },
    /// Association claims over the ε grid, as JSON lines.
    Associate,
    /// Self-energy table over the ε grid, as CSV.
    Selfenergy,
    /// Solve U_ele + U_mag = mc² for ε₀.
    Renormalize {
        #[arg(long)]
        mc2: f64,
    },
    /// Distribution algebra for t·u′ + u = δ.
    Distalg {
        #[command(subcommand)]
        action: DistalgAction,
    },
    /// Invariant suites of every module.
    Check,
}

#[derive(Subcommand)]
enum FieldsAction {
    /// CSV of Φ, Λ, Ψ and □Φ.
    Eval,
}

#[derive(Subcommand)]
enum DistalgAction {
    /// Particular solution and homogeneous basis.
    Solve,
    /// Apply the Euler operator t·d/dt + 1 to an expression.
    Verify { expr: String },
}

fn load(path: Option<&PathBuf>) -> Result<RunConfig, CliError> {
    match path {
        Some(p) => {
            let src = std::fs::read_to_string(p)?;
            Ok(RunConfig::parse(&src)?)
        }
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let cfg = load(cli.config.as_ref())?;
    let outcome = match &cli.command {
        Command::Kinematics => commands::kinematics_cmd(&cfg)?,
        Command::Fields {
            action: FieldsAction::Eval,
        } => commands::fields_eval(&cfg)?,
        Command::Associate => commands::associate(&cfg)?,
        Command::Selfenergy => commands::selfenergy(&cfg)?,
        Command::Renormalize { mc2 } => commands::renormalize(&cfg, *mc2)?,
        Command::Distalg {
            action: DistalgAction::Solve,
        } => commands::distalg_solve(&cfg)?,
        Command::Distalg {
            action: DistalgAction::Verify { expr },
        } => commands::distalg_verify(&cfg, expr)?,
        Command::Check => check::run(&cfg)?,
    };
    match cli.out.as_ref().or(cfg.output.as_ref()) {
        Some(p) => std::fs::write(p, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) if o.failures.is_empty() => ExitCode::SUCCESS,
        Ok(o) => {
            eprintln!("fail: {}", o.failures.join("; "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
