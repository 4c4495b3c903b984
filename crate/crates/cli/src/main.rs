//! `penner`: data files for the zero, support, density and free-energy
//! figures, plus a verification suite.

mod commands;
mod config;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::Output;
use config::Params;

#[derive(Parser)]
#[command(name = "penner", version, about = "Penner matrix model at complex coupling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scaled Laguerre zeros, with the limiting support beside them
    Zeros(Params),
    /// Interval endpoints and the traced oval
    Support(Params),
    /// Density samples on both components
    Density(Params),
    /// Potential constants and energies
    Electro(Params),
    /// ln|Z_n| by both routes
    Partition(Params),
    /// F_n against the planar limit
    Fsweep(Params),
    /// Large-n expansion coefficients for the shifted family
    Expansion(Params),
    /// Euler characteristics chi_{j,s}
    Euler(Params),
    /// Double-scaling genus terms
    Dscale(Params),
    /// Invariant suite with a JSON report
    Verify(Params),
}

fn emit(out: &Output, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, &out.body).with_context(|| format!("writing {}", p.display()))?;
            for (suffix, body) in &out.side {
                let side = p.with_extension(suffix);
                std::fs::write(&side, body).with_context(|| format!("writing {}", side.display()))?;
            }
        }
        None => {
            // Side files need a path to sit next to.
            std::io::stdout().write_all(out.body.as_bytes())?;
        }
    }
    if let Some(note) = &out.note {
        eprintln!("{note}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let (params, job): (Params, fn(&Params) -> Result<(Output, bool)>) = match cli.command {
        Command::Zeros(p) => (p, |p| Ok((commands::zeros(p)?, true))),
        Command::Support(p) => (p, |p| Ok((commands::support(p)?, true))),
        Command::Density(p) => (p, |p| Ok((commands::density(p)?, true))),
        Command::Electro(p) => (p, |p| Ok((commands::electro(p)?, true))),
        Command::Partition(p) => (p, |p| Ok((commands::partition(p)?, true))),
        Command::Fsweep(p) => (p, |p| Ok((commands::fsweep(p)?, true))),
        Command::Expansion(p) => (p, |p| Ok((commands::expansion(p)?, true))),
        Command::Euler(p) => (p, |p| Ok((commands::euler(p)?, true))),
        Command::Dscale(p) => (p, |p| Ok((commands::dscale(p)?, true))),
        Command::Verify(p) => (p, commands::verify),
    };
    let params = params.resolve()?;
    let (out, ok) = job(&params)?;
    emit(&out, params.out.as_deref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
