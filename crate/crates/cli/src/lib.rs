//! Library side of the `chiral` binary.

pub mod commands;
pub mod config;
pub mod funcspec;
pub mod report;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use config::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] chiral_core::Error),
    #[error(transparent)]
    Spec(#[from] funcspec::SpecError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Invalid(String),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

fn sink(cli: &Cli) -> io::Result<Box<dyn Write>> {
    Ok(match &cli.config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    cfg.quadrature()?;
    let mut outcome = Outcome::Success;
    match &cli.command {
        Command::Verify { drop_central_term } => {
            let checks = verify::run_suite(cfg.cutoff, cfg.seed, *drop_central_term);
            if checks.iter().any(verify::Check::failed) {
                outcome = Outcome::ChecksFailed;
            }
            let mut out = sink(cli)?;
            verify::table(&checks).write(cfg.format, &mut out)?;
            out.flush()?;
        }
        Command::Charge { kappa } => {
            let t = commands::charge(cfg, kappa)?;
            let mut out = sink(cli)?;
            t.write(cfg.format, &mut out)?;
            out.flush()?;
        }
        Command::Nonnormal(args) => {
            let t = commands::nonnormal(cfg, args)?;
            let mut out = sink(cli)?;
            t.write(cfg.format, &mut out)?;
            out.flush()?;
        }
        Command::Ground(args) => {
            let doc = commands::ground(cfg, args)?;
            let mut out = sink(cli)?;
            report::write_document(&doc, cfg.format, &mut out)?;
            out.flush()?;
        }
    }
    Ok(outcome)
}
