//! `qmix`: decomposition, costs, Trotter checks, augmentation search, circuits and reference tables.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 validity failure, 3 reference mismatch,
//! 4 scale cap exceeded, 5 anything else.

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use config::{Command, Common, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "qmix", version, about = "Constraint-preserving mixer compiler")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    common: Common,
    /// Run a saved configuration instead; --out and --format still apply.
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,
    /// Print the parsed configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

/// Failures with their own exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Validity(String),
    Mismatch(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Validity(m) | Failure::Mismatch(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn exit_code(e: &anyhow::Error) -> i32 {
    use qmix_core::Error as E;
    if let Some(f) = e.downcast_ref::<Failure>() {
        return match f {
            Failure::Usage(_) => 1,
            Failure::Validity(_) => 2,
            Failure::Mismatch(_) => 3,
        };
    }
    if let Some(ce) = e.downcast_ref::<E>() {
        return match ce {
            E::Scale { .. } => 4,
            E::Validity { .. } | E::Plan(_) => 2,
            E::Dimension { .. }
            | E::Label(_)
            | E::BasisState(_)
            | E::Domain(_)
            | E::Index { .. }
            | E::Overlap(_)
            | E::Parse(_) => 1,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() || e.downcast_ref::<serde_json::Error>().is_some() {
        return 1;
    }
    5
}

fn config(cli: Cli) -> Result<RunConfig> {
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = RunConfig::from_json(&text)?;
        cfg.common.out = cli.common.out.or(cfg.common.out);
        cfg.common.format = cli.common.format.or(cfg.common.format);
        return Ok(cfg);
    }
    let command = cli.command.ok_or_else(|| Failure::Usage("no subcommand given; see --help".into()))?;
    Ok(RunConfig { command, common: cli.common })
}

fn run(cli: Cli) -> Result<()> {
    let dump = cli.dump_config;
    let cfg = config(cli)?;
    if dump {
        println!("{}", cfg.to_json()?);
        return Ok(());
    }
    if let Some(n) = cfg.common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting thread pool")?;
    }
    let artifact = commands::run(&cfg)?;
    match &cfg.common.out {
        Some(path) => std::fs::write(path, &artifact.text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", artifact.text),
    }
    match artifact.failure {
        Some(f) => Err(f.into()),
        None => Ok(()),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) { 0 } else { 1 });
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e));
    }
}
