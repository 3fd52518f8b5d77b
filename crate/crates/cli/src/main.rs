//! `polyharm`: run kernel evaluations, Dirichlet solves and verification suites
//! from a JSON configuration and emit CSV or JSON result tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod table;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;
use table::{Metadata, ResultTable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] polyharmonic::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) => match table::classify(e) {
                table::Status::Singular => 3,
                table::Status::Rejected => 2,
                _ => 1,
            },
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate zonal polyharmonics (all routes), the Poisson kernel and the Cauchy-Hua kernel.
    Kernel,
    /// Solve the Dirichlet problem for polynomial boundary data.
    Dirichlet,
    /// Run property suites; exit status 0 iff all pass.
    Verify,
    /// Polyharmonic approximation of a holomorphic function as p grows.
    HuaLimit,
    /// Almansi decomposition of a homogeneous polynomial.
    Almansi,
    /// Dimension tables checked against exact nullities.
    Dims,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Dirichlet => "dirichlet",
            Command::Verify => "verify",
            Command::HuaLimit => "hua-limit",
            Command::Almansi => "almansi",
            Command::Dims => "dims",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyharm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file; defaults to {"n": 2}.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides every default tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.tolerance.is_some() {
        cfg.tolerance = cli.tolerance;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = load_config(cli)?;
    let (rows, rule) = match cli.command {
        Command::Kernel => commands::kernel(&cfg)?,
        Command::Dirichlet => commands::dirichlet(&cfg)?,
        Command::Verify => (verify::verify(&cfg)?, None),
        Command::HuaLimit => commands::hua_limit(&cfg)?,
        Command::Almansi => commands::almansi(&cfg)?,
        Command::Dims => commands::dims(&cfg)?,
    };
    let table = ResultTable {
        metadata: Metadata::new(cli.command.name(), &cfg, rule),
        rows,
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => table.write_json(&mut out)?,
    }
    out.flush()?;
    Ok(table.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("polyharm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
