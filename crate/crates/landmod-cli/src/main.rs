use std::path::PathBuf;
use std::process::ExitCode as ProcessExit;

use clap::{Parser, Subcommand};

use landmod_cli::commands::{
    cmd_analyze, cmd_anneal, cmd_bench, cmd_estimate, cmd_info, cmd_oracle, cmd_sample,
    AnalyzeKind, BenchSuite,
};
use landmod_cli::config::Config;
use landmod_cli::report::{Format, OutputDir};
use landmod_cli::CliError;

/// Continuous-time Metropolis sampling on modified energy landscapes:
/// inspection, sampling, estimation, annealing, exact analysis, and
/// benchmark suites over spin models.
#[derive(Parser)]
#[command(name = "landmod", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration file (TOML). Optional for `bench` and
    /// `oracle`, required otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Top-level seed; overrides [run].seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (default: [output].dir or ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Table format: csv or json (default: [output].format or csv).
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Model inspection: state count, ground state, energy range,
    /// proposal gap.
    Info,
    /// Exact analysis reports with asserted inequalities.
    Analyze {
        /// gap | heights | bias | envelope | bounds | condition-k
        which: String,
    },
    /// Dump one trajectory (homogeneous, or annealed when the config has
    /// a [schedule]).
    Sample,
    /// Replica experiments for the self-normalized estimator.
    Estimate,
    /// Empirical annealed-law TV curve against the exact target.
    Anneal,
    /// Scaling tables over a spin-model suite.
    Bench {
        /// ising-hypercube | ising-complete | potts
        suite: String,
    },
    /// Closed-form vs quadrature arbitration sweep.
    Oracle,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Info => "info",
        Command::Analyze { .. } => "analyze",
        Command::Sample => "sample",
        Command::Estimate => "estimate",
        Command::Anneal => "anneal",
        Command::Bench { .. } => "bench",
        Command::Oracle => "oracle",
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = match (&cli.config, &cli.command) {
        (Some(path), _) => Config::load(path)?,
        (None, Command::Bench { .. } | Command::Oracle) => Config::built_in_default(),
        (None, _) => {
            return Err(CliError::config("--config is required for this command"));
        }
    };
    let seed = cli.seed.unwrap_or(config.run.seed);
    let dir = cli
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let format = match cli.format.as_deref().or(config.output.format.as_deref()) {
        Some(f) => Format::parse(f)?,
        None => Format::Csv,
    };
    let mut out = OutputDir::create(&dir, format)?;

    // Seed overrides flow through a single resolved config so the
    // recorded metadata matches what actually ran.
    let mut resolved = config.clone();
    resolved.run.seed = seed;
    let config = resolved;

    let result = match &cli.command {
        Command::Info => cmd_info(&config, &mut out),
        Command::Analyze { which } => {
            let kind = AnalyzeKind::parse(which)?;
            cmd_analyze(&config, kind, &mut out)
        }
        Command::Sample => cmd_sample(&config, seed, &mut out),
        Command::Estimate => cmd_estimate(&config, seed, &mut out),
        Command::Anneal => cmd_anneal(&config, seed, &mut out),
        Command::Bench { suite } => {
            let suite = BenchSuite::parse(suite)?;
            cmd_bench(&config, suite, &mut out)
        }
        Command::Oracle => cmd_oracle(&config, seed, &mut out),
    };

    // Metadata is written even when an assertion failed, so the files on
    // disk always describe themselves.
    let config_text = toml::to_string(&config).unwrap_or_default();
    out.write_meta(command_name(&cli.command), seed, &config_text)?;
    result
}

fn main() -> ProcessExit {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ProcessExit::SUCCESS,
        Err(e) => {
            eprintln!("landmod: {e}");
            ProcessExit::from(e.exit_code() as u8)
        }
    }
}
