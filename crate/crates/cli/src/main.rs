use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperholo_cli::config::parse_suites;
use hyperholo_cli::{
    cmd_convergence, cmd_gauss_selftest, cmd_integral, cmd_list_generators, cmd_verify,
    ConfigError, RunConfig, EXIT_USAGE,
};

#[derive(Parser)]
#[command(
    name = "hyperholo",
    version,
    about = "Numerical checks for complex-like quaternionic functions"
)]
struct Cli {
    /// `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Sampling and field seed (overrides `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suite to run; repeatable (overrides `suites`).
    #[arg(long, global = true)]
    suite: Vec<String>,

    /// Leave the timestamp out of reports.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Extra `key=value` setting applied after the config file; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual suites over the sample window.
    Verify,
    /// Boundary against volume side of the integral theorem.
    Integral,
    /// Integral-theorem mismatch under refinement; writes CSV tables.
    Convergence,
    /// Divergence theorem on random polynomial fields.
    GaussSelftest,
    /// Print the generator grammar.
    ListGenerators,
}

fn load(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: 0,
            text: kv.clone(),
        })?;
        config.set(k.trim(), v.trim())?;
    }
    if let Some(out) = &cli.out {
        config.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        config.window.seed = seed;
    }
    if !cli.suite.is_empty() {
        config.suites = parse_suites(&cli.suite.join(","))?;
    }
    if cli.no_timestamp {
        config.timestamp = false;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::ListGenerators = cli.command {
        return ExitCode::from(cmd_list_generators() as u8);
    }
    let config = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let code = match cli.command {
        Command::Verify => cmd_verify(&config),
        Command::Integral => cmd_integral(&config),
        Command::Convergence => cmd_convergence(&config),
        Command::GaussSelftest => cmd_gauss_selftest(&config),
        Command::ListGenerators => unreachable!(),
    };
    ExitCode::from(code as u8)
}
