use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gwloc_cli::config::parse_seeds;
use gwloc_cli::{enumerate, run_compute, run_integral, CliError, Command, EnumKind, EnumerateArgs, Outcome, RunConfig};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "gwloc", version, about = "Genus-zero and genus-one hypersurface invariants by torus localization")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List index sets or fixed loci as JSON.
    Enumerate {
        /// triples | curve-splits | map-splits | g0-trees | g1-effective | refined-trees
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Genus of the curve splits.
        #[arg(long, default_value_t = 1)]
        genus: u8,
        /// Size of the secondary ground set for curve splits.
        #[arg(long, default_value_t = 0)]
        secondary: u32,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute an invariant at each seed.
    Compute(RunArgs),
    /// Only check that all seeds agree.
    Check(RunArgs),
    /// Evaluate one intersection number.
    Integrals {
        /// e.g. `g0:1,0,0,0`, `g1:2,0`, `g1l:0,1`, `blowup:7,1`
        #[arg(long)]
        query: String,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    genus: u8,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long)]
    a: u32,
    /// Comma-separated weight seeds.
    #[arg(long, default_value = "0,1")]
    seeds: String,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    breakdown: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, command: Command) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            command,
            genus: self.genus,
            n: self.n,
            d: self.d,
            k: self.k,
            a: self.a,
            seeds: parse_seeds(&self.seeds)?,
            cache_dir: self.cache_dir.clone(),
            breakdown: self.breakdown,
        })
    }
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Enumerate { kind, n, d, k, genus, secondary, cache_dir, out } => {
            let args = EnumerateArgs { kind: EnumKind::parse(&kind)?, n, d, k, genus, secondary, cache_dir };
            emit(&enumerate(&args)?, out.as_ref())
        }
        Cmd::Compute(args) => finish(run_compute(&args.config(Command::Compute)?)?, args.out.as_ref()),
        Cmd::Check(args) => finish(run_compute(&args.config(Command::Check)?)?, args.out.as_ref()),
        Cmd::Integrals { query } => emit(&run_integral(&query)?, None),
    }
}

fn finish(outcome: Outcome, out: Option<&PathBuf>) -> Result<(), CliError> {
    emit(&outcome.doc, out)?;
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gwloc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
