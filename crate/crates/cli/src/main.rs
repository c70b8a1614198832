//! `netepi`: generate contact networks, measure them, simulate epidemics and
//! run the reference experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "netepi", version, about = "Epidemic simulation on contact networks")]
struct Cli {
    /// Worker threads for replicate sweeps (defaults to all cores).
    #[arg(long, global = true, env = "NETEPI_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Report degree statistics of an edge-list file as JSON.
    Metrics(MetricsArgs),
    /// Run one simulation from a JSON run configuration.
    Simulate(SimulateArgs),
    /// Run a replicate sweep described by a JSON spec.
    Sweep(SweepArgs),
    /// Epidemic scope versus infection rate on BA, ER, WS and well-mixed populations.
    Exp01(Exp01Args),
    /// ER versus BA scope across network densities at matched mean degree.
    Exp02(Exp02Args),
    /// Degree-cap lockdown introduced at different times.
    Exp03(Exp03Args),
    /// SIRS waves with waning immunity.
    Exp04(Exp04Args),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(subcommand)]
    model: ModelArgs,
    /// Output file (stdout when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ModelArgs {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Watts–Strogatz small world.
    Ws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p_rewire: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Barabási–Albert preferential attachment.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Edge-list file: one `u v` pair per line, `#` starts a comment.
    input: PathBuf,
    /// Relabel arbitrary node ids to 0..n-1 in order of first appearance.
    #[arg(long)]
    compact_ids: bool,
    /// Fix the lower cutoff of the power-law fit instead of choosing it.
    #[arg(long)]
    k_min: Option<usize>,
    /// Write the report to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
enum SeedArg {
    Auto,
    Value(u64),
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s == "auto" {
        return Ok(SeedArg::Auto);
    }
    s.parse()
        .map(SeedArg::Value)
        .map_err(|_| format!("expected an integer or `auto`, got `{s}`"))
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON run configuration.
    #[arg(short, long)]
    config: PathBuf,
    /// Override `init.seed`; `auto` draws a fresh seed and prints it.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<SeedArg>,
    /// Override the trajectory CSV path.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Override the summary JSON path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON sweep specification.
    #[arg(short, long)]
    spec: PathBuf,
    #[arg(short, long, default_value = "sweep.csv")]
    output: PathBuf,
}

/// Overrides shared by the canned experiments.
#[derive(Debug, Args)]
struct CommonExpArgs {
    /// JSON file with experiment settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Base seed; replicate j uses seed + j.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NetworkKind {
    All,
    Ba,
    Er,
    Ws,
    WellMixed,
}

#[derive(Debug, Args)]
struct Exp01Args {
    #[command(flatten)]
    common: CommonExpArgs,
    /// Networks to include (comma separated). ER rows are always present as
    /// the reference.
    #[arg(long, value_enum, value_delimiter = ',')]
    network: Vec<NetworkKind>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    beta_step: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(short, long, default_value = "exp01.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct Exp02Args {
    #[command(flatten)]
    common: CommonExpArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Target densities (comma separated).
    #[arg(long, value_delimiter = ',')]
    densities: Option<Vec<f64>>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(short, long, default_value = "exp02.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct Exp03Args {
    #[command(flatten)]
    common: CommonExpArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Lockdown trigger times (comma separated).
    #[arg(long, value_delimiter = ',')]
    triggers: Option<Vec<f64>>,
    /// Fraction of the remaining horizon skipped before the window opens.
    #[arg(long)]
    delay_fraction: Option<f64>,
    #[arg(short, long, default_value = "exp03.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct Exp04Args {
    #[command(flatten)]
    common: CommonExpArgs,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Skip the alpha = 0 control runs.
    #[arg(long)]
    no_control: bool,
    /// Write one `t,I_mean` CSV per network and alpha into this directory.
    #[arg(long)]
    curves_dir: Option<PathBuf>,
    #[arg(short, long, default_value = "exp04.csv")]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot set up {threads} worker threads: {e}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    }
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
