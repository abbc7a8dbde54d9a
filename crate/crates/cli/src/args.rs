use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spreadrank_core::Method;

#[derive(Debug, Parser)]
#[command(name = "spreadrank", version, about = "Influential spreader identification and SIR evaluation on directed graphs")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, env = "SPREADRANK_WORKERS")]
    pub workers: Option<usize>,

    /// Suppress warnings on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topology statistics as JSON.
    Stats(StatsArgs),
    /// Rank nodes by a centrality or elect spreaders with VoteRank.
    Rank(RankArgs),
    /// Evaluate a spreader set with SIR Monte Carlo runs.
    Sir(SirArgs),
    /// Run a tournament plan and write victory and raw result tables.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list: one `source target` arc per line, `#` comments.
    #[arg(long, value_name = "PATH")]
    pub graph: PathBuf,

    /// Lines are `citing cited`; store arcs in the influence direction.
    #[arg(long)]
    pub reverse_arcs: bool,

    /// Token separator (default: whitespace or commas).
    #[arg(long, value_name = "CHAR")]
    pub delimiter: Option<char>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DegreeModeArg {
    Total,
    In,
    Out,
}

/// How many spreaders to pick: a count, a fraction of the nodes, or all.
#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct SizeArgs {
    /// Number of nodes to select.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: Option<u64>,

    /// Fraction of the nodes to select, in (0, 1].
    #[arg(long, value_parser = parse_fraction)]
    pub fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[arg(long, value_parser = parse_method)]
    pub method: Method,

    #[command(flatten)]
    pub size: SizeArgs,

    /// Degree flavour for `--method degree`.
    #[arg(long, value_enum, default_value = "out")]
    pub degree_mode: DegreeModeArg,

    /// Treat arcs as undirected edges.
    #[arg(long)]
    pub undirected: bool,

    /// Override the VoteRank reduction horizon (hops).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: Option<u64>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SirArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Infection probability per contact and turn.
    #[arg(long, value_parser = parse_probability)]
    pub mu: f64,

    /// Recovery probability per turn, in (0, 1].
    #[arg(long, value_parser = parse_recovery)]
    pub beta: f64,

    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Turn cap per run (default: 10 n).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_turns: Option<u64>,

    /// Spreader labels, one per line.
    #[arg(long, value_name = "PATH", conflicts_with = "method", required_unless_present = "method")]
    pub spreaders_file: Option<PathBuf>,

    /// Select spreaders with this method instead of reading a file.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,

    #[command(flatten)]
    pub size: SizeArgs,

    /// Treat arcs as undirected edges.
    #[arg(long)]
    pub undirected: bool,

    /// Also write the mean R(t) series as `turn,mean_R` CSV.
    #[arg(long, value_name = "PATH")]
    pub curve_out: Option<PathBuf>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// JSON plan; see the README for keys.
    #[arg(long, value_name = "PATH")]
    pub plan: PathBuf,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// Edge list overriding the plan's `graph_path`.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,

    #[arg(long)]
    pub reverse_arcs: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
        format!("unknown method `{s}` (expected one of: {})", names.join(", "))
    })
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let p = parse_float(s)?;
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(format!("fraction must be in (0, 1], got {s}"))
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p = parse_float(s)?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("probability must be in [0, 1], got {s}"))
    }
}

fn parse_recovery(s: &str) -> Result<f64, String> {
    let p = parse_float(s)?;
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(format!("beta must be in (0, 1], got {s}"))
    }
}
