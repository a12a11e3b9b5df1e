//! `ejnet`: run topology, broadcast and analytics experiments on
//! Eisenstein-Jacobi networks and write plot-ready CSV or JSON.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 budget exceeded,
//! 4 internal invariant or half-duplex violation.

mod commands;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ejnet::broadcast::Algorithm;

#[derive(Parser, Debug)]
#[command(
    name = "ejnet",
    version,
    about = "Eisenstein-Jacobi network experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Node count, diameter and distance histogram (BFS and closed form).
    Topology(TopologyArgs),
    /// Simulate one-to-all broadcast and write the per-step table.
    Broadcast(BroadcastArgs),
    /// Simulate the three-phase all-to-all broadcast.
    Alltoall(AllToAllArgs),
    /// Per-step counts from the closed forms, without simulating.
    Analytic(AnalyticArgs),
    /// Average per-step counts over a family of networks, or the
    /// total-senders table with `--table3`.
    Compare(CompareArgs),
}

/// A generator `a+bρ`, written `a,b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alpha {
    pub a: i64,
    pub b: i64,
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad coefficient `{v}`: {e}"))
        };
        Ok(Alpha {
            a: parse(a)?,
            b: parse(b)?,
        })
    }
}

/// One family member `a,b,n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Member {
    pub alpha: Alpha,
    pub dims: u32,
}

impl FromStr for Member {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (ab, n) = s
            .rsplit_once(',')
            .ok_or_else(|| format!("expected `a,b,n`, got `{s}`"))?;
        Ok(Member {
            alpha: ab.parse()?,
            dims: n
                .trim()
                .parse()
                .map_err(|e| format!("bad dimension count `{n}`: {e}"))?,
        })
    }
}

/// `n` or an inclusive range `lo..hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimRange(pub RangeInclusive<u32>);

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad dimension `{v}`: {e}"))
        };
        let range = match s.split_once("..") {
            Some((lo, hi)) => parse(lo)?..=parse(hi.trim_start_matches('='))?,
            None => {
                let n = parse(s)?;
                n..=n
            }
        };
        if range.is_empty() {
            return Err(format!("empty range `{s}`"));
        }
        Ok(DimRange(range))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmChoice {
    Previous,
    Improved,
    Both,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::Previous => vec![Algorithm::Previous],
            AlgorithmChoice::Improved => vec![Algorithm::Improved],
            AlgorithmChoice::Both => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TopologyArgs {
    /// Generator `a,b` for α = a + bρ.
    #[arg(long, default_value = "3,4")]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    pub dims: u32,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BroadcastArgs {
    #[arg(long, default_value = "3,4")]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    pub dims: u32,
    #[arg(long, value_enum, default_value = "improved")]
    pub algorithm: AlgorithmChoice,
    /// Source node index.
    #[arg(long, default_value_t = 0)]
    pub source: u64,
    /// Print the source node's residue coordinates.
    #[arg(long)]
    pub show_coords: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AllToAllArgs {
    #[arg(long, default_value = "2,3")]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    pub dims: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AnalyticArgs {
    #[arg(long, default_value = "3,4")]
    pub alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    pub dims: u32,
    #[arg(long, value_enum, default_value = "improved")]
    pub algorithm: AlgorithmChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Family member `a,b,n`; repeat for several. Defaults to the 12-step
    /// family 1+2ρ^(12), 2+3ρ^(6), 3+4ρ^(4), 4+5ρ^(3), 6+7ρ^(2).
    #[arg(long = "family", value_name = "A,B,N")]
    pub family: Vec<Member>,
    /// Emit the total-senders table for `--alpha` over `--dims` instead.
    #[arg(long)]
    pub table3: bool,
    #[arg(long, default_value = "3,4")]
    pub alpha: Alpha,
    /// Dimension range for `--table3`, e.g. `1..6`.
    #[arg(long, default_value = "1..6")]
    pub dims: DimRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Topology(args) => commands::topology(&args),
        Command::Broadcast(args) => commands::broadcast(&args),
        Command::Alltoall(args) => commands::all_to_all(&args),
        Command::Analytic(args) => commands::analytic(&args),
        Command::Compare(args) => commands::compare(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
