//! `citenet`: command-line front end for the citation network toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 the algorithm
//! refused the input. Failures print a single `error: ...` line on stderr.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "citenet", version, about = "Community detection and evaluation for citation networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree statistics and histogram.
    Stats(StatsArgs),
    /// Keep the largest component, then drop low-degree nodes.
    Clean(CleanArgs),
    /// Partition a graph into communities.
    Cluster(ClusterArgs),
    /// Write size, link, fragmentation and purity reports for a partition.
    Eval(EvalArgs),
    /// Size of the depth-limited neighborhood around a node.
    Neighborhood(NeighborhoodArgs),
    /// Fold small clusters into the large cluster most of their links go to.
    MergeSmall(MergeSmallArgs),
    /// Sample a planted-partition graph.
    Generate(GenerateArgs),
    /// Repeat the run recorded in a manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Edge list, one `src dst` pair per line.
    pub graph: PathBuf,
    /// Directory for degree_histogram.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also list the highest-degree nodes.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CleanArgs {
    pub graph: PathBuf,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub keep_lcc: bool,
    /// Remove nodes with degree at most K.
    #[arg(long, value_name = "K")]
    pub prune_degree: Option<usize>,
    /// Keep pruning until no node has degree at most K.
    #[arg(long, requires = "prune_degree")]
    pub iterative: bool,
    /// Cleaned edge list.
    #[arg(long)]
    pub out: PathBuf,
    /// New-to-old id mapping; defaults to mapping.tsv beside the output.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Louvain,
    Leiden,
    Spectral,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Louvain => "louvain",
            Algo::Leiden => "leiden",
            Algo::Spectral => "spectral",
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "leiden")]
    pub algo: Algo,
    /// Resolution γ, or `paper` for 0.05.
    #[arg(long, default_value = "1", value_parser = parse_resolution)]
    pub resolution: f64,
    /// Number of clusters; spectral only.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest node count spectral clustering will attempt.
    #[arg(long)]
    pub spectral_cap: Option<usize>,
    /// Partition file, `node<TAB>cluster` per line.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    /// Ground-truth labels, `node<TAB>label` per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub report_dir: PathBuf,
    /// Resolution used for the reported quality.
    #[arg(long, default_value = "1", value_parser = parse_resolution)]
    pub resolution: f64,
}

#[derive(Debug, Args)]
pub struct NeighborhoodArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub node: usize,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct MergeSmallArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    /// Clusters with fewer members than this are merge candidates.
    #[arg(long)]
    pub min_size: usize,
    #[arg(long, default_value = "1", value_parser = parse_resolution)]
    pub resolution: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Block sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long)]
    pub p_in: f64,
    #[arg(long)]
    pub p_out: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge list output.
    #[arg(long)]
    pub out: PathBuf,
    /// Planted block of every node, `node<TAB>blockB` per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub manifest: PathBuf,
}

fn parse_resolution(s: &str) -> Result<f64, String> {
    if s == "paper" {
        return Ok(citenet::clustering::Resolution::PAPER_TUNED.value());
    }
    let gamma: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if gamma > 0.0 && gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CITENET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("CITENET_THREADS must be a positive integer, got {value:?}")))?;
    // Fails only if a pool already exists, as on a rerun; the cap then stands.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn run(argv: &[String]) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return Err(CliError::Usage("no command given; try --help".into()));
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    configure_threads()?;
    let args = &argv[1..];
    match cli.command {
        Command::Stats(a) => commands::stats(&a),
        Command::Clean(a) => commands::clean(&a, args),
        Command::Cluster(a) => commands::cluster(&a, args),
        Command::Eval(a) => commands::eval(&a),
        Command::Neighborhood(a) => commands::neighborhood(&a),
        Command::MergeSmall(a) => commands::merge_small(&a, args),
        Command::Generate(a) => commands::generate(&a, args),
        Command::Rerun(a) => {
            let replay = commands::rerun_argv(&a)?;
            run(&replay)
        }
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    if let Err(e) = run(&argv) {
        let message = e.to_string().replace('\n', " ");
        eprintln!("error: {message}");
        std::process::exit(e.code());
    }
}
