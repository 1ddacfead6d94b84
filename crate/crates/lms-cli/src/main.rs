//! `lms` — mesh smoothing, vertex reordering and memory-locality analysis.

mod commands;
mod report;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lms::ordering::OrderingStrategy;
use lms::smoothing::Scheme;

#[derive(Parser)]
#[command(name = "lms", version, about = "Laplacian mesh smoothing and locality analysis")]
struct Cli {
    /// Emit errors as JSON objects on stderr
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic jittered-grid mesh as Triangle .node/.ele files
    Generate(GenerateArgs),
    /// Print a JSON quality summary of a mesh
    Quality(QualityArgs),
    /// Relabel a mesh with an ordering strategy and write the result
    Reorder(ReorderArgs),
    /// Compare orderings: smooth, trace, profile and price each one
    Compare(CompareArgs),
}

/// "ROWSxCOLS" grid dimensions.
#[derive(Clone, Copy, Debug)]
pub struct GridDims {
    pub rows: usize,
    pub cols: usize,
}

impl std::str::FromStr for GridDims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
        let rows = r.trim().parse().map_err(|_| format!("invalid row count {r:?}"))?;
        let cols = c.trim().parse().map_err(|_| format!("invalid column count {c:?}"))?;
        Ok(GridDims { rows, cols })
    }
}

/// Where the input mesh comes from: a .node/.ele pair or a synthetic grid.
#[derive(Args, Debug)]
pub struct SourceArgs {
    /// Triangle .node file (use together with --ele)
    #[arg(long, value_name = "FILE", requires = "ele", conflicts_with = "synthetic")]
    node: Option<PathBuf>,

    /// Triangle .ele file
    #[arg(long, value_name = "FILE", requires = "node")]
    ele: Option<PathBuf>,

    /// Synthetic unit-square grid, e.g. 50x50
    #[arg(long, value_name = "RxC")]
    synthetic: Option<GridDims>,

    /// Interior-vertex jitter for synthetic grids, in [0, 0.5)
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,

    /// RNG seed (synthetic jitter and the random ordering)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SourceArgs {
    /// Loads the mesh and names it (file stem or `synthetic_RxC`).
    fn load(&self) -> Result<(lms::Mesh, String)> {
        match (&self.node, &self.ele, &self.synthetic) {
            (Some(node), Some(ele), None) => {
                let mesh = lms::io::read_mesh(node, ele)?;
                let name = node
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "mesh".to_string());
                Ok((mesh, name))
            }
            (None, None, Some(dims)) => {
                let mesh = lms::synth::generate_synthetic(dims.rows, dims.cols, self.jitter, self.seed)?;
                Ok((mesh, format!("synthetic_{}x{}", dims.rows, dims.cols)))
            }
            _ => bail!("specify a mesh source: either --node FILE --ele FILE or --synthetic RxC"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Ori,
    Random,
    Bfs,
    Rdr,
}

impl From<StrategyArg> for OrderingStrategy {
    fn from(arg: StrategyArg) -> Self {
        match arg {
            StrategyArg::Ori => OrderingStrategy::Original,
            StrategyArg::Random => OrderingStrategy::Random,
            StrategyArg::Bfs => OrderingStrategy::Bfs,
            StrategyArg::Rdr => OrderingStrategy::Rdr,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SchemeArg {
    Jacobi,
    GaussSeidel,
}

impl From<SchemeArg> for Scheme {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::Jacobi => Scheme::Jacobi,
            SchemeArg::GaussSeidel => Scheme::GaussSeidel,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Grid dimensions, e.g. 3x3
    #[arg(long, value_name = "RxC")]
    synthetic: GridDims,

    #[arg(long, default_value_t = 0.0)]
    jitter: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory (mesh.node and mesh.ele are written there)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct QualityArgs {
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Args, Debug)]
pub struct ReorderArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Ordering strategy to apply
    #[arg(long, value_enum)]
    ordering: StrategyArg,

    /// BFS start vertex (default 0)
    #[arg(long, value_name = "VERTEX")]
    bfs_seed: Option<usize>,

    /// Output directory (reordered.node/.ele and the permutation file)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Ordering strategy to include (repeat the flag to compare several)
    #[arg(long = "ordering", value_enum, required = true)]
    orderings: Vec<StrategyArg>,

    /// Convergence criterion on per-iteration quality improvement
    #[arg(long, default_value_t = 0.000005)]
    epsilon: f64,

    /// Iteration cap for the smoothing runs
    #[arg(long, default_value_t = 100)]
    max_iters: usize,

    #[arg(long, value_enum, default_value_t = SchemeArg::Jacobi)]
    scheme: SchemeArg,

    /// Worker threads for the Jacobi scheme
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// BFS start vertex (default 0)
    #[arg(long, value_name = "VERTEX")]
    bfs_seed: Option<usize>,

    /// L1 capacity in bytes
    #[arg(long, default_value_t = 32_768)]
    l1: u64,

    /// L2 capacity in bytes
    #[arg(long, default_value_t = 262_144)]
    l2: u64,

    /// L3 capacity in bytes
    #[arg(long, default_value_t = 25_165_824)]
    l3: u64,

    /// Modeled element size in bytes
    #[arg(long, default_value_t = 66)]
    elem_bytes: u64,

    /// Access latencies c2,c3,cm in cycles
    #[arg(long, value_name = "C2,C3,CM", value_delimiter = ',', default_values_t = [10.0, 38.0, 175.0])]
    lat: Vec<f64>,

    /// Output directory for comparison.json and the CSV reports
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Quality(args) => commands::quality(&args),
        Command::Reorder(args) => commands::reorder(&args),
        Command::Compare(args) => commands::compare(&args),
    };
    if let Err(error) = result {
        if cli.json_errors {
            let payload = serde_json::json!({ "error": format!("{error:#}") });
            eprintln!("{payload}");
        } else {
            eprintln!("error: {error:#}");
        }
        std::process::exit(1);
    }
}
