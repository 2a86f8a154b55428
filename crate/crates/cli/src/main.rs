//! `tetquery`: generate, load, query and benchmark tetrahedral meshes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tetquery", version, about = "Tetrahedral mesh queries")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Mesh archive to read.
    #[arg(long, global = true)]
    pub mesh: Option<PathBuf>,
    /// Output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Field delimiter for text files: one character, or `tab`.
    #[arg(long, global = true, default_value = ",")]
    pub delimiter: String,
    /// Worker threads for batch queries (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Containment tolerance.
    #[arg(long, global = true, default_value_t = 1e-15)]
    pub epsilon: f64,
    /// Face crossings allowed per walk (default: 10 * ceil(n^(1/3)) + 100).
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Walk starts tried per point.
    #[arg(long, global = true, default_value_t = 4)]
    pub fanout: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a box mesh of Kuhn-subdivided cells as an archive.
    Gen {
        /// Cells along x (and y, z unless given).
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long)]
        nz: Option<usize>,
        /// Lower box corner `x,y,z`.
        #[arg(long, default_value = "0,0,0")]
        lo: String,
        /// Upper box corner `x,y,z`.
        #[arg(long, default_value = "1,1,1")]
        hi: String,
    },
    /// Load vertex and element files into an archive.
    Load {
        /// Rows `VertexID,x,y,z`.
        #[arg(long)]
        vertices: PathBuf,
        /// Rows `ElemID,v0,v1,v2,v3`.
        #[arg(long)]
        tets: PathBuf,
    },
    /// Export an archive to text files.
    Save {
        #[arg(long)]
        vertices: PathBuf,
        #[arg(long)]
        tets: PathBuf,
        /// Also write normalized rows `ElemID,Rank,VertexID`.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
    /// List every consistency violation; exits 1 if there are any.
    Validate {
        #[arg(long, requires = "tets")]
        vertices: Option<PathBuf>,
        #[arg(long, requires = "vertices")]
        tets: Option<PathBuf>,
    },
    /// Containing element of each point (`x,y,z,ElemID`, -1 outside).
    Locate {
        #[arg(long)]
        points: PathBuf,
    },
    /// Interpolate a nodal field (`VertexID,value`) at each point.
    Interp {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Boundary triangles, oriented by their element.
    Surface {
        /// Write `TriID,Rank,VertexID` rows of the unoriented surface instead.
        #[arg(long)]
        unoriented: bool,
    },
    /// Split elements into `n` Hilbert-ordered parts (`ElemID,PartitionID`).
    Partition {
        #[arg(long)]
        n: usize,
    },
    /// Time point location on random point clouds.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchMode::Fixed)]
        mode: BenchMode,
        /// Cloud center `x,y,z` (fixed mode; default: mesh box center).
        #[arg(long)]
        center: Option<String>,
        /// Cloud radius (fixed mode) or largest radius (random mode).
        #[arg(long)]
        radius: f64,
        /// Number of clouds (random mode).
        #[arg(long, default_value_t = 1)]
        clouds: usize,
        /// Points per cloud (random mode).
        #[arg(long)]
        points_per_cloud: Option<usize>,
        #[arg(long, default_value_t = 20_000)]
        total: usize,
        /// Timed repetitions; each prints one row.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMode {
    Fixed,
    Random,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
