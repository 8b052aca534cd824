use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fermient", version, about = "Geometric multipartite entanglement of fermionic mode states")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Master seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format (each command has its own default)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Accept unnormalized input states and rescale them
    #[arg(long, global = true)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ground {
    /// canonical representative of the degenerate ground level
    Canonical,
    /// orthogonal partner of the canonical representative
    Partner,
    /// chiral state with translation eigenvalue e^{-2πi/3}
    ChiralMinus,
    /// chiral state with translation eigenvalue e^{+2πi/3}
    ChiralPlus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement of a state file for one partition
    Measure {
        /// JSON state file
        #[arg(long)]
        state: PathBuf,
        /// Partition such as "1,2|3,4" (1-based modes)
        #[arg(long)]
        partition: String,
    },
    /// Hubbard dimer ground-state entanglement over an α grid
    SweepDimer {
        #[arg(long, default_value_t = 1.0)]
        start: f64,
        #[arg(long, default_value_t = 10.0)]
        stop: f64,
        #[arg(long, default_value_t = 19)]
        points: usize,
    },
    /// Hubbard trimer ground-state entanglement over a β = U/t grid
    SweepTrimer {
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 20.0)]
        stop: f64,
        #[arg(long, default_value_t = 81)]
        points: usize,
        /// Twice the S_z of the block (1 or -1)
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        twice_sz: i32,
        #[arg(long, value_enum, default_value_t = Ground::Canonical)]
        ground: Ground,
    },
    /// Multi-start maximization of E over one particle-number sector
    Maximize {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        particles: usize,
        #[arg(long)]
        partition: String,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
    },
    /// First-order response of E to the four-mode perturbation
    Perturb {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        beta: f64,
        /// Hop between modes 1 and 4
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        f: f64,
        /// Density-density on modes 1, 2
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
        /// Potential on mode 1 (Γ)
        #[arg(long = "big-gamma", default_value_t = 0.0, allow_negative_numbers = true)]
        big_gamma: f64,
        /// Potential on mode 3 (γ)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Hop between modes 1 and 2
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eta: f64,
        #[arg(long)]
        partition: String,
        /// Central-difference step in ε
        #[arg(long, default_value_t = fermient::dynamics::DEFAULT_STEP)]
        step: f64,
    },
    /// Dimensions of the particle-number sectors of M modes
    SectorDims {
        #[arg(long)]
        modes: usize,
        /// Only this particle number
        #[arg(long)]
        particles: Option<usize>,
    },
}
