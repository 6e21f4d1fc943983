use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Decide equivalence and inclusion of DAG independence models.
///
/// Exit codes: 0 for an affirmative result, 1 for a negative decision,
/// 2 for errors.
#[derive(Debug, Parser)]
#[command(name = "daginc", version)]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Are A and B d-separated given C?
    Dsep {
        file: PathBuf,
        /// Comma-separated node names.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        c: Vec<String>,
    },
    /// List every d-separation statement of a graph.
    Model { file: PathBuf },
    /// Do K and L induce the same model?
    Equiv {
        k: PathBuf,
        l: PathBuf,
        /// Also print legal reversals turning L into K.
        #[arg(long)]
        sequence: bool,
    },
    /// Is the model of K contained in the model of L?
    Includes { k: PathBuf, l: PathBuf },
    /// Evaluate a ladder of local conditions for I(K) ⊆ I(L).
    Conditions {
        k: PathBuf,
        l: PathBuf,
        #[arg(long, value_enum)]
        set: SetArg,
    },
    /// Reversals, one addition, reversals: L to K when K has one more edge.
    OneEdge { l: PathBuf, k: PathBuf },
    /// Shortest sequence of legal reversals and additions from L to K.
    Meek {
        l: PathBuf,
        k: PathBuf,
        /// Depth bound; the default scales with the size of K.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Sweep pairs of graphs for notable cases.
    Fuzz {
        #[arg(value_enum)]
        mode: FuzzMode,
        /// Node count (for `locality`, the longest path length).
        #[arg(long)]
        n: usize,
        /// Visit every ordered pair (the default without --trials).
        #[arg(long, conflicts_with_all = ["seed", "trials"])]
        exhaustive: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Count labeled DAGs on n nodes.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Replay a sequence of operations on a start graph.
    Replay {
        start: PathBuf,
        /// Text file of `reverse a -> b` / `add a -> b` lines, or a JSON
        /// document printed by `equiv --sequence`, `one-edge` or `meek`.
        ops: PathBuf,
        /// Graph the replay must end at.
        #[arg(long)]
        target: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Basic,
    Verma,
    Inclusion,
    Graphical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzMode {
    Meek,
    Conditions,
    Locality,
}
