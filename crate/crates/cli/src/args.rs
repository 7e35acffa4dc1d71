use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqtree::exact::SearchBudget;

#[derive(Debug, Parser)]
#[command(name = "eqtree", version, about = "Equitable tree-colorings of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Color a graph with the constructive solver.
    Solve(SolveArgs),
    /// Decide colorability exactly, or compute va_eq / va_eq*.
    Exact(ExactArgs),
    /// Run a batch of instances from a JSON config and write CSV.
    Experiment(ExperimentArgs),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Check a coloring against a graph.
    Verify(VerifyArgs),
    /// Print size, degeneracy, maximum degree and degree-bound violations.
    Measure(MeasureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edgelist,
    Dimacs,
}

#[derive(Debug, Clone, Args)]
pub struct GraphInput {
    /// Graph file.
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted (.col and
    /// .dimacs are DIMACS, anything else an edge list).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Node limit for the exact search.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget_nodes: u64,
    /// Wall-clock limit for the exact search, in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub budget_secs: f64,
}

impl BudgetArgs {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            node_limit: self.budget_nodes,
            time_limit: Duration::from_secs_f64(self.budget_secs.max(0.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KPolicyArg {
    /// `ceil((Δ + 1) / 2)`.
    TheoremMin,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Number of colors.
    #[arg(long, conflicts_with = "k_policy")]
    pub k: Option<usize>,
    /// How to pick k when --k is absent (default theorem-min).
    #[arg(long, value_enum)]
    pub k_policy: Option<KPolicyArg>,
    /// On a stuck state, decide with the exact solver when n <= 24.
    #[arg(long)]
    pub fallback_exact: bool,
    /// Check forest, size and protection conditions after every step.
    #[arg(long)]
    pub debug: bool,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where a stuck state snapshot goes (default: next to --out, or
    /// eqtree-snapshot.json).
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactMode {
    Decide,
    VaEq,
    VaEqStar,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, value_enum, default_value = "decide")]
    pub mode: ExactMode,
    /// Number of colors, required for `decide`.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Experiment config (JSON).
    pub config: PathBuf,
    /// CSV output; overrides the config's `output`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// First seed; overrides the config's `seeds.start`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; overrides the config's `threads`.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomDDegenerate,
    CompleteBipartite,
    Complete,
    Cycle,
    Path,
    TreewidthGadget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttachArg {
    Uniform,
    Skewed,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Generator description as JSON, e.g. `{"kind":"cycle","n":5}`.
    #[arg(long, conflicts_with = "kind")]
    pub spec: Option<String>,
    #[arg(long, value_enum, required_unless_present = "spec")]
    pub kind: Option<GenKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Size of the independent side of the treewidth gadget.
    #[arg(long)]
    pub s_count: Option<usize>,
    #[arg(long, value_enum, default_value = "uniform")]
    pub attach: AttachArg,
    #[arg(long)]
    pub min_max_degree: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Coloring JSON: either a bare coloring or the output of `solve`.
    pub coloring: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub graph: GraphInput,
}
