use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(name = "bautin-lab", version, about = "Exact Bautin invariants and certified zero counts for power series")]
pub struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a replayable run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Decimal digits the caller needs from interval evaluations.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
pub enum Command {
    /// Validate a series file and summarize it.
    Series(SeriesCmd),
    /// Bautin index, rank trace and optionally the largest minor.
    Bautin(BautinCmd),
    /// Transcendence index (total-degree family).
    Nu(NuCmd),
    /// Bautin determinant, numeric or symbolic.
    Delta(DeltaCmd),
    /// Bautin multiplicity of the recentered determinant.
    Eta(EtaCmd),
    /// Evaluate a closed-form bound.
    Bounds(BoundsCmd),
    /// Lacunary series: sandwich, closed-form minor, optional exact index.
    Lacunary(LacunaryCmd),
    /// Iterate a rational recurrence and track denominators.
    Recur(RecurCmd),
    /// Sample seeded random series.
    Random(RandomCmd),
    /// Certified zero count in a disc.
    Zeros(ZerosCmd),
    /// Rational points of bounded height on the graph.
    Ratpoints(RatpointsCmd),
    /// Batch experiments over a grid, emitted as CSV.
    Sweep(SweepCmd),
    /// Re-run a manifest and compare outputs.
    Replay(ReplayCmd),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyArg {
    Square,
    Total,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeArg {
    Exhaustive,
    Heuristic,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SeriesSource {
    /// Series JSON file.
    #[arg(long)]
    pub series: PathBuf,
    /// Truncation order or search cutoff, depending on the subcommand.
    #[arg(long)]
    pub trunc: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SeriesCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    /// Include the height profile h_l, theta_l for l = 1..=L.
    #[arg(long)]
    pub heights: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BautinCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    #[arg(long, value_enum, default_value = "square")]
    pub family: FamilyArg,
    #[arg(long)]
    pub degree: usize,
    /// Also compute the largest nonzero sigma x sigma minor of M_b.
    #[arg(long)]
    pub minor: bool,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Determinant budget for exhaustive minor search.
    #[arg(long)]
    pub budget: Option<u128>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct NuCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DeltaCmd {
    #[arg(long)]
    pub series: Option<PathBuf>,
    #[arg(long)]
    pub degree: usize,
    /// Expand the determinant in indeterminate coefficients instead.
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EtaCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BoundsCmd {
    /// zero_bound_disc, small_disc_radius, c_bound, z_bound_from_minor, z_bound_unit,
    /// z_bound_general, delta_lower, composite_t, lacunary, random_epsilon, rational_point,
    /// remez (a falsification run over random polynomials).
    #[arg(long)]
    pub formula: String,
    /// `name=value` inputs; rationals as p/q, polynomials as comma lists.
    #[arg(long = "arg", value_name = "NAME=VALUE")]
    pub args: Vec<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LacunaryCmd {
    /// LacunarySpec JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub degree: u64,
    /// Also compute nu_d exactly and check it against the sandwich.
    #[arg(long)]
    pub nu: bool,
    /// Also compute the exact determinant of the closed-form minor.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RecurCmd {
    /// RecurrenceSpec JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub trunc: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RandomCmd {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trunc: usize,
    #[arg(long)]
    pub origin_zero: bool,
    /// Number of consecutive seeds; more than one emits JSON lines.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ZerosCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    #[arg(long, value_enum, default_value = "square")]
    pub family: FamilyArg,
    #[arg(long)]
    pub degree: usize,
    /// CurvePolynomial JSON file.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Terms `i,j,c` separated by `;`, for `c z^i y^j`.
    #[arg(long)]
    pub terms: Option<String>,
    /// Count zeros of the witness polynomial.
    #[arg(long)]
    pub witness: bool,
    /// Report the empirical lower estimate of Z_d instead of a single count.
    #[arg(long)]
    pub empirical: bool,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "1/4")]
    pub radius: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RatpointsCmd {
    #[command(flatten)]
    pub src: SeriesSource,
    #[arg(long)]
    pub height: u64,
    /// Per-abscissa CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SweepCmd {
    /// Sweep config JSON.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayCmd {
    pub manifest_path: PathBuf,
}
