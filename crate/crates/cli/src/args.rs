use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hierq",
    version,
    about = "Causal sites, quantum measurement and hierarchic states"
)]
pub struct Cli {
    /// Worker threads for the parallel paths; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the payload to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow a causal site by a seeded branching process.
    GenSite(GenSite),
    /// Neighbour distance between two nodes of a site.
    SiteMetric(SiteMetric),
    /// Check both partial orders of a site.
    SiteVerify(SiteVerify),
    /// Face counts and Euler characteristic of a clique complex.
    Euler(Euler),
    /// Sample projective measurements in the standard basis.
    Collapse(Collapse),
    /// Correlate a two-level system with a two-state pointer.
    Premeasure(Premeasure),
    /// Minimum erasure heat.
    Landauer(Landauer),
    /// Inner product of two hierarchic states.
    HierInner(HierInner),
    /// Sample collapses of a hierarchic state onto its information states.
    HierMeasure(HierMeasure),
    /// Haar integral of a model profile over Z_p.
    ZpIntegrate(ZpIntegrate),
    /// Expectation value of an operator tree.
    OpExpect(OpExpect),
    /// Render a site or a hierarchic state as a DOT graph.
    ExportDot(ExportDot),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecRuleArg {
    Descendant,
    AllEarlier,
}

#[derive(Debug, Args)]
pub struct GenSite {
    /// Children per node, or a comma list of per-step counts (last repeats).
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "branching_weights"
    )]
    pub branching: Vec<u32>,
    /// Weights of spawning 0, 1, 2, ... children; replaces --branching.
    #[arg(long, value_delimiter = ',', conflicts_with = "branching")]
    pub branching_weights: Vec<f64>,
    #[arg(long)]
    pub steps: u32,
    #[arg(long, default_value_t = 0.0)]
    pub halt_prob: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = PrecRuleArg::Descendant)]
    pub prec_rule: PrecRuleArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SiteMetric {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
}

#[derive(Debug, Args)]
pub struct SiteVerify {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    S1,
    S2,
}

#[derive(Debug, Args)]
pub struct Euler {
    #[arg(
        long,
        required_unless_present = "vertices",
        conflicts_with = "vertices"
    )]
    pub preset: Option<Preset>,
    /// Number of vertices, labelled 0..N.
    #[arg(long, requires = "relations")]
    pub vertices: Option<u64>,
    /// Comma list of related pairs such as `0-1,1-2`.
    #[arg(long, value_delimiter = ',')]
    pub relations: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    /// Drop the simplex spanning every vertex.
    #[arg(long)]
    pub exclude_top: bool,
}

#[derive(Debug, Args)]
pub struct Collapse {
    /// Amplitudes as `re` or `re:im`, comma separated; must be normalized.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub amps: Vec<String>,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Schmidt,
    Reduced,
    State,
}

#[derive(Debug, Args)]
pub struct Premeasure {
    /// The two system amplitudes, `re` or `re:im`.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub amps: Vec<String>,
    /// Overlap ε between the pointer branches, in [0, 1].
    #[arg(long)]
    pub overlap: f64,
    #[arg(long, value_enum, default_value_t = Report::Schmidt)]
    pub report: Report,
}

#[derive(Debug, Args)]
pub struct Landauer {
    /// Temperature in kelvin.
    #[arg(long)]
    pub temp: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bits: f64,
}

#[derive(Debug, Args)]
pub struct HierInner {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct HierMeasure {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// φ = 1
    One,
    /// φ = |x|_p^(1/2)
    NormSqrt,
    /// φ = |x|_p
    Norm,
}

#[derive(Debug, Args)]
pub struct ZpIntegrate {
    /// Profile φ; the integrand is |φ|².
    #[arg(long, value_enum)]
    pub profile: Profile,
    #[arg(long)]
    pub p: u32,
    #[arg(long = "K")]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct OpExpect {
    #[arg(long)]
    pub op: PathBuf,
    #[arg(long)]
    pub state: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ExportDot {
    #[arg(long)]
    pub site: Option<PathBuf>,
    #[arg(long)]
    pub state: Option<PathBuf>,
}
