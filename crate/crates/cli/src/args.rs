//! Command-line surface: one subcommand per pipeline stage, plus global
//! output, budget, and tolerance options that may appear anywhere.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "vecflow",
    version,
    about = "Unit-vector flows, group flows, and equiangular sphere immersions",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args)]
pub struct GlobalOpts {
    /// Write the primary JSON output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Write a run manifest (command, parameters, input hashes,
    /// tolerances, outcome, timing) to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    /// Search budget in milliseconds for exhaustive solvers
    /// (default: unlimited).
    #[arg(long, global = true, value_name = "MS", env = "VECFLOW_BUDGET_MS")]
    pub budget: Option<u64>,

    /// Maximum allowed deviation of a value norm from 1.
    #[arg(long, global = true, value_name = "EPS")]
    pub eps_unit: Option<f64>,

    /// Maximum allowed norm of a per-vertex balance residual.
    #[arg(long, global = true, value_name = "EPS")]
    pub eps_kcl: Option<f64>,

    /// Maximum allowed deviation of a departure angle from 2*pi/3.
    #[arg(long, global = true, value_name = "EPS")]
    pub eps_angle: Option<f64>,

    /// Distance below which two flow values (up to sign) fall into the
    /// same direction class.
    #[arg(long, global = true, value_name = "EPS")]
    pub clustering: Option<f64>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a graph from a named family.
    Gen(GenArgs),
    /// Suppress degree-2 vertices and split higher-degree vertices until
    /// the graph is cubic, reporting the edge trace.
    Reduce(ReduceArgs),
    /// Search exhaustively for a nowhere-zero group flow.
    SolveGroup(SolveGroupArgs),
    /// Construct a unit-vector flow (circle, sphere, or 7-dimensional).
    SolveVector(SolveVectorArgs),
    /// Build an equiangular sphere immersion.
    Immerse(ImmerseArgs),
    /// Read the unit-vector flow off an immersion's arc axes.
    FlowFromImmersion(FlowFromImmersionArgs),
    /// Rebuild an immersion from a 3-dimensional unit-vector flow.
    ImmersionFromFlow(ImmersionFromFlowArgs),
    /// Splice one graph into another at a pair of equal-degree vertices.
    Inject(InjectArgs),
    /// Splice two flow-carrying graphs and transfer their flows.
    InjectFlow(InjectFlowArgs),
    /// Replace a vertex of a cubic graph by a triangle, extending a flow
    /// over the new edges when one is given.
    Blowup(BlowupArgs),
    /// Combine flows on edge-decomposition parts into one flow on the
    /// host graph.
    Compose(ComposeArgs),
    /// Analyse a flow's value classes: balance matrix rank, mod-2 span,
    /// odd-coordinate verdict, and the Klein-four certificate when the
    /// hypotheses hold.
    Rank(RankArgs),
    /// Convert a qualifying sphere flow into a nowhere-zero
    /// Klein-four-group flow certificate.
    FourFlow(FourFlowArgs),
    /// Check a flow, immersion, or certificate against its graph.
    Verify(VerifyArgs),
    /// Sample an immersion's arcs into polylines for plotting.
    Export(ExportArgs),
}

impl Command {
    /// The subcommand name as typed, for manifests and diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Reduce(_) => "reduce",
            Command::SolveGroup(_) => "solve-group",
            Command::SolveVector(_) => "solve-vector",
            Command::Immerse(_) => "immerse",
            Command::FlowFromImmersion(_) => "flow-from-immersion",
            Command::ImmersionFromFlow(_) => "immersion-from-flow",
            Command::Inject(_) => "inject",
            Command::InjectFlow(_) => "inject-flow",
            Command::Blowup(_) => "blowup",
            Command::Compose(_) => "compose",
            Command::Rank(_) => "rank",
            Command::FourFlow(_) => "four-flow",
            Command::Verify(_) => "verify",
            Command::Export(_) => "export",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    K4,
    Petersen,
    Cube,
    TripleEdge,
    TwoTrianglesBridge,
    Complete,
    CompleteBipartite,
    Cycle,
    GeneralizedPetersen,
    QuasiPetersen,
}

#[derive(Args)]
pub struct GenArgs {
    /// Graph family to generate.
    #[arg(long, value_enum)]
    pub family: Family,
    /// Size parameter: vertices of `complete`/`cycle`, outer length of
    /// `generalized-petersen`, right side of `complete-bipartite`.
    #[arg(long)]
    pub n: Option<u32>,
    /// Left side of `complete-bipartite`.
    #[arg(long)]
    pub m: Option<u32>,
    /// Inner step of `generalized-petersen`.
    #[arg(long)]
    pub k: Option<u32>,
    /// Outer circulant step of `quasi-petersen`.
    #[arg(long)]
    pub a: Option<u32>,
    /// Inner circulant step of `quasi-petersen`.
    #[arg(long)]
    pub b: Option<u32>,
    /// Layer size of `quasi-petersen`.
    #[arg(long)]
    pub p: Option<u32>,
}

#[derive(Args)]
pub struct ReduceArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
}

#[derive(Args)]
pub struct SolveGroupArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Group, written as a product of cyclic factors: z3, z4, z6, z2xz2, ...
    #[arg(long)]
    pub group: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VectorKind {
    /// Signs on an even graph (a 0-sphere flow).
    S0,
    /// Cube roots of unity in the plane (a circle flow).
    S1,
    /// The 7-dimensional flow composed from an edge decomposition.
    S6,
}

#[derive(Args)]
pub struct SolveVectorArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Which construction to run.
    #[arg(long, value_enum)]
    pub kind: VectorKind,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Bipartite cubic graph on two antipodal points.
    TwoPoint,
    /// Bipartite cubic graph on a single point.
    OnePoint,
    /// The complete graph on four vertices, apex above a latitude circle.
    K4,
    /// Two circulant bands joined by a meridian matching.
    QuasiPetersen,
}

#[derive(Args)]
pub struct ImmerseArgs {
    /// Which construction to run.
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// Input graph file (two-point and one-point constructions).
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Outer circulant step (quasi-petersen).
    #[arg(long)]
    pub a: Option<u32>,
    /// Inner circulant step (quasi-petersen).
    #[arg(long)]
    pub b: Option<u32>,
    /// Layer size (quasi-petersen).
    #[arg(long)]
    pub p: Option<u32>,
    /// Also sample every arc into this many points, added to the output
    /// under "polylines".
    #[arg(long, value_name = "N")]
    pub export_polylines: Option<usize>,
}

#[derive(Args)]
pub struct FlowFromImmersionArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Input immersion file.
    #[arg(long, value_name = "FILE")]
    pub immersion: PathBuf,
}

#[derive(Args)]
pub struct ImmersionFromFlowArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Input 3-dimensional vector flow file.
    #[arg(long, value_name = "FILE")]
    pub flow: PathBuf,
}

#[derive(Args)]
pub struct InjectArgs {
    /// Host graph file (keeps its vertex and edge ids).
    #[arg(long, value_name = "FILE")]
    pub host: PathBuf,
    /// Host vertex to remove.
    #[arg(long, value_name = "ID")]
    pub host_vertex: u32,
    /// Guest graph file (relabelled into fresh ids).
    #[arg(long, value_name = "FILE")]
    pub guest: PathBuf,
    /// Guest vertex to remove.
    #[arg(long, value_name = "ID")]
    pub guest_vertex: u32,
    /// Explicit bridge pairing "guestEdge:hostEdge,..." (default: by
    /// edge-id order).
    #[arg(long, value_name = "PAIRS")]
    pub pairing: Option<String>,
}

#[derive(Args)]
pub struct InjectFlowArgs {
    /// Host graph file (keeps its vertex and edge ids).
    #[arg(long, value_name = "FILE")]
    pub host: PathBuf,
    /// Host vector flow file (3-dimensional).
    #[arg(long, value_name = "FILE")]
    pub host_flow: PathBuf,
    /// Host vertex to remove.
    #[arg(long, value_name = "ID")]
    pub host_vertex: u32,
    /// Guest graph file (relabelled into fresh ids).
    #[arg(long, value_name = "FILE")]
    pub guest: PathBuf,
    /// Guest vector flow file (3-dimensional).
    #[arg(long, value_name = "FILE")]
    pub guest_flow: PathBuf,
    /// Guest vertex to remove.
    #[arg(long, value_name = "ID")]
    pub guest_vertex: u32,
    /// Explicit bridge pairing "guestEdge:hostEdge,..." (default: by
    /// edge-id order).
    #[arg(long, value_name = "PAIRS")]
    pub pairing: Option<String>,
}

#[derive(Args)]
pub struct BlowupArgs {
    /// Input cubic graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Vertex to replace by a triangle.
    #[arg(long, value_name = "ID")]
    pub vertex: u32,
    /// Optional 3-dimensional vector flow to extend over the triangle.
    #[arg(long, value_name = "FILE")]
    pub flow: Option<PathBuf>,
}

#[derive(Args)]
pub struct ComposeArgs {
    /// Host graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Part files, each {"graph": ..., "flow": ...}; repeatable.
    #[arg(long = "part", value_name = "FILE", required = true)]
    pub parts: Vec<PathBuf>,
    /// How many parts must contain each host edge.
    #[arg(long, value_name = "L")]
    pub multiplicity: usize,
}

#[derive(Args)]
pub struct RankArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Input vector flow file.
    #[arg(long, value_name = "FILE")]
    pub flow: PathBuf,
}

#[derive(Args)]
pub struct FourFlowArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Input vector flow file.
    #[arg(long, value_name = "FILE")]
    pub flow: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Input graph file.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Vector flow to verify.
    #[arg(long, value_name = "FILE")]
    pub flow: Option<PathBuf>,
    /// Group flow to verify.
    #[arg(long, value_name = "FILE")]
    pub group_flow: Option<PathBuf>,
    /// Immersion to verify.
    #[arg(long, value_name = "FILE")]
    pub immersion: Option<PathBuf>,
    /// Klein-four certificate to verify.
    #[arg(long, value_name = "FILE")]
    pub certificate: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExportArgs {
    /// Input immersion file.
    #[arg(long, value_name = "FILE")]
    pub immersion: PathBuf,
    /// Points sampled per arc (at least 2).
    #[arg(long, value_name = "N")]
    pub samples: usize,
}
