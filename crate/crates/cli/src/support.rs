//! Shared plumbing: failures with exit codes, hashed input reading,
//! orientation resolution, parameter capture, and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use vecflow_core::algebra::AlgebraError;
use vecflow_core::graph::{GeneratorError, GraphError, Multigraph, Orientation};
use vecflow_core::group::{FlowError, GroupError};
use vecflow_core::immersion::ImmersionError;
use vecflow_core::jsonio::{self, JsonError, OrientationEntries};
use vecflow_core::util::Tolerances;
use vecflow_core::vector::VectorError;
use vecflow_core::EdgeId;

use crate::args::{Command, GlobalOpts};

/// Exit code for inputs that fail a command's preconditions.
pub const EXIT_PRECONDITION: u8 = 2;
/// Exit code for searches stopped by the time budget.
pub const EXIT_BUDGET: u8 = 3;

/// A command failure, carrying its exit code and a machine-readable
/// diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub budget_exhausted: bool,
    /// Structured detail (e.g. the numeric report behind a failed
    /// verification), included in the diagnostic.
    pub report: Option<Value>,
}

impl Failure {
    pub fn precondition(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            budget_exhausted: false,
            report: None,
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Failure {
            kind: "budget",
            message: message.into(),
            budget_exhausted: true,
            report: None,
        }
    }

    pub fn with_report(mut self, report: Value) -> Self {
        self.report = Some(report);
        self
    }

    pub fn exit_code(&self) -> u8 {
        if self.budget_exhausted {
            EXIT_BUDGET
        } else {
            EXIT_PRECONDITION
        }
    }

    /// The diagnostic object printed to stderr on failure.
    pub fn diagnostic(&self) -> Value {
        let mut err = Map::new();
        err.insert("kind".into(), Value::from(self.kind));
        err.insert("message".into(), Value::from(self.message.as_str()));
        err.insert("exit".into(), Value::from(self.exit_code()));
        if let Some(report) = &self.report {
            err.insert("report".into(), report.clone());
        }
        let mut root = Map::new();
        root.insert("error".into(), Value::Object(err));
        Value::Object(root)
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::precondition("json", e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::precondition("graph", e.to_string())
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        Failure::precondition("graph", e.to_string())
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        Failure::precondition("group-flow", e.to_string())
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::precondition("group", e.to_string())
    }
}

impl From<VectorError> for Failure {
    fn from(e: VectorError) -> Self {
        match e {
            VectorError::BudgetExhausted => Failure::budget(e.to_string()),
            other => Failure::precondition("vector-flow", other.to_string()),
        }
    }
}

impl From<ImmersionError> for Failure {
    fn from(e: ImmersionError) -> Self {
        Failure::precondition("immersion", e.to_string())
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::precondition("algebra", e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::precondition("io", e.to_string())
    }
}

/// Input files read during a run, with their content hashes, in read
/// order under stable roles.
#[derive(Default)]
pub struct Inputs {
    entries: Vec<(String, PathBuf, String)>,
}

impl Inputs {
    /// Read an input file, remembering its role and SHA-256 hash.
    pub fn read(&mut self, role: &str, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| {
            Failure::precondition("io", format!("cannot read {}: {e}", path.display()))
        })?;
        let hash = hex_digest(&bytes);
        self.entries.push((role.to_string(), path.to_path_buf(), hash));
        String::from_utf8(bytes).map_err(|_| {
            Failure::precondition("io", format!("{} is not UTF-8", path.display()))
        })
    }

    /// The manifest's "inputs" object, keyed by role.
    pub fn manifest_value(&self) -> Value {
        let mut sorted: BTreeMap<&str, (&PathBuf, &str)> = BTreeMap::new();
        for (role, path, hash) in &self.entries {
            sorted.insert(role, (path, hash));
        }
        let mut obj = Map::new();
        for (role, (path, hash)) in sorted {
            let mut entry = Map::new();
            entry.insert("path".into(), Value::from(path.display().to_string()));
            entry.insert("sha256".into(), Value::from(hash));
            obj.insert(role.to_string(), Value::Object(entry));
        }
        Value::Object(obj)
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Tolerances from the defaults with any command-line overrides applied.
pub fn tolerances(global: &GlobalOpts) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(x) = global.eps_unit {
        tol.eps_unit = x;
    }
    if let Some(x) = global.eps_kcl {
        tol.eps_kcl = x;
    }
    if let Some(x) = global.eps_angle {
        tol.eps_angle = x;
    }
    if let Some(x) = global.clustering {
        tol.clustering = x;
    }
    tol
}

pub fn tolerances_value(tol: &Tolerances) -> Value {
    let mut obj = Map::new();
    obj.insert("eps_unit".into(), Value::from(tol.eps_unit));
    obj.insert("eps_kcl".into(), Value::from(tol.eps_kcl));
    obj.insert("eps_angle".into(), Value::from(tol.eps_angle));
    obj.insert("clustering".into(), Value::from(tol.clustering));
    Value::Object(obj)
}

/// Pick the orientation for a data file: the file's own block wins,
/// then the graph file's block, then — when permitted — the canonical
/// orientation.
pub fn resolve_orientation(
    g: &Multigraph,
    own: Option<OrientationEntries>,
    graph_file: Option<&Orientation>,
    allow_canonical: bool,
    what: &str,
) -> Result<Orientation, Failure> {
    if let Some(entries) = own {
        return Ok(Orientation::build(g, entries)?);
    }
    if let Some(o) = graph_file {
        return Ok(o.clone());
    }
    if allow_canonical {
        return Ok(Orientation::canonical(g));
    }
    Err(Failure::precondition(
        "orientation",
        format!("{what} carries no orientation block and neither does the graph file"),
    ))
}

/// Parse a bridge pairing written as "guestEdge:hostEdge,...".
pub fn parse_pairing(text: &str) -> Result<Vec<(EdgeId, EdgeId)>, Failure> {
    let mut pairs = Vec::new();
    for token in text.split(',') {
        let (a, b) = token.split_once(':').ok_or_else(|| {
            Failure::precondition(
                "parameters",
                format!("pairing entry \"{token}\" is not guestEdge:hostEdge"),
            )
        })?;
        let parse = |s: &str| {
            s.trim().parse::<u32>().map_err(|_| {
                Failure::precondition(
                    "parameters",
                    format!("pairing entry \"{token}\" has a non-numeric edge id"),
                )
            })
        };
        pairs.push((EdgeId(parse(a)?), EdgeId(parse(b)?)));
    }
    Ok(pairs)
}

fn insert_opt<T: Into<Value>>(obj: &mut Map<String, Value>, key: &str, v: &Option<T>)
where
    T: Clone,
{
    if let Some(x) = v {
        obj.insert(key.to_string(), x.clone().into());
    }
}

fn path_value(p: &Path) -> Value {
    Value::from(p.display().to_string())
}

/// The manifest's "parameters" object: every explicitly given
/// subcommand argument, keyed by flag name.
pub fn parameters(cmd: &Command) -> Value {
    let mut p = Map::new();
    match cmd {
        Command::Gen(a) => {
            let family = match a.family {
                crate::args::Family::K4 => "k4",
                crate::args::Family::Petersen => "petersen",
                crate::args::Family::Cube => "cube",
                crate::args::Family::TripleEdge => "triple-edge",
                crate::args::Family::TwoTrianglesBridge => "two-triangles-bridge",
                crate::args::Family::Complete => "complete",
                crate::args::Family::CompleteBipartite => "complete-bipartite",
                crate::args::Family::Cycle => "cycle",
                crate::args::Family::GeneralizedPetersen => "generalized-petersen",
                crate::args::Family::QuasiPetersen => "quasi-petersen",
            };
            p.insert("family".into(), Value::from(family));
            insert_opt(&mut p, "n", &a.n);
            insert_opt(&mut p, "m", &a.m);
            insert_opt(&mut p, "k", &a.k);
            insert_opt(&mut p, "a", &a.a);
            insert_opt(&mut p, "b", &a.b);
            insert_opt(&mut p, "p", &a.p);
        }
        Command::Reduce(a) => {
            p.insert("graph".into(), path_value(&a.graph));
        }
        Command::SolveGroup(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("group".into(), Value::from(a.group.as_str()));
        }
        Command::SolveVector(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            let kind = match a.kind {
                crate::args::VectorKind::S0 => "s0",
                crate::args::VectorKind::S1 => "s1",
                crate::args::VectorKind::S6 => "s6",
            };
            p.insert("kind".into(), Value::from(kind));
        }
        Command::Immerse(a) => {
            let c = match a.construction {
                crate::args::Construction::TwoPoint => "two-point",
                crate::args::Construction::OnePoint => "one-point",
                crate::args::Construction::K4 => "k4",
                crate::args::Construction::QuasiPetersen => "quasi-petersen",
            };
            p.insert("construction".into(), Value::from(c));
            if let Some(g) = &a.graph {
                p.insert("graph".into(), path_value(g));
            }
            insert_opt(&mut p, "a", &a.a);
            insert_opt(&mut p, "b", &a.b);
            insert_opt(&mut p, "p", &a.p);
            if let Some(n) = a.export_polylines {
                p.insert("export-polylines".into(), Value::from(n as u64));
            }
        }
        Command::FlowFromImmersion(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("immersion".into(), path_value(&a.immersion));
        }
        Command::ImmersionFromFlow(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("flow".into(), path_value(&a.flow));
        }
        Command::Inject(a) => {
            p.insert("host".into(), path_value(&a.host));
            p.insert("host-vertex".into(), Value::from(a.host_vertex));
            p.insert("guest".into(), path_value(&a.guest));
            p.insert("guest-vertex".into(), Value::from(a.guest_vertex));
            insert_opt(&mut p, "pairing", &a.pairing.as_deref().map(String::from));
        }
        Command::InjectFlow(a) => {
            p.insert("host".into(), path_value(&a.host));
            p.insert("host-flow".into(), path_value(&a.host_flow));
            p.insert("host-vertex".into(), Value::from(a.host_vertex));
            p.insert("guest".into(), path_value(&a.guest));
            p.insert("guest-flow".into(), path_value(&a.guest_flow));
            p.insert("guest-vertex".into(), Value::from(a.guest_vertex));
            insert_opt(&mut p, "pairing", &a.pairing.as_deref().map(String::from));
        }
        Command::Blowup(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("vertex".into(), Value::from(a.vertex));
            if let Some(f) = &a.flow {
                p.insert("flow".into(), path_value(f));
            }
        }
        Command::Compose(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert(
                "parts".into(),
                Value::Array(a.parts.iter().map(|q| path_value(q)).collect()),
            );
            p.insert("multiplicity".into(), Value::from(a.multiplicity as u64));
        }
        Command::Rank(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("flow".into(), path_value(&a.flow));
        }
        Command::FourFlow(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            p.insert("flow".into(), path_value(&a.flow));
        }
        Command::Verify(a) => {
            p.insert("graph".into(), path_value(&a.graph));
            if let Some(f) = &a.flow {
                p.insert("flow".into(), path_value(f));
            }
            if let Some(f) = &a.group_flow {
                p.insert("group-flow".into(), path_value(f));
            }
            if let Some(f) = &a.immersion {
                p.insert("immersion".into(), path_value(f));
            }
            if let Some(f) = &a.certificate {
                p.insert("certificate".into(), path_value(f));
            }
        }
        Command::Export(a) => {
            p.insert("immersion".into(), path_value(&a.immersion));
            p.insert("samples".into(), Value::from(a.samples as u64));
        }
    }
    Value::Object(p)
}

/// A finished command: the primary output and a summary for the manifest.
pub struct CommandResult {
    pub output: Value,
    pub summary: Value,
}

/// Assemble the run manifest.
#[allow(clippy::too_many_arguments)]
pub fn manifest_value(
    command: &str,
    parameters: Value,
    inputs: &Inputs,
    tol: &Tolerances,
    budget_ms: Option<u64>,
    outcome: Value,
    output_sha256: Option<&str>,
    wall_time_ms: u128,
) -> Value {
    let mut root = Map::new();
    root.insert("command".into(), Value::from(command));
    root.insert(
        "version".into(),
        Value::from(env!("CARGO_PKG_VERSION")),
    );
    root.insert("parameters".into(), parameters);
    root.insert("inputs".into(), inputs.manifest_value());
    root.insert("tolerances".into(), tolerances_value(tol));
    root.insert(
        "budget_ms".into(),
        match budget_ms {
            Some(ms) => Value::from(ms),
            None => Value::Null,
        },
    );
    root.insert("outcome".into(), outcome);
    root.insert(
        "output_sha256".into(),
        match output_sha256 {
            Some(h) => Value::from(h),
            None => Value::Null,
        },
    );
    root.insert("wall_time_ms".into(), Value::from(wall_time_ms as u64));
    Value::Object(root)
}

/// Render and write the primary output: to `--out` when given, else to
/// stdout.  Returns the output hash for the manifest.
pub fn emit_output(out: Option<&Path>, value: &Value) -> Result<String, Failure> {
    let rendered = jsonio::render(value);
    match out {
        Some(path) => std::fs::write(path, &rendered).map_err(|e| {
            Failure::precondition("io", format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{rendered}"),
    }
    Ok(hex_digest(rendered.as_bytes()))
}
