//! Implementations of the subcommands.  Every command that constructs
//! something re-verifies its own output before it is written.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use vecflow_core::algebra::{
    balanced_matrix, mod2_rowspace, odd_coordinate_free, rank_q, synthesize_4flow,
    OddCoordinateStatus,
};
use vecflow_core::graph::{
    complete_bipartite, complete_graph, cube_graph, cycle_graph, generalized_petersen, inject,
    k4, petersen, quasi_petersen, reduce_to_cubic, triple_edge, two_triangles_with_bridge,
    BlowUpInfo, EdgeTrace, InjectInfo, Multigraph, Orientation,
};
use vecflow_core::group::{
    solve_flow_exhaustive, verify_circulation, CirculationReport, GroupFlow, SolveOutcome,
};
use vecflow_core::immersion::{
    check_equiangular, flow_to_immersion, immersion_to_flow, k4_immersion, one_point_immersion,
    quasi_petersen_immersion, two_point_immersion, Immersion,
};
use vecflow_core::jsonio::{
    self, certificate_value, graph_value, group_flow_value, immersion_value, vector_flow_value,
};
use vecflow_core::util::{Budget, Tolerances};
use vecflow_core::vector::{
    blow_up_flow_transfer, compose_decomposition, injection_flow_transfer, index_flow_values,
    s0_flow_even_graph, s1_flow_r3, s6_pipeline, verify_vector_flow, FlowPart, VectorFlow,
};
use vecflow_core::{CyclicProduct, EdgeId, VertexId};

use crate::args::{
    BlowupArgs, Command, ComposeArgs, Construction, ExportArgs, Family, FlowFromImmersionArgs,
    FourFlowArgs, GenArgs, ImmerseArgs, ImmersionFromFlowArgs, InjectArgs, InjectFlowArgs,
    RankArgs, ReduceArgs, SolveGroupArgs, SolveVectorArgs, VectorKind, VerifyArgs,
};
use crate::support::{
    parse_pairing, resolve_orientation, CommandResult, Failure, Inputs,
};

pub fn execute(
    cmd: &Command,
    tol: &Tolerances,
    budget: &Budget,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Reduce(a) => reduce(a, inputs),
        Command::SolveGroup(a) => solve_group(a, budget, inputs),
        Command::SolveVector(a) => solve_vector(a, tol, budget, inputs),
        Command::Immerse(a) => immerse(a, tol, inputs),
        Command::FlowFromImmersion(a) => flow_from_immersion(a, tol, inputs),
        Command::ImmersionFromFlow(a) => immersion_from_flow(a, tol, inputs),
        Command::Inject(a) => cmd_inject(a, inputs),
        Command::InjectFlow(a) => inject_flow(a, tol, inputs),
        Command::Blowup(a) => blowup(a, tol, inputs),
        Command::Compose(a) => compose(a, tol, inputs),
        Command::Rank(a) => rank(a, tol, inputs),
        Command::FourFlow(a) => four_flow(a, tol, inputs),
        Command::Verify(a) => verify(a, tol, inputs),
        Command::Export(a) => export(a, tol, inputs),
    }
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

fn internal(message: impl Into<String>) -> Failure {
    Failure::precondition("internal", message.into())
}

fn load_graph(
    inputs: &mut Inputs,
    role: &str,
    path: &Path,
) -> Result<(Multigraph, Option<Orientation>), Failure> {
    let text = inputs.read(role, path)?;
    Ok(jsonio::parse_graph(&text)?)
}

fn require(opt: Option<u32>, flag: &str, context: &str) -> Result<u32, Failure> {
    opt.ok_or_else(|| {
        Failure::precondition("parameters", format!("{context} requires --{flag}"))
    })
}

fn forbid(given: &[(&str, bool)], context: &str) -> Result<(), Failure> {
    for (flag, present) in given {
        if *present {
            return Err(Failure::precondition(
                "parameters",
                format!("{context} does not take --{flag}"),
            ));
        }
    }
    Ok(())
}

fn summary(pairs: Vec<(&str, Value)>) -> Value {
    let mut obj = Map::new();
    for (k, v) in pairs {
        obj.insert(k.to_string(), v);
    }
    Value::Object(obj)
}

fn vertex_list(vs: &[VertexId]) -> Value {
    Value::Array(vs.iter().map(|v| Value::from(v.0)).collect())
}

fn edge_list(es: &[EdgeId]) -> Value {
    Value::Array(es.iter().map(|e| Value::from(e.0)).collect())
}

fn check_vector_flow(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
    tol: &Tolerances,
    context: &str,
) -> Result<Value, Failure> {
    let report =
        verify_vector_flow(g, o, f, tol).map_err(|e| internal(format!("{context}: {e}")))?;
    if !report.passes(tol) {
        return Err(internal(format!(
            "{context}: the produced flow fails verification \
             (max KCL residual {:e}, max norm deviation {:e}, {} zero edges)",
            report.max_kcl_residual,
            report.max_norm_deviation,
            report.zero_edges.len()
        )));
    }
    Ok(summary(vec![
        ("max_kcl_residual", Value::from(report.max_kcl_residual)),
        (
            "max_norm_deviation",
            Value::from(report.max_norm_deviation),
        ),
    ]))
}

fn polylines_value(imm: &Immersion, samples: usize) -> Value {
    let mut obj = Map::new();
    for (e, arc) in &imm.arcs {
        let line: Vec<Value> = arc
            .sample(samples)
            .into_iter()
            .map(|p| Value::Array(p.iter().map(|&x| Value::from(x)).collect()))
            .collect();
        obj.insert(e.0.to_string(), Value::Array(line));
    }
    Value::Object(obj)
}

fn parse_group_spec(spec: &str) -> Result<Vec<u64>, Failure> {
    let mut moduli = Vec::new();
    for token in spec.split('x') {
        let t = token.trim();
        let digits = t
            .strip_prefix('z')
            .or_else(|| t.strip_prefix('Z'))
            .ok_or_else(|| {
                Failure::precondition(
                    "parameters",
                    format!("group factor \"{t}\" should look like z4 or z2xz2"),
                )
            })?;
        let k = digits.parse::<u64>().map_err(|_| {
            Failure::precondition(
                "parameters",
                format!("group factor \"{t}\" has a non-numeric order"),
            )
        })?;
        moduli.push(k);
    }
    Ok(moduli)
}

// ---------------------------------------------------------------------------
// gen / reduce
// ---------------------------------------------------------------------------

fn gen(a: &GenArgs) -> Result<CommandResult, Failure> {
    let (g, label) = match a.family {
        Family::K4 => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family k4",
            )?;
            (k4(), "k4")
        }
        Family::Petersen => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family petersen",
            )?;
            (petersen(), "petersen")
        }
        Family::Cube => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family cube",
            )?;
            (cube_graph(), "cube")
        }
        Family::TripleEdge => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family triple-edge",
            )?;
            (triple_edge(), "triple-edge")
        }
        Family::TwoTrianglesBridge => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family two-triangles-bridge",
            )?;
            (two_triangles_with_bridge().0, "two-triangles-bridge")
        }
        Family::Complete => {
            forbid(
                &[
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family complete",
            )?;
            let n = require(a.n, "n", "family complete")?;
            (complete_graph(n)?, "complete")
        }
        Family::CompleteBipartite => {
            forbid(
                &[
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family complete-bipartite",
            )?;
            let m = require(a.m, "m", "family complete-bipartite")?;
            let n = require(a.n, "n", "family complete-bipartite")?;
            (complete_bipartite(m, n)?, "complete-bipartite")
        }
        Family::Cycle => {
            forbid(
                &[
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family cycle",
            )?;
            let n = require(a.n, "n", "family cycle")?;
            (cycle_graph(n)?, "cycle")
        }
        Family::GeneralizedPetersen => {
            forbid(
                &[
                    ("m", a.m.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "family generalized-petersen",
            )?;
            let n = require(a.n, "n", "family generalized-petersen")?;
            let k = require(a.k, "k", "family generalized-petersen")?;
            (generalized_petersen(n, k)?, "generalized-petersen")
        }
        Family::QuasiPetersen => {
            forbid(
                &[
                    ("n", a.n.is_some()),
                    ("m", a.m.is_some()),
                    ("k", a.k.is_some()),
                ],
                "family quasi-petersen",
            )?;
            let pa = require(a.a, "a", "family quasi-petersen")?;
            let pb = require(a.b, "b", "family quasi-petersen")?;
            let pp = require(a.p, "p", "family quasi-petersen")?;
            (quasi_petersen(pa, pb, pp)?, "quasi-petersen")
        }
    };
    let o = Orientation::canonical(&g);
    o.matches(&g).map_err(|e| internal(e.to_string()))?;
    Ok(CommandResult {
        output: graph_value(&g, Some(&o)),
        summary: summary(vec![
            ("family", Value::from(label)),
            ("num_vertices", Value::from(g.num_vertices() as u64)),
            ("num_edges", Value::from(g.num_edges() as u64)),
        ]),
    })
}

fn trace_value(trace: &EdgeTrace) -> Value {
    let mut edges = Map::new();
    let sorted: BTreeMap<EdgeId, Vec<Value>> = trace
        .entries()
        .map(|(e, chain)| {
            let refs = chain
                .iter()
                .map(|r| {
                    let mut obj = Map::new();
                    obj.insert("edge".into(), Value::from(r.edge.0));
                    obj.insert("forward".into(), Value::from(r.forward));
                    Value::Object(obj)
                })
                .collect();
            (e, refs)
        })
        .collect();
    for (e, refs) in sorted {
        edges.insert(e.0.to_string(), Value::Array(refs));
    }
    let mut origins = Map::new();
    for (v, src) in trace.vertex_origins() {
        origins.insert(v.0.to_string(), Value::from(src.0));
    }
    let mut obj = Map::new();
    obj.insert("edges".into(), Value::Object(edges));
    obj.insert("vertex_origins".into(), Value::Object(origins));
    Value::Object(obj)
}

fn reduce(a: &ReduceArgs, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, _) = load_graph(inputs, "graph", &a.graph)?;
    let (reduced, trace) = reduce_to_cubic(&g)?;
    trace
        .validate(&g, &reduced)
        .map_err(|e| internal(format!("reduction trace fails validation: {e}")))?;
    // Every vertex must end at degree 3, except vertices both of whose
    // ends belong to a single loop (a component that collapsed to a cycle).
    for &v in reduced.vertices() {
        let deg = reduced.degree(v);
        if deg == 3 {
            continue;
        }
        let incident = reduced.incident_edges(v);
        let loop_terminal = deg == 2
            && incident.len() == 1
            && reduced
                .edge(incident[0])
                .map(|e| e.is_loop())
                .unwrap_or(false);
        if !loop_terminal {
            return Err(internal(format!(
                "reduction left vertex {} at degree {deg}",
                v.0
            )));
        }
    }
    let o = Orientation::canonical(&reduced);
    let mut output = Map::new();
    output.insert("graph".into(), graph_value(&reduced, Some(&o)));
    output.insert("trace".into(), trace_value(&trace));
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("input_vertices", Value::from(g.num_vertices() as u64)),
            ("input_edges", Value::from(g.num_edges() as u64)),
            ("output_vertices", Value::from(reduced.num_vertices() as u64)),
            ("output_edges", Value::from(reduced.num_edges() as u64)),
        ]),
    })
}

// ---------------------------------------------------------------------------
// solve-group / solve-vector
// ---------------------------------------------------------------------------

fn solve_group(
    a: &SolveGroupArgs,
    budget: &Budget,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    let (g, o_file) = load_graph(inputs, "graph", &a.graph)?;
    let o = o_file.unwrap_or_else(|| Orientation::canonical(&g));
    let moduli = parse_group_spec(&a.group)?;
    let group = CyclicProduct::new(&moduli)?;
    let outcome = solve_flow_exhaustive(&g, &o, &group, budget)?;
    let mut output = Map::new();
    output.insert(
        "group".into(),
        Value::Array(moduli.iter().map(|&m| Value::from(m)).collect()),
    );
    match outcome {
        SolveOutcome::Found(f) => {
            let report = verify_circulation(&g, &o, &f)
                .map_err(|e| internal(format!("solver output fails verification: {e}")))?;
            if !report.is_nowhere_zero_flow() {
                return Err(internal(
                    "solver returned a flow that is not nowhere-zero".to_string(),
                ));
            }
            output.insert("verdict".into(), Value::from("found"));
            output.insert("flow".into(), group_flow_value(&f));
            Ok(CommandResult {
                output: Value::Object(output),
                summary: summary(vec![
                    ("verdict", Value::from("found")),
                    ("group", Value::from(a.group.as_str())),
                ]),
            })
        }
        SolveOutcome::ProvenNone => {
            output.insert("verdict".into(), Value::from("proven-none"));
            Ok(CommandResult {
                output: Value::Object(output),
                summary: summary(vec![
                    ("verdict", Value::from("proven-none")),
                    ("group", Value::from(a.group.as_str())),
                ]),
            })
        }
        SolveOutcome::BudgetExhausted => Err(Failure::budget(format!(
            "the exhaustive {} search ran out of budget",
            a.group
        ))),
    }
}

fn solve_vector(
    a: &SolveVectorArgs,
    tol: &Tolerances,
    budget: &Budget,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    let (g, _) = load_graph(inputs, "graph", &a.graph)?;
    match a.kind {
        VectorKind::S0 => {
            let (o, f) = s0_flow_even_graph(&g)?;
            let check = check_vector_flow(&g, &o, &f, tol, "sign flow")?;
            Ok(CommandResult {
                output: vector_flow_value(&f, &o),
                summary: summary(vec![
                    ("kind", Value::from("s0")),
                    ("dim", Value::from(f.dim as u64)),
                    ("check", check),
                ]),
            })
        }
        VectorKind::S1 => {
            let (o, f) = s1_flow_r3(&g)?;
            let check = check_vector_flow(&g, &o, &f, tol, "circle flow")?;
            Ok(CommandResult {
                output: vector_flow_value(&f, &o),
                summary: summary(vec![
                    ("kind", Value::from("s1")),
                    ("dim", Value::from(f.dim as u64)),
                    ("check", check),
                ]),
            })
        }
        VectorKind::S6 => {
            let cert = s6_pipeline(&g, budget)?;
            let check = check_vector_flow(&g, &cert.orientation, &cert.flow, tol, "composed flow")?;
            for (e, count) in cert.coverage() {
                if count != 3 {
                    return Err(internal(format!(
                        "edge {e} is covered by {count} parts instead of 3"
                    )));
                }
            }
            let parts: Vec<Value> = cert
                .parts
                .iter()
                .map(|p| {
                    let mut obj = Map::new();
                    obj.insert("graph".into(), graph_value(&p.graph, Some(&p.orientation)));
                    obj.insert(
                        "flow".into(),
                        vector_flow_value(&p.flow, &p.orientation),
                    );
                    Value::Object(obj)
                })
                .collect();
            let mut output = Map::new();
            output.insert(
                "flow".into(),
                vector_flow_value(&cert.flow, &cert.orientation),
            );
            output.insert("parts".into(), Value::Array(parts));
            Ok(CommandResult {
                output: Value::Object(output),
                summary: summary(vec![
                    ("kind", Value::from("s6")),
                    ("dim", Value::from(cert.flow.dim as u64)),
                    ("parts", Value::from(cert.parts.len() as u64)),
                    ("check", check),
                ]),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// immerse / conversions / export
// ---------------------------------------------------------------------------

fn check_immersion(
    g: &Multigraph,
    o: &Orientation,
    imm: &Immersion,
    tol: &Tolerances,
    context: &str,
) -> Result<f64, Failure> {
    imm.verify(g, o, tol)
        .map_err(|e| internal(format!("{context}: {e}")))?;
    let report =
        check_equiangular(g, o, imm).map_err(|e| internal(format!("{context}: {e}")))?;
    if report.max_deviation > tol.eps_angle {
        return Err(internal(format!(
            "{context}: departure angles deviate from 2*pi/3 by {:e}",
            report.max_deviation
        )));
    }
    Ok(report.max_deviation)
}

fn immerse(a: &ImmerseArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, o, imm, label) = match a.construction {
        Construction::TwoPoint | Construction::OnePoint => {
            forbid(
                &[
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "this construction",
            )?;
            let path = a.graph.as_ref().ok_or_else(|| {
                Failure::precondition(
                    "parameters",
                    "the two-point and one-point constructions require --graph",
                )
            })?;
            let (g, _) = load_graph(inputs, "graph", path)?;
            if a.construction == Construction::TwoPoint {
                let (o, imm) = two_point_immersion(&g)?;
                (g, o, imm, "two-point")
            } else {
                let (o, imm) = one_point_immersion(&g)?;
                (g, o, imm, "one-point")
            }
        }
        Construction::K4 => {
            forbid(
                &[
                    ("graph", a.graph.is_some()),
                    ("a", a.a.is_some()),
                    ("b", a.b.is_some()),
                    ("p", a.p.is_some()),
                ],
                "construction k4",
            )?;
            let (g, o, imm) = k4_immersion()?;
            (g, o, imm, "k4")
        }
        Construction::QuasiPetersen => {
            forbid(&[("graph", a.graph.is_some())], "construction quasi-petersen")?;
            let pa = require(a.a, "a", "construction quasi-petersen")?;
            let pb = require(a.b, "b", "construction quasi-petersen")?;
            let pp = require(a.p, "p", "construction quasi-petersen")?;
            let (g, o, imm) = quasi_petersen_immersion(pa, pb, pp)?;
            (g, o, imm, "quasi-petersen")
        }
    };
    let max_dev = check_immersion(&g, &o, &imm, tol, "constructed immersion")?;
    let mut output = match immersion_value(&imm, Some(&o)) {
        Value::Object(map) => map,
        _ => unreachable!("immersion_value returns an object"),
    };
    if let Some(n) = a.export_polylines {
        if n < 2 {
            return Err(Failure::precondition(
                "parameters",
                "--export-polylines needs at least 2 points per arc",
            ));
        }
        output.insert("polylines".into(), polylines_value(&imm, n));
    }
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("construction", Value::from(label)),
            ("vertices", Value::from(imm.vertices.len() as u64)),
            ("arcs", Value::from(imm.arcs.len() as u64)),
            ("max_equiangular_deviation", Value::from(max_dev)),
        ]),
    })
}

fn flow_from_immersion(
    a: &FlowFromImmersionArgs,
    tol: &Tolerances,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    let (g, o_graph) = load_graph(inputs, "graph", &a.graph)?;
    let text = inputs.read("immersion", &a.immersion)?;
    let (imm, entries) = jsonio::parse_immersion(&text, tol)?;
    let o = resolve_orientation(&g, entries, o_graph.as_ref(), false, "the immersion file")?;
    let f = immersion_to_flow(&g, &o, &imm, tol)?;
    let check = check_vector_flow(&g, &o, &f, tol, "extracted flow")?;
    Ok(CommandResult {
        output: vector_flow_value(&f, &o),
        summary: summary(vec![
            ("dim", Value::from(f.dim as u64)),
            ("edges", Value::from(f.values.len() as u64)),
            ("check", check),
        ]),
    })
}

fn immersion_from_flow(
    a: &ImmersionFromFlowArgs,
    tol: &Tolerances,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    let (g, o_graph) = load_graph(inputs, "graph", &a.graph)?;
    let text = inputs.read("flow", &a.flow)?;
    let (f, entries) = jsonio::parse_vector_flow(&text)?;
    let o = resolve_orientation(&g, entries, o_graph.as_ref(), false, "the flow file")?;
    let imm = flow_to_immersion(&g, &o, &f, tol)?;
    let max_dev = check_immersion(&g, &o, &imm, tol, "reconstructed immersion")?;
    Ok(CommandResult {
        output: immersion_value(&imm, Some(&o)),
        summary: summary(vec![
            ("vertices", Value::from(imm.vertices.len() as u64)),
            ("arcs", Value::from(imm.arcs.len() as u64)),
            ("max_equiangular_deviation", Value::from(max_dev)),
        ]),
    })
}

fn export(a: &ExportArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    if a.samples < 2 {
        return Err(Failure::precondition(
            "parameters",
            "--samples needs at least 2 points per arc",
        ));
    }
    let text = inputs.read("immersion", &a.immersion)?;
    let (imm, _) = jsonio::parse_immersion(&text, tol)?;
    let mut output = Map::new();
    output.insert("samples".into(), Value::from(a.samples as u64));
    output.insert("polylines".into(), polylines_value(&imm, a.samples));
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("arcs", Value::from(imm.arcs.len() as u64)),
            ("samples", Value::from(a.samples as u64)),
        ]),
    })
}

// ---------------------------------------------------------------------------
// surgery commands
// ---------------------------------------------------------------------------

fn inject_info_value(info: &InjectInfo) -> Value {
    let mut vertex_map = Map::new();
    for (h, r) in &info.vertex_map {
        vertex_map.insert(h.0.to_string(), Value::from(r.0));
    }
    let mut edge_map = Map::new();
    for (h, r) in &info.edge_map {
        edge_map.insert(h.0.to_string(), Value::from(r.0));
    }
    let bridges: Vec<Value> = info
        .bridges
        .iter()
        .map(|b| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(b.id.0));
            obj.insert("host_end".into(), Value::from(b.g_end.0));
            obj.insert("guest_end".into(), Value::from(b.h_end.0));
            obj.insert("host_source".into(), Value::from(b.g_source.0));
            obj.insert("guest_source".into(), Value::from(b.h_source.0));
            Value::Object(obj)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("vertex_map".into(), Value::Object(vertex_map));
    obj.insert("edge_map".into(), Value::Object(edge_map));
    obj.insert("bridges".into(), Value::Array(bridges));
    Value::Object(obj)
}

fn blow_up_info_value(info: &BlowUpInfo) -> Value {
    let adopted: Vec<Value> = info
        .adopted
        .iter()
        .map(|(e, v)| {
            let mut obj = Map::new();
            obj.insert("edge".into(), Value::from(e.0));
            obj.insert("vertex".into(), Value::from(v.0));
            Value::Object(obj)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("new_vertices".into(), vertex_list(&info.new_vertices));
    obj.insert("adopted".into(), Value::Array(adopted));
    obj.insert("triangle_edges".into(), edge_list(&info.triangle_edges));
    Value::Object(obj)
}

fn cmd_inject(a: &InjectArgs, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, _) = load_graph(inputs, "host", &a.host)?;
    let (h, _) = load_graph(inputs, "guest", &a.guest)?;
    let pairing = match &a.pairing {
        Some(text) => Some(parse_pairing(text)?),
        None => None,
    };
    let (result, info) = inject(
        &h,
        VertexId(a.guest_vertex),
        &g,
        VertexId(a.host_vertex),
        pairing.as_deref(),
    )?;
    let expect_v = g.num_vertices() + h.num_vertices() - 2;
    let expect_e = g.num_edges() + h.num_edges() - info.bridges.len();
    if result.num_vertices() != expect_v || result.num_edges() != expect_e {
        return Err(internal(format!(
            "spliced graph has {} vertices and {} edges, expected {} and {}",
            result.num_vertices(),
            result.num_edges(),
            expect_v,
            expect_e
        )));
    }
    let o = Orientation::canonical(&result);
    let mut output = Map::new();
    output.insert("graph".into(), graph_value(&result, Some(&o)));
    output.insert("info".into(), inject_info_value(&info));
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("num_vertices", Value::from(result.num_vertices() as u64)),
            ("num_edges", Value::from(result.num_edges() as u64)),
            ("bridges", Value::from(info.bridges.len() as u64)),
        ]),
    })
}

fn inject_flow(
    a: &InjectFlowArgs,
    tol: &Tolerances,
    inputs: &mut Inputs,
) -> Result<CommandResult, Failure> {
    let (g, og_file) = load_graph(inputs, "host", &a.host)?;
    let host_flow_text = inputs.read("host-flow", &a.host_flow)?;
    let (fg, g_entries) = jsonio::parse_vector_flow(&host_flow_text)?;
    let og = resolve_orientation(&g, g_entries, og_file.as_ref(), false, "the host flow file")?;

    let (h, oh_file) = load_graph(inputs, "guest", &a.guest)?;
    let guest_flow_text = inputs.read("guest-flow", &a.guest_flow)?;
    let (fh, h_entries) = jsonio::parse_vector_flow(&guest_flow_text)?;
    let oh = resolve_orientation(&h, h_entries, oh_file.as_ref(), false, "the guest flow file")?;

    let pairing = match &a.pairing {
        Some(text) => Some(parse_pairing(text)?),
        None => None,
    };
    let (result, info, o2, f2) = injection_flow_transfer(
        &g,
        &og,
        &fg,
        VertexId(a.host_vertex),
        &h,
        &oh,
        &fh,
        VertexId(a.guest_vertex),
        pairing.as_deref(),
    )?;
    let check = check_vector_flow(&result, &o2, &f2, tol, "transferred flow")?;
    let mut output = Map::new();
    output.insert("graph".into(), graph_value(&result, Some(&o2)));
    output.insert("flow".into(), vector_flow_value(&f2, &o2));
    output.insert("info".into(), inject_info_value(&info));
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("num_vertices", Value::from(result.num_vertices() as u64)),
            ("num_edges", Value::from(result.num_edges() as u64)),
            ("bridges", Value::from(info.bridges.len() as u64)),
            ("check", check),
        ]),
    })
}

fn blowup(a: &BlowupArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, o_file) = load_graph(inputs, "graph", &a.graph)?;
    let v = VertexId(a.vertex);
    match &a.flow {
        None => {
            let (result, info) = vecflow_core::graph::blow_up_triangle(&g, v)?;
            result
                .require_cubic()
                .map_err(|e| internal(format!("blow-up result is not cubic: {e}")))?;
            let o = Orientation::canonical(&result);
            let mut output = Map::new();
            output.insert("graph".into(), graph_value(&result, Some(&o)));
            output.insert("info".into(), blow_up_info_value(&info));
            Ok(CommandResult {
                output: Value::Object(output),
                summary: summary(vec![
                    ("num_vertices", Value::from(result.num_vertices() as u64)),
                    ("num_edges", Value::from(result.num_edges() as u64)),
                ]),
            })
        }
        Some(flow_path) => {
            let text = inputs.read("flow", flow_path)?;
            let (f, entries) = jsonio::parse_vector_flow(&text)?;
            let o = resolve_orientation(&g, entries, o_file.as_ref(), false, "the flow file")?;
            let (result, info, o2, f2) = blow_up_flow_transfer(&g, &o, &f, v)?;
            let check = check_vector_flow(&result, &o2, &f2, tol, "extended flow")?;
            let mut output = Map::new();
            output.insert("graph".into(), graph_value(&result, Some(&o2)));
            output.insert("flow".into(), vector_flow_value(&f2, &o2));
            output.insert("info".into(), blow_up_info_value(&info));
            Ok(CommandResult {
                output: Value::Object(output),
                summary: summary(vec![
                    ("num_vertices", Value::from(result.num_vertices() as u64)),
                    ("num_edges", Value::from(result.num_edges() as u64)),
                    ("check", check),
                ]),
            })
        }
    }
}

fn compose(a: &ComposeArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, o_file) = load_graph(inputs, "graph", &a.graph)?;
    let o = o_file.unwrap_or_else(|| Orientation::canonical(&g));
    let mut parts = Vec::with_capacity(a.parts.len());
    for (i, path) in a.parts.iter().enumerate() {
        let text = inputs.read(&format!("part{i}"), path)?;
        let root: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::precondition("json", format!("part {i}: {e}")))?;
        let graph_block = root.get("graph").ok_or_else(|| {
            Failure::precondition("json", format!("part {i}: missing \"graph\" block"))
        })?;
        let (pg, po_file) = jsonio::graph_from_value(graph_block)
            .map_err(|e| Failure::precondition("json", format!("part {i}: {e}")))?;
        let flow_block = root.get("flow").ok_or_else(|| {
            Failure::precondition("json", format!("part {i}: missing \"flow\" block"))
        })?;
        let (pf, p_entries) = jsonio::vector_flow_from_value(flow_block)
            .map_err(|e| Failure::precondition("json", format!("part {i}: {e}")))?;
        let po = resolve_orientation(
            &pg,
            p_entries,
            po_file.as_ref(),
            false,
            &format!("part {i}"),
        )?;
        parts.push(FlowPart {
            graph: pg,
            orientation: po,
            flow: pf,
        });
    }
    let composite = compose_decomposition(&g, &o, &parts, a.multiplicity)?;
    let check = check_vector_flow(&g, &o, &composite, tol, "composite flow")?;
    Ok(CommandResult {
        output: vector_flow_value(&composite, &o),
        summary: summary(vec![
            ("parts", Value::from(parts.len() as u64)),
            ("multiplicity", Value::from(a.multiplicity as u64)),
            ("dim", Value::from(composite.dim as u64)),
            ("check", check),
        ]),
    })
}

// ---------------------------------------------------------------------------
// rank / four-flow
// ---------------------------------------------------------------------------

fn load_flow_with_orientation(
    inputs: &mut Inputs,
    graph_path: &Path,
    flow_path: &Path,
) -> Result<(Multigraph, Orientation, VectorFlow), Failure> {
    let (g, o_file) = load_graph(inputs, "graph", graph_path)?;
    let text = inputs.read("flow", flow_path)?;
    let (f, entries) = jsonio::parse_vector_flow(&text)?;
    let o = resolve_orientation(&g, entries, o_file.as_ref(), false, "the flow file")?;
    Ok((g, o, f))
}

fn rank(a: &RankArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, o, f) = load_flow_with_orientation(inputs, &a.graph, &a.flow)?;
    let report = verify_vector_flow(&g, &o, &f, tol)?;
    if !report.passes(tol) {
        return Err(Failure::precondition(
            "vector-flow",
            format!(
                "the input is not a unit flow (max KCL residual {:e}, max norm deviation {:e})",
                report.max_kcl_residual, report.max_norm_deviation
            ),
        ));
    }
    let index = index_flow_values(&f, tol.clustering)?;
    let m = balanced_matrix(&g, &o, &index)?;
    let r = rank_q(&m);
    let s = mod2_rowspace(&m);
    let status = odd_coordinate_free(&m);

    let mut output = Map::new();
    output.insert(
        "num_value_classes".into(),
        Value::from(index.num_classes() as u64),
    );
    output.insert("rank_q".into(), Value::from(r as u64));
    output.insert("mod2_dim".into(), Value::from(s.dim() as u64));
    let free = matches!(status, OddCoordinateStatus::Free);
    output.insert("odd_coordinate_free".into(), Value::from(free));
    if let OddCoordinateStatus::Violated { witness } = &status {
        output.insert(
            "witness".into(),
            Value::Array(witness.iter().map(|&x| Value::from(x)).collect()),
        );
    }
    let mut certified = false;
    if r <= 2 && free {
        let cert = synthesize_4flow(&g, &o, &f)?;
        let klein = cert.to_group_flow();
        let check = verify_circulation(&g, &o, &klein)
            .map_err(|e| internal(format!("certificate fails verification: {e}")))?;
        if !check.is_nowhere_zero_flow() {
            return Err(internal(
                "synthesized certificate is not a nowhere-zero flow".to_string(),
            ));
        }
        output.insert("certificate".into(), certificate_value(&cert.values));
        certified = true;
    }
    Ok(CommandResult {
        output: Value::Object(output),
        summary: summary(vec![
            ("num_value_classes", Value::from(index.num_classes() as u64)),
            ("rank_q", Value::from(r as u64)),
            ("mod2_dim", Value::from(s.dim() as u64)),
            ("odd_coordinate_free", Value::from(free)),
            ("certified", Value::from(certified)),
        ]),
    })
}

fn four_flow(a: &FourFlowArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let (g, o, f) = load_flow_with_orientation(inputs, &a.graph, &a.flow)?;
    let cert = synthesize_4flow(&g, &o, &f)?;
    let klein = cert.to_group_flow();
    let check = verify_circulation(&g, &o, &klein)
        .map_err(|e| internal(format!("certificate fails verification: {e}")))?;
    if !check.is_nowhere_zero_flow() {
        return Err(internal(
            "synthesized certificate is not a nowhere-zero flow".to_string(),
        ));
    }
    let _ = tol;
    Ok(CommandResult {
        output: certificate_value(&cert.values),
        summary: summary(vec![
            ("edges", Value::from(cert.values.len() as u64)),
            ("verified", Value::from(true)),
        ]),
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn circulation_report_value(kind: &str, report: &CirculationReport) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(kind));
    obj.insert(
        "ok".into(),
        Value::from(report.is_nowhere_zero_flow()),
    );
    obj.insert(
        "is_circulation".into(),
        Value::from(report.is_circulation()),
    );
    obj.insert(
        "kcl_violations".into(),
        vertex_list(&report.kcl_violations),
    );
    obj.insert("zero_edges".into(), edge_list(&report.zeros));
    Value::Object(obj)
}

fn verify(a: &VerifyArgs, tol: &Tolerances, inputs: &mut Inputs) -> Result<CommandResult, Failure> {
    let chosen = [
        a.flow.is_some(),
        a.group_flow.is_some(),
        a.immersion.is_some(),
        a.certificate.is_some(),
    ]
    .iter()
    .filter(|x| **x)
    .count();
    if chosen != 1 {
        return Err(Failure::precondition(
            "parameters",
            "pass exactly one of --flow, --group-flow, --immersion, --certificate",
        ));
    }
    let (g, o_file) = load_graph(inputs, "graph", &a.graph)?;

    let (output, ok, detail) = if let Some(path) = &a.flow {
        let text = inputs.read("flow", path)?;
        let (f, entries) = jsonio::parse_vector_flow(&text)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let o = resolve_orientation(&g, entries, o_file.as_ref(), false, "the flow file")?;
        let report = verify_vector_flow(&g, &o, &f, tol)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let ok = report.passes(tol);
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::from("vector-flow"));
        obj.insert("ok".into(), Value::from(ok));
        obj.insert(
            "max_kcl_residual".into(),
            Value::from(report.max_kcl_residual),
        );
        obj.insert(
            "max_norm_deviation".into(),
            Value::from(report.max_norm_deviation),
        );
        obj.insert("zero_edges".into(), edge_list(&report.zero_edges));
        (
            Value::Object(obj),
            ok,
            format!(
                "max KCL residual {:e}, max norm deviation {:e}, {} zero edges",
                report.max_kcl_residual,
                report.max_norm_deviation,
                report.zero_edges.len()
            ),
        )
    } else if let Some(path) = &a.group_flow {
        let text = inputs.read("group-flow", path)?;
        let f = jsonio::parse_group_flow(&text)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let o = resolve_orientation(&g, None, o_file.as_ref(), true, "the group flow file")?;
        let report = verify_circulation(&g, &o, &f)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let ok = report.is_nowhere_zero_flow();
        (
            circulation_report_value("group-flow", &report),
            ok,
            format!(
                "{} conservation violations, {} zero edges",
                report.kcl_violations.len(),
                report.zeros.len()
            ),
        )
    } else if let Some(path) = &a.immersion {
        let text = inputs.read("immersion", path)?;
        let (imm, entries) = jsonio::parse_immersion(&text, tol)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let o = resolve_orientation(&g, entries, o_file.as_ref(), false, "the immersion file")?;
        match imm
            .verify(&g, &o, tol)
            .and_then(|()| check_equiangular(&g, &o, &imm))
        {
            Ok(report) => {
                let ok = report.max_deviation <= tol.eps_angle;
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("immersion"));
                obj.insert("ok".into(), Value::from(ok));
                obj.insert(
                    "max_equiangular_deviation".into(),
                    Value::from(report.max_deviation),
                );
                (
                    Value::Object(obj),
                    ok,
                    format!(
                        "max departure-angle deviation {:e}",
                        report.max_deviation
                    ),
                )
            }
            Err(e) => {
                let mut obj = Map::new();
                obj.insert("kind".into(), Value::from("immersion"));
                obj.insert("ok".into(), Value::from(false));
                obj.insert("error".into(), Value::from(e.to_string()));
                (Value::Object(obj), false, e.to_string())
            }
        }
    } else {
        let path = a.certificate.as_ref().expect("checked above");
        let text = inputs.read("certificate", path)?;
        let bits = jsonio::parse_certificate(&text)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let group = CyclicProduct::klein();
        let mut values = BTreeMap::new();
        for (e, (x, y)) in bits {
            let elem = group
                .element(&[u64::from(x), u64::from(y)])
                .map_err(|err| Failure::precondition("verify", err.to_string()))?;
            values.insert(e, elem);
        }
        let f = GroupFlow::new(group, values);
        let o = resolve_orientation(&g, None, o_file.as_ref(), true, "the certificate file")?;
        let report = verify_circulation(&g, &o, &f)
            .map_err(|e| Failure::precondition("verify", e.to_string()))?;
        let ok = report.is_nowhere_zero_flow();
        (
            circulation_report_value("certificate", &report),
            ok,
            format!(
                "{} conservation violations, {} zero edges",
                report.kcl_violations.len(),
                report.zeros.len()
            ),
        )
    };

    if !ok {
        return Err(
            Failure::precondition("verify", format!("verification failed: {detail}"))
                .with_report(output),
        );
    }
    Ok(CommandResult {
        summary: output.clone(),
        output,
    })
}
