//! End-to-end tests that drive the compiled binary through temp files,
//! checking outputs, exit codes, and machine-readable diagnostics.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vecflow"))
}

/// Per-test scratch directory under the target tree.
fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "command {:?} failed\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).expect("read output file");
    serde_json::from_str(&text).expect("output parses as JSON")
}

fn stderr_diagnostic(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let file = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.push("--out");
    full.push(path_str(&file));
    run_ok(&full);
    file
}

// ---------------------------------------------------------------------------
// generation and determinism
// ---------------------------------------------------------------------------

#[test]
fn gen_is_byte_identical_across_reruns() {
    let dir = scratch("gen_rerun");
    let a = gen(&dir, "a.json", &["--family", "k4"]);
    let b = gen(&dir, "b.json", &["--family", "k4"]);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reruns must produce identical bytes");
    let doc = read_json(&a);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 6);
    assert!(doc["orientation"].is_object());
}

#[test]
fn gen_quasi_petersen_small_case_is_petersen_sized() {
    let dir = scratch("gen_qp");
    let g = gen(
        &dir,
        "qp.json",
        &["--family", "quasi-petersen", "--a", "1", "--b", "2", "--p", "5"],
    );
    let doc = read_json(&g);
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 10);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 15);
}

#[test]
fn gen_rejects_missing_and_extra_parameters() {
    let missing = run(&["gen", "--family", "quasi-petersen", "--a", "1", "--b", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    let diag = stderr_diagnostic(&missing);
    assert_eq!(diag["error"]["kind"], "parameters");

    let extra = run(&["gen", "--family", "k4", "--n", "5"]);
    assert_eq!(extra.status.code(), Some(2));
    let diag = stderr_diagnostic(&extra);
    assert_eq!(diag["error"]["kind"], "parameters");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["gen", "--family", "k4", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_input_is_rejected() {
    let dir = scratch("malformed");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ this is not json").unwrap();
    let out = run(&["reduce", "--graph", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let diag = stderr_diagnostic(&out);
    assert_eq!(diag["error"]["kind"], "json");
}

// ---------------------------------------------------------------------------
// group solving and budgets
// ---------------------------------------------------------------------------

#[test]
fn solve_group_reports_proven_none_for_petersen_z4() {
    let dir = scratch("solve_z4");
    let g = gen(&dir, "pet.json", &["--family", "petersen"]);
    let out_file = dir.join("z4.json");
    run_ok(&[
        "solve-group",
        "--graph",
        path_str(&g),
        "--group",
        "z4",
        "--out",
        path_str(&out_file),
    ]);
    let doc = read_json(&out_file);
    assert_eq!(doc["verdict"], "proven-none");
    assert_eq!(doc["group"], serde_json::json!([4]));
}

#[test]
fn solve_group_found_flow_verifies() {
    let dir = scratch("solve_z3");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let out_file = dir.join("z3.json");
    run_ok(&[
        "solve-group",
        "--graph",
        path_str(&g),
        "--group",
        "z3",
        "--out",
        path_str(&out_file),
    ]);
    let doc = read_json(&out_file);
    assert_eq!(doc["verdict"], "found");

    // The embedded flow block is itself a valid group-flow file.
    let flow_file = dir.join("flow.json");
    std::fs::write(&flow_file, serde_json::to_string(&doc["flow"]).unwrap()).unwrap();
    run_ok(&[
        "verify",
        "--graph",
        path_str(&g),
        "--group-flow",
        path_str(&flow_file),
    ]);
}

#[test]
fn zero_budget_exhausts_with_exit_three() {
    let dir = scratch("budget_flag");
    let g = gen(&dir, "pet.json", &["--family", "petersen"]);
    let out = run(&[
        "solve-group",
        "--graph",
        path_str(&g),
        "--group",
        "z5",
        "--budget",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let diag = stderr_diagnostic(&out);
    assert_eq!(diag["error"]["kind"], "budget");
    assert_eq!(diag["error"]["exit"], 3);
}

#[test]
fn budget_env_variable_is_honoured() {
    let dir = scratch("budget_env");
    let g = gen(&dir, "pet.json", &["--family", "petersen"]);
    let out = bin()
        .args(["solve-group", "--graph", path_str(&g), "--group", "z5"])
        .env("VECFLOW_BUDGET_MS", "0")
        .output()
        .expect("spawn binary");
    assert_eq!(out.status.code(), Some(3));
}

// ---------------------------------------------------------------------------
// vector flows and the algebraic pipeline
// ---------------------------------------------------------------------------

#[test]
fn four_flow_pipeline_produces_verified_certificate() {
    let dir = scratch("four_flow");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let flow = dir.join("s1.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s1",
        "--out",
        path_str(&flow),
    ]);

    // Without --out the certificate goes to stdout.
    let stdout = run_ok(&["four-flow", "--graph", path_str(&g), "--flow", path_str(&flow)]);
    let cert: Value = serde_json::from_str(&stdout).unwrap();
    let map = cert.as_object().unwrap();
    assert_eq!(map.len(), 9, "one entry per edge of the bipartite graph");
    for bits in map.values() {
        let pair = bits.as_array().unwrap();
        assert_eq!(pair.len(), 2);
        for b in pair {
            let b = b.as_u64().unwrap();
            assert!(b <= 1);
        }
        assert!(
            pair.iter().any(|b| b.as_u64() == Some(1)),
            "certificate values must be nonzero group elements"
        );
    }

    let cert_file = dir.join("cert.json");
    std::fs::write(&cert_file, &stdout).unwrap();
    run_ok(&[
        "verify",
        "--graph",
        path_str(&g),
        "--certificate",
        path_str(&cert_file),
    ]);
}

#[test]
fn rank_reports_classes_rank_parity_and_certificate() {
    let dir = scratch("rank");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let flow = dir.join("s1.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s1",
        "--out",
        path_str(&flow),
    ]);
    let report_file = dir.join("rank.json");
    run_ok(&[
        "rank",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&flow),
        "--out",
        path_str(&report_file),
    ]);
    let doc = read_json(&report_file);
    assert_eq!(doc["num_value_classes"], 3);
    assert_eq!(doc["rank_q"], 1);
    assert_eq!(doc["mod2_dim"], 1);
    assert_eq!(doc["odd_coordinate_free"], true);
    assert!(doc["certificate"].is_object());
    assert!(doc.get("witness").is_none());
}

#[test]
fn solve_vector_s0_gives_signs_on_even_graph() {
    let dir = scratch("s0");
    let g = gen(&dir, "k5.json", &["--family", "complete", "--n", "5"]);
    let flow = dir.join("s0.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s0",
        "--out",
        path_str(&flow),
    ]);
    let doc = read_json(&flow);
    assert_eq!(doc["dim"], 1);
    assert_eq!(doc["values"].as_object().unwrap().len(), 10);
    run_ok(&["verify", "--graph", path_str(&g), "--flow", path_str(&flow)]);
}

#[test]
fn solve_vector_s6_decomposes_and_recomposes() {
    let dir = scratch("s6");
    let g = gen(&dir, "k4.json", &["--family", "k4"]);
    let s6 = dir.join("s6.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s6",
        "--out",
        path_str(&s6),
    ]);
    let doc = read_json(&s6);
    assert_eq!(doc["flow"]["dim"], 7);
    let parts = doc["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 4);

    // Feed the parts back through compose and check the result verifies.
    let mut args: Vec<String> = vec![
        "compose".into(),
        "--graph".into(),
        path_str(&g).into(),
        "--multiplicity".into(),
        "3".into(),
    ];
    for (i, part) in parts.iter().enumerate() {
        let part_file = dir.join(format!("part{i}.json"));
        std::fs::write(&part_file, serde_json::to_string(part).unwrap()).unwrap();
        args.push("--part".into());
        args.push(path_str(&part_file).into());
    }
    let composed = dir.join("composed.json");
    args.push("--out".into());
    args.push(path_str(&composed).into());
    let arg_refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    run_ok(&arg_refs);
    let composite = read_json(&composed);
    assert_eq!(composite["dim"], 7);
    run_ok(&[
        "verify",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&composed),
    ]);
}

// ---------------------------------------------------------------------------
// immersions
// ---------------------------------------------------------------------------

#[test]
fn immersion_round_trip_preserves_flow_values() {
    let dir = scratch("imm_round_trip");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let imm = dir.join("imm.json");
    run_ok(&[
        "immerse",
        "--construction",
        "two-point",
        "--graph",
        path_str(&g),
        "--out",
        path_str(&imm),
    ]);
    let flow1 = dir.join("flow1.json");
    run_ok(&[
        "flow-from-immersion",
        "--graph",
        path_str(&g),
        "--immersion",
        path_str(&imm),
        "--out",
        path_str(&flow1),
    ]);
    let imm2 = dir.join("imm2.json");
    run_ok(&[
        "immersion-from-flow",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&flow1),
        "--out",
        path_str(&imm2),
    ]);
    let flow2 = dir.join("flow2.json");
    run_ok(&[
        "flow-from-immersion",
        "--graph",
        path_str(&g),
        "--immersion",
        path_str(&imm2),
        "--out",
        path_str(&flow2),
    ]);

    let doc1 = read_json(&flow1);
    let doc2 = read_json(&flow2);
    let values1 = doc1["values"].as_object().unwrap();
    let values2 = doc2["values"].as_object().unwrap();
    assert_eq!(values1.len(), values2.len());
    for (edge, v1) in values1 {
        let a: Vec<f64> = v1
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        let b: Vec<f64> = values2[edge]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert_eq!(a.len(), 3);
        for (x, y) in a.iter().zip(&b) {
            assert!(
                (x - y).abs() <= 1e-9,
                "edge {edge}: {a:?} vs {b:?} differ beyond 1e-9"
            );
        }
    }
}

#[test]
fn immerse_constructions_and_polyline_export() {
    let dir = scratch("imm_polylines");
    let imm = dir.join("k4_imm.json");
    run_ok(&[
        "immerse",
        "--construction",
        "k4",
        "--export-polylines",
        "7",
        "--out",
        path_str(&imm),
    ]);
    let doc = read_json(&imm);
    let polylines = doc["polylines"].as_object().unwrap();
    assert_eq!(polylines.len(), 6, "one polyline per edge");
    for line in polylines.values() {
        let points = line.as_array().unwrap();
        assert_eq!(points.len(), 7);
        for p in points {
            assert_eq!(p.as_array().unwrap().len(), 3);
        }
    }

    // The same samples are available from a stored immersion via export.
    let exported = run_ok(&["export", "--immersion", path_str(&imm), "--samples", "5"]);
    let doc: Value = serde_json::from_str(&exported).unwrap();
    assert_eq!(doc["samples"], 5);
    assert_eq!(doc["polylines"].as_object().unwrap().len(), 6);

    let too_few = run(&["export", "--immersion", path_str(&imm), "--samples", "1"]);
    assert_eq!(too_few.status.code(), Some(2));
}

#[test]
fn quasi_petersen_immersion_flows_into_certificate() {
    let dir = scratch("qp_pipeline");
    let g = gen(
        &dir,
        "qp.json",
        &["--family", "quasi-petersen", "--a", "2", "--b", "3", "--p", "7"],
    );
    let imm = dir.join("imm.json");
    run_ok(&[
        "immerse",
        "--construction",
        "quasi-petersen",
        "--a",
        "2",
        "--b",
        "3",
        "--p",
        "7",
        "--out",
        path_str(&imm),
    ]);
    run_ok(&["verify", "--graph", path_str(&g), "--immersion", path_str(&imm)]);
    let flow = dir.join("flow.json");
    run_ok(&[
        "flow-from-immersion",
        "--graph",
        path_str(&g),
        "--immersion",
        path_str(&imm),
        "--out",
        path_str(&flow),
    ]);

    // A band immersion spreads its meridian axes over many directions, so
    // the rank hypothesis of the certificate pipeline fails; rank reports
    // that politely while four-flow refuses.
    let rank_file = dir.join("rank.json");
    run_ok(&[
        "rank",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&flow),
        "--out",
        path_str(&rank_file),
    ]);
    let doc = read_json(&rank_file);
    assert!(doc["rank_q"].as_u64().unwrap() > 2);
    assert!(doc.get("certificate").is_none());

    let refused = run(&["four-flow", "--graph", path_str(&g), "--flow", path_str(&flow)]);
    assert_eq!(refused.status.code(), Some(2));
    let diag = stderr_diagnostic(&refused);
    assert_eq!(diag["error"]["kind"], "algebra");
}

// ---------------------------------------------------------------------------
// verify failure paths
// ---------------------------------------------------------------------------

#[test]
fn verify_failure_exits_two_with_report() {
    let dir = scratch("verify_fail");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let flow = dir.join("s1.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s1",
        "--out",
        path_str(&flow),
    ]);

    // Scale one value: the norm check must now fail.
    let mut doc = read_json(&flow);
    {
        let values = doc["values"].as_object_mut().unwrap();
        let first = values.values_mut().next().unwrap();
        let bad: Vec<Value> = first
            .as_array()
            .unwrap()
            .iter()
            .map(|x| Value::from(x.as_f64().unwrap() * 2.0))
            .collect();
        *first = Value::Array(bad);
    }
    let bad_flow = dir.join("bad.json");
    std::fs::write(&bad_flow, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["verify", "--graph", path_str(&g), "--flow", path_str(&bad_flow)]);
    assert_eq!(out.status.code(), Some(2));
    let diag = stderr_diagnostic(&out);
    assert_eq!(diag["error"]["kind"], "verify");
    assert_eq!(diag["error"]["report"]["kind"], "vector-flow");
    assert_eq!(diag["error"]["report"]["ok"], false);
    assert!(diag["error"]["report"]["max_norm_deviation"].as_f64().unwrap() > 0.5);
}

#[test]
fn verify_requires_exactly_one_object() {
    let dir = scratch("verify_arity");
    let g = gen(&dir, "k4.json", &["--family", "k4"]);
    let none = run(&["verify", "--graph", path_str(&g)]);
    assert_eq!(none.status.code(), Some(2));
    let diag = stderr_diagnostic(&none);
    assert_eq!(diag["error"]["kind"], "parameters");
}

// ---------------------------------------------------------------------------
// surgery
// ---------------------------------------------------------------------------

#[test]
fn inject_splices_guest_into_host() {
    let dir = scratch("inject");
    let host = gen(&dir, "pet.json", &["--family", "petersen"]);
    let guest = gen(&dir, "k4.json", &["--family", "k4"]);
    let out_file = dir.join("spliced.json");
    run_ok(&[
        "inject",
        "--host",
        path_str(&host),
        "--host-vertex",
        "0",
        "--guest",
        path_str(&guest),
        "--guest-vertex",
        "0",
        "--out",
        path_str(&out_file),
    ]);
    let doc = read_json(&out_file);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 18);
    assert_eq!(doc["info"]["bridges"].as_array().unwrap().len(), 3);
}

#[test]
fn inject_flow_transfers_and_verifies() {
    let dir = scratch("inject_flow");
    let g = gen(&dir, "k4.json", &["--family", "k4"]);
    let imm = dir.join("imm.json");
    run_ok(&["immerse", "--construction", "k4", "--out", path_str(&imm)]);
    let flow = dir.join("flow.json");
    run_ok(&[
        "flow-from-immersion",
        "--graph",
        path_str(&g),
        "--immersion",
        path_str(&imm),
        "--out",
        path_str(&flow),
    ]);
    let out_file = dir.join("spliced.json");
    run_ok(&[
        "inject-flow",
        "--host",
        path_str(&g),
        "--host-flow",
        path_str(&flow),
        "--host-vertex",
        "0",
        "--guest",
        path_str(&g),
        "--guest-flow",
        path_str(&flow),
        "--guest-vertex",
        "2",
        "--out",
        path_str(&out_file),
    ]);
    let doc = read_json(&out_file);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(doc["flow"]["dim"], 3);

    // The emitted graph + flow pair verifies on its own.
    let graph_file = dir.join("spliced_graph.json");
    std::fs::write(&graph_file, serde_json::to_string(&doc["graph"]).unwrap()).unwrap();
    let flow_file = dir.join("spliced_flow.json");
    std::fs::write(&flow_file, serde_json::to_string(&doc["flow"]).unwrap()).unwrap();
    run_ok(&[
        "verify",
        "--graph",
        path_str(&graph_file),
        "--flow",
        path_str(&flow_file),
    ]);
}

#[test]
fn blowup_replaces_vertex_and_extends_flow() {
    let dir = scratch("blowup");
    let g = gen(&dir, "k4.json", &["--family", "k4"]);
    let imm = dir.join("imm.json");
    run_ok(&["immerse", "--construction", "k4", "--out", path_str(&imm)]);
    let flow = dir.join("flow.json");
    run_ok(&[
        "flow-from-immersion",
        "--graph",
        path_str(&g),
        "--immersion",
        path_str(&imm),
        "--out",
        path_str(&flow),
    ]);
    let out_file = dir.join("blown.json");
    run_ok(&[
        "blowup",
        "--graph",
        path_str(&g),
        "--vertex",
        "1",
        "--flow",
        path_str(&flow),
        "--out",
        path_str(&out_file),
    ]);
    let doc = read_json(&out_file);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 9);
    assert_eq!(doc["flow"]["values"].as_object().unwrap().len(), 9);
    assert_eq!(doc["info"]["new_vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn reduce_collapses_even_graph_to_loop_with_trace() {
    let dir = scratch("reduce");
    let g = gen(&dir, "k5.json", &["--family", "complete", "--n", "5"]);
    let out_file = dir.join("reduced.json");
    run_ok(&["reduce", "--graph", path_str(&g), "--out", path_str(&out_file)]);
    let doc = read_json(&out_file);
    // All degrees of the complete graph on five vertices are even, so the
    // whole graph contracts onto a single closed curve.
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 1);
    let trace = doc["trace"]["edges"].as_object().unwrap();
    let chain = trace.values().next().unwrap().as_array().unwrap();
    assert_eq!(chain.len(), 10, "the loop's trace walks every source edge");
}

// ---------------------------------------------------------------------------
// manifests
// ---------------------------------------------------------------------------

#[test]
fn manifest_records_inputs_and_output_hash() {
    let dir = scratch("manifest");
    let g = gen(
        &dir,
        "k33.json",
        &["--family", "complete-bipartite", "--m", "3", "--n", "3"],
    );
    let flow = dir.join("s1.json");
    run_ok(&[
        "solve-vector",
        "--graph",
        path_str(&g),
        "--kind",
        "s1",
        "--out",
        path_str(&flow),
    ]);
    let cert = dir.join("cert.json");
    let manifest = dir.join("manifest.json");
    run_ok(&[
        "four-flow",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&flow),
        "--out",
        path_str(&cert),
        "--manifest",
        path_str(&manifest),
    ]);
    let doc = read_json(&manifest);
    assert_eq!(doc["command"], "four-flow");
    assert!(doc["wall_time_ms"].is_u64());

    let graph_hash = doc["inputs"]["graph"]["sha256"].as_str().unwrap();
    let expect = hex(&Sha256::digest(std::fs::read(&g).unwrap()));
    assert_eq!(graph_hash, expect);

    let out_hash = doc["output_sha256"].as_str().unwrap();
    let expect = hex(&Sha256::digest(std::fs::read(&cert).unwrap()));
    assert_eq!(out_hash, expect);

    assert!(doc["tolerances"]["eps_kcl"].as_f64().unwrap() > 0.0);

    // Rerunning writes a byte-identical primary output.
    let cert2 = dir.join("cert2.json");
    run_ok(&[
        "four-flow",
        "--graph",
        path_str(&g),
        "--flow",
        path_str(&flow),
        "--out",
        path_str(&cert2),
    ]);
    assert_eq!(
        std::fs::read(&cert).unwrap(),
        std::fs::read(&cert2).unwrap()
    );
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
