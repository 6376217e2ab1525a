//! JSON interchange for graphs, flows, immersions, and certificates.
//!
//! Writing is fully deterministic: objects are keyed by id in sorted
//! order, floats are printed with 17 significant digits (enough to
//! round-trip any `f64`), and re-rendering the same data produces the
//! same bytes.  Parsing is strict about structure — dangling endpoints,
//! arity mismatches, and out-of-range residues are rejected — while
//! unknown fields are ignored so files can carry extra annotations.
//!
//! The formats:
//!
//! ```text
//! graph        {"vertices": [ids], "edges": [{"id", "u", "v"}], "orientation": {id: {"init", "ter"}}}
//! group flow   {"group": [moduli], "values": {id: [residues]}}
//! vector flow  {"dim": d, "values": {id: [floats]}, "orientation": {...}}
//! immersion    {"vertices": {id: [x, y, z]}, "arcs": {id: {"axis", "start", "length"}}, "orientation": {...}}
//! certificate  {id: [x_bit, y_bit]}
//! ```
//!
//! Orientation blocks are written whenever one is known and tolerated
//! when absent on read; the reader returns raw `(edge, init, ter)`
//! entries so the caller can validate them against the graph at hand.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{Map, Value};

use crate::graph::{GraphError, LoopPolicy, Multigraph, Orientation, VertexId};
use crate::group::{CyclicProduct, GroupError, GroupFlow};
use crate::immersion::{DirectedArc, Immersion, ImmersionError};
use crate::util::{format_f64, Tolerances};
use crate::vector::VectorFlow;
use crate::EdgeId;

/// Errors raised while reading interchange JSON.
#[derive(thiserror::Error, Debug)]
pub enum JsonError {
    /// The text is not JSON at all.
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    /// The JSON is well-formed but does not match the expected shape.
    #[error("schema error: {0}")]
    Schema(String),
    /// The decoded graph data is inconsistent (e.g. dangling endpoints).
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// The decoded group data is inconsistent (bad moduli or residues).
    #[error(transparent)]
    Group(#[from] GroupError),
    /// A decoded arc fails geometric validation.
    #[error(transparent)]
    Immersion(#[from] ImmersionError),
}

/// An orientation as raw `(edge, init, ter)` entries, before validation
/// against a graph.
pub type OrientationEntries = Vec<(EdgeId, VertexId, VertexId)>;

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Pretty formatter whose floats carry 17 significant digits.
struct SigDigitFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SigDigitFormatter<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Render a JSON value deterministically: two-space indentation, floats
/// with 17 significant digits, trailing newline.
pub fn render(value: &Value) -> String {
    let mut out = Vec::new();
    let fmt = SigDigitFormatter {
        inner: PrettyFormatter::new(),
    };
    let mut ser = Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .expect("serializing an in-memory JSON value cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

fn float_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x)).collect())
}

fn orientation_object(entries: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>) -> Value {
    let sorted: BTreeMap<EdgeId, (VertexId, VertexId)> = entries
        .into_iter()
        .map(|(e, init, ter)| (e, (init, ter)))
        .collect();
    let mut obj = Map::new();
    for (e, (init, ter)) in sorted {
        let mut ends = Map::new();
        ends.insert("init".into(), Value::from(init.0));
        ends.insert("ter".into(), Value::from(ter.0));
        obj.insert(e.0.to_string(), Value::Object(ends));
    }
    Value::Object(obj)
}

/// Build the JSON value for a graph, with its orientation when known.
pub fn graph_value(g: &Multigraph, o: Option<&Orientation>) -> Value {
    let mut root = Map::new();
    root.insert(
        "vertices".into(),
        Value::Array(g.vertices().iter().map(|v| Value::from(v.0)).collect()),
    );
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(e.id.0));
            obj.insert("u".into(), Value::from(e.u.0));
            obj.insert("v".into(), Value::from(e.v.0));
            Value::Object(obj)
        })
        .collect();
    root.insert("edges".into(), Value::Array(edges));
    if let Some(o) = o {
        root.insert("orientation".into(), orientation_object(o.entries()));
    }
    Value::Object(root)
}

/// Build the JSON value for a group-valued flow.
pub fn group_flow_value(f: &GroupFlow) -> Value {
    let mut root = Map::new();
    root.insert(
        "group".into(),
        Value::Array(f.group.moduli().iter().map(|&m| Value::from(m)).collect()),
    );
    let mut values = Map::new();
    for (e, residues) in f.residue_map() {
        values.insert(
            e.0.to_string(),
            Value::Array(residues.into_iter().map(Value::from).collect()),
        );
    }
    root.insert("values".into(), Value::Object(values));
    Value::Object(root)
}

/// Build the JSON value for a vector flow read against `o`.
pub fn vector_flow_value(f: &VectorFlow, o: &Orientation) -> Value {
    let mut root = Map::new();
    root.insert("dim".into(), Value::from(f.dim as u64));
    let mut values = Map::new();
    for (e, xs) in &f.values {
        values.insert(e.0.to_string(), float_array(xs));
    }
    root.insert("values".into(), Value::Object(values));
    root.insert("orientation".into(), orientation_object(o.entries()));
    Value::Object(root)
}

/// Build the JSON value for an immersion, with the orientation that
/// names each arc's start end when known.
pub fn immersion_value(imm: &Immersion, o: Option<&Orientation>) -> Value {
    let mut root = Map::new();
    let mut vertices = Map::new();
    for (v, p) in &imm.vertices {
        vertices.insert(v.0.to_string(), float_array(p));
    }
    root.insert("vertices".into(), Value::Object(vertices));
    let mut arcs = Map::new();
    for (e, arc) in &imm.arcs {
        let mut obj = Map::new();
        obj.insert("axis".into(), float_array(&arc.axis));
        obj.insert("start".into(), float_array(&arc.start));
        obj.insert("length".into(), Value::from(arc.length));
        arcs.insert(e.0.to_string(), Value::Object(obj));
    }
    root.insert("arcs".into(), Value::Object(arcs));
    if let Some(o) = o {
        root.insert("orientation".into(), orientation_object(o.entries()));
    }
    Value::Object(root)
}

/// Build the JSON value for a Klein-four certificate: each edge's pair
/// of bits.
pub fn certificate_value(values: &BTreeMap<EdgeId, (u8, u8)>) -> Value {
    let mut root = Map::new();
    for (e, (x, y)) in values {
        root.insert(
            e.0.to_string(),
            Value::Array(vec![Value::from(*x), Value::from(*y)]),
        );
    }
    Value::Object(root)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn schema(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object()
        .ok_or_else(|| schema(format!("{what}: expected an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .ok_or_else(|| schema(format!("{what}: expected an array")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32, JsonError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(format!("{what}: expected a small non-negative integer")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64, JsonError> {
    v.as_u64()
        .ok_or_else(|| schema(format!("{what}: expected a non-negative integer")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64, JsonError> {
    v.as_f64()
        .ok_or_else(|| schema(format!("{what}: expected a number")))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, what: &str) -> Result<&'a Value, JsonError> {
    obj.get(name)
        .ok_or_else(|| schema(format!("{what}: missing field \"{name}\"")))
}

fn id_key(key: &str, what: &str) -> Result<u32, JsonError> {
    key.parse::<u32>()
        .map_err(|_| schema(format!("{what}: key \"{key}\" is not an id")))
}

fn float_triple(v: &Value, what: &str) -> Result<[f64; 3], JsonError> {
    let arr = as_array(v, what)?;
    if arr.len() != 3 {
        return Err(schema(format!("{what}: expected 3 coordinates")));
    }
    Ok([
        as_f64(&arr[0], what)?,
        as_f64(&arr[1], what)?,
        as_f64(&arr[2], what)?,
    ])
}

fn parse_orientation_entries(v: &Value) -> Result<OrientationEntries, JsonError> {
    let obj = as_object(v, "orientation")?;
    let mut entries = Vec::with_capacity(obj.len());
    for (key, ends) in obj {
        let e = EdgeId(id_key(key, "orientation")?);
        let what = format!("orientation[{key}]");
        let ends = as_object(ends, &what)?;
        let init = as_u32(field(ends, "init", &what)?, &what)?;
        let ter = as_u32(field(ends, "ter", &what)?, &what)?;
        entries.push((e, VertexId(init), VertexId(ter)));
    }
    entries.sort_by_key(|&(e, _, _)| e);
    Ok(entries)
}

/// Parse a graph file.  The orientation, when present, is validated
/// against the decoded graph.
pub fn parse_graph(text: &str) -> Result<(Multigraph, Option<Orientation>), JsonError> {
    let root: Value = serde_json::from_str(text)?;
    graph_from_value(&root)
}

/// Decode a graph from an already-parsed JSON value.
pub fn graph_from_value(root: &Value) -> Result<(Multigraph, Option<Orientation>), JsonError> {
    let obj = as_object(root, "graph")?;
    let mut vertices = Vec::new();
    for (i, v) in as_array(field(obj, "vertices", "graph")?, "vertices")?
        .iter()
        .enumerate()
    {
        vertices.push(VertexId(as_u32(v, &format!("vertices[{i}]"))?));
    }
    let mut edges = Vec::new();
    for (i, e) in as_array(field(obj, "edges", "graph")?, "edges")?
        .iter()
        .enumerate()
    {
        let what = format!("edges[{i}]");
        let e = as_object(e, &what)?;
        edges.push((
            EdgeId(as_u32(field(e, "id", &what)?, &what)?),
            VertexId(as_u32(field(e, "u", &what)?, &what)?),
            VertexId(as_u32(field(e, "v", &what)?, &what)?),
        ));
    }
    let g = Multigraph::build(vertices, edges, LoopPolicy::Allowed)?;
    let o = match obj.get("orientation") {
        Some(v) => Some(Orientation::build(&g, parse_orientation_entries(v)?)?),
        None => None,
    };
    Ok((g, o))
}

/// Parse a group flow file.
pub fn parse_group_flow(text: &str) -> Result<GroupFlow, JsonError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = as_object(&root, "group flow")?;
    let mut moduli = Vec::new();
    for (i, m) in as_array(field(obj, "group", "group flow")?, "group")?
        .iter()
        .enumerate()
    {
        moduli.push(as_u64(m, &format!("group[{i}]"))?);
    }
    let group = CyclicProduct::new(&moduli)?;
    let mut values = BTreeMap::new();
    for (key, residues) in as_object(field(obj, "values", "group flow")?, "values")? {
        let e = EdgeId(id_key(key, "values")?);
        let what = format!("values[{key}]");
        let arr = as_array(residues, &what)?;
        let mut rs = Vec::with_capacity(arr.len());
        for r in arr {
            rs.push(as_u64(r, &what)?);
        }
        values.insert(e, group.element(&rs)?);
    }
    Ok(GroupFlow::new(group, values))
}

/// Parse a vector flow file: the flow plus its raw orientation entries,
/// if an orientation block is present.
pub fn parse_vector_flow(text: &str) -> Result<(VectorFlow, Option<OrientationEntries>), JsonError> {
    let root: Value = serde_json::from_str(text)?;
    vector_flow_from_value(&root)
}

/// Decode a vector flow from an already-parsed JSON value.
pub fn vector_flow_from_value(
    root: &Value,
) -> Result<(VectorFlow, Option<OrientationEntries>), JsonError> {
    let obj = as_object(root, "vector flow")?;
    let dim = as_u64(field(obj, "dim", "vector flow")?, "dim")? as usize;
    if dim == 0 {
        return Err(schema("dim: must be at least 1"));
    }
    let mut values = BTreeMap::new();
    for (key, xs) in as_object(field(obj, "values", "vector flow")?, "values")? {
        let e = EdgeId(id_key(key, "values")?);
        let what = format!("values[{key}]");
        let arr = as_array(xs, &what)?;
        if arr.len() != dim {
            return Err(schema(format!(
                "{what}: expected {dim} coordinates, found {}",
                arr.len()
            )));
        }
        let mut v = Vec::with_capacity(dim);
        for x in arr {
            v.push(as_f64(x, &what)?);
        }
        values.insert(e, v);
    }
    let entries = match obj.get("orientation") {
        Some(v) => Some(parse_orientation_entries(v)?),
        None => None,
    };
    Ok((VectorFlow::new(dim, values), entries))
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Parse an immersion file.  Arcs are validated geometrically (unit
/// axis, orthogonal unit start, length in `(0, 2π]`) but their
/// coordinates are kept bit-for-bit as written, so rendering and
/// re-parsing is the identity.
pub fn parse_immersion(
    text: &str,
    tol: &Tolerances,
) -> Result<(Immersion, Option<OrientationEntries>), JsonError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = as_object(&root, "immersion")?;
    let mut vertices = BTreeMap::new();
    for (key, p) in as_object(field(obj, "vertices", "immersion")?, "vertices")? {
        let v = VertexId(id_key(key, "vertices")?);
        vertices.insert(v, float_triple(p, &format!("vertices[{key}]"))?);
    }
    let mut arcs = BTreeMap::new();
    for (key, arc) in as_object(field(obj, "arcs", "immersion")?, "arcs")? {
        let e = EdgeId(id_key(key, "arcs")?);
        let what = format!("arcs[{key}]");
        let arc = as_object(arc, &what)?;
        let axis = float_triple(field(arc, "axis", &what)?, &what)?;
        let start = float_triple(field(arc, "start", &what)?, &what)?;
        let length = as_f64(field(arc, "length", &what)?, &what)?;
        for (name, v) in [("axis", axis), ("start", start)] {
            let dev = (norm3(v) - 1.0).abs();
            if !(dev <= tol.eps_unit) {
                return Err(schema(format!(
                    "{what}: {name} is not a unit vector (deviation {dev:e})"
                )));
            }
        }
        let dot = axis[0] * start[0] + axis[1] * start[1] + axis[2] * start[2];
        if !(dot.abs() <= tol.eps_unit) {
            return Err(schema(format!(
                "{what}: start is not orthogonal to axis (dot {dot:e})"
            )));
        }
        if !(length > 0.0 && length <= std::f64::consts::TAU) {
            return Err(schema(format!(
                "{what}: length {length:e} must lie in (0, 2*pi]"
            )));
        }
        arcs.insert(
            e,
            DirectedArc {
                axis,
                start,
                length,
            },
        );
    }
    let entries = match obj.get("orientation") {
        Some(v) => Some(parse_orientation_entries(v)?),
        None => None,
    };
    Ok((Immersion { vertices, arcs }, entries))
}

/// Parse a Klein-four certificate file.
pub fn parse_certificate(text: &str) -> Result<BTreeMap<EdgeId, (u8, u8)>, JsonError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = as_object(&root, "certificate")?;
    let mut values = BTreeMap::new();
    for (key, bits) in obj {
        let e = EdgeId(id_key(key, "certificate")?);
        let what = format!("certificate[{key}]");
        let arr = as_array(bits, &what)?;
        if arr.len() != 2 {
            return Err(schema(format!("{what}: expected two bits")));
        }
        let x = as_u64(&arr[0], &what)?;
        let y = as_u64(&arr[1], &what)?;
        if x > 1 || y > 1 {
            return Err(schema(format!("{what}: bits must be 0 or 1")));
        }
        values.insert(e, (x as u8, y as u8));
    }
    Ok(values)
}
