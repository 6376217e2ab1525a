//! Graph surgery: explicit vertex splits, injection of one graph into
//! another at a vertex, and triangle blow-ups.
//!
//! Injection replaces a degree-k vertex `v` of `G` and a degree-k vertex
//! `w` of `H` by k direct "bridge" edges: the i-th edge at `v` (its other
//! endpoint `u_i`) and the paired edge at `w` (other endpoint `z_i`) merge
//! into a single fresh edge `u_i z_i`.  Untouched `G` edges keep their
//! ids; `H` vertices and edges are relabelled into a fresh id block.
//! Blowing up a degree-3 vertex into a triangle is the special case of
//! injecting the complete graph on four vertices.

use super::{EdgeId, EndKind, GraphError, LoopPolicy, Multigraph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// Explicit partition of the edge ends at a vertex, one group per part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitSpec {
    pub groups: Vec<Vec<(EdgeId, EndKind)>>,
}

/// Split vertex `v` into `deg(v)` leaves, one per incident edge end.
/// Edge ids are preserved; returns the new graph and the fresh leaves in
/// end-slot order (a loop at `v` yields two leaves).
pub fn vertex_split(
    g: &Multigraph,
    v: VertexId,
) -> Result<(Multigraph, Vec<VertexId>), GraphError> {
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    let spec = SplitSpec {
        groups: g.incident_ends(v).into_iter().map(|s| vec![s]).collect(),
    };
    vertex_split_grouped(g, v, &spec)
}

/// Split vertex `v` into one fresh vertex per group of `spec`, which must
/// partition the end slots at `v` exactly.  Edge ids are preserved;
/// returns the new graph and the fresh vertices in group order.
pub fn vertex_split_grouped(
    g: &Multigraph,
    v: VertexId,
    spec: &SplitSpec,
) -> Result<(Multigraph, Vec<VertexId>), GraphError> {
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    let slots = g.incident_ends(v);
    let mut claimed: BTreeSet<(EdgeId, EndKind)> = BTreeSet::new();
    for group in &spec.groups {
        for &slot in group {
            if !slots.contains(&slot) {
                return Err(GraphError::Invalid(format!(
                    "slot ({}, {:?}) is not an end at vertex {v}",
                    slot.0, slot.1
                )));
            }
            if !claimed.insert(slot) {
                return Err(GraphError::Invalid(format!(
                    "slot ({}, {:?}) claimed twice",
                    slot.0, slot.1
                )));
            }
        }
    }
    if claimed.len() != slots.len() {
        return Err(GraphError::Invalid(format!(
            "split of vertex {v} covers {} of {} end slots",
            claimed.len(),
            slots.len()
        )));
    }

    let mut edges: BTreeMap<EdgeId, (VertexId, VertexId)> =
        g.edges().iter().map(|e| (e.id, (e.u, e.v))).collect();
    let mut vertices: Vec<VertexId> = g.vertices().to_vec();
    vertices.retain(|&x| x != v);
    let mut fresh = Vec::new();
    let mut next = g.fresh_vertex_id().0;
    for group in &spec.groups {
        let part = VertexId(next);
        next += 1;
        vertices.push(part);
        fresh.push(part);
        for &(e, end) in group {
            let ends = edges.get_mut(&e).unwrap();
            match end {
                EndKind::Head => ends.0 = part,
                EndKind::Tail => ends.1 = part,
            }
        }
    }
    let graph = Multigraph::build(
        vertices,
        edges.into_iter().map(|(e, (a, b))| (e, a, b)),
        LoopPolicy::Allowed,
    )?;
    Ok((graph, fresh))
}

/// One bridge edge created by an injection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Bridge {
    /// Fresh id of the bridge edge, stored from the `G` side to the `H` side.
    pub id: EdgeId,
    /// Former neighbour of `v` in `G` (the bridge's stored `u`).
    pub g_end: VertexId,
    /// Former neighbour of `w` in `H`, relabelled (the bridge's stored `v`).
    pub h_end: VertexId,
    /// The replaced `G` edge (original id).
    pub g_source: EdgeId,
    /// The replaced `H` edge (id in `H` before relabelling).
    pub h_source: EdgeId,
}

/// Relabelling and bridge records of an injection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InjectInfo {
    /// `H` vertex -> vertex in the result (excludes `w`).
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// `H` edge -> edge in the result (excludes the edges at `w`).
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    /// Bridges in pairing order.
    pub bridges: Vec<Bridge>,
}

/// Inject `h` into `g`: remove vertex `w` of `h` and vertex `v` of `g`
/// (which must have equal degrees and no incident loops) and join the two
/// graphs by bridge edges pairing the i-th edge at `w` with the i-th edge
/// at `v` in edge-id order (or an explicit `pairing` of `(h edge, g edge)`
/// ids).  Untouched `g` ids survive; `h` is relabelled.
///
/// The result has `|V(g)| + |V(h)| - 2` vertices and
/// `|E(g)| + |E(h)| - k` edges where `k = deg(v)`.
pub fn inject(
    h: &Multigraph,
    w: VertexId,
    g: &Multigraph,
    v: VertexId,
    pairing: Option<&[(EdgeId, EdgeId)]>,
) -> Result<(Multigraph, InjectInfo), GraphError> {
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    if !h.has_vertex(w) {
        return Err(GraphError::UnknownVertex(w));
    }
    let g_edges_at_v = g.incident_edges(v);
    let h_edges_at_w = h.incident_edges(w);
    for &e in &g_edges_at_v {
        if g.edge(e)?.is_loop() {
            return Err(GraphError::Invalid(format!(
                "injection site {v} has a loop (edge {e})"
            )));
        }
    }
    for &f in &h_edges_at_w {
        if h.edge(f)?.is_loop() {
            return Err(GraphError::Invalid(format!(
                "injection site {w} has a loop (edge {f})"
            )));
        }
    }
    let k = g_edges_at_v.len();
    if k != h_edges_at_w.len() {
        return Err(GraphError::Invalid(format!(
            "degree mismatch at injection sites: deg({v}) = {k}, deg({w}) = {}",
            h_edges_at_w.len()
        )));
    }

    // Pairs held as (g edge, h edge) internally; the `pairing` parameter
    // lists (h edge, g edge) to match the argument order.
    let pairs: Vec<(EdgeId, EdgeId)> = match pairing {
        None => g_edges_at_v
            .iter()
            .copied()
            .zip(h_edges_at_w.iter().copied())
            .collect(),
        Some(p) => {
            let hs: BTreeSet<EdgeId> = p.iter().map(|&(a, _)| a).collect();
            let gs: BTreeSet<EdgeId> = p.iter().map(|&(_, b)| b).collect();
            if p.len() != k
                || gs != g_edges_at_v.iter().copied().collect()
                || hs != h_edges_at_w.iter().copied().collect()
            {
                return Err(GraphError::Invalid(
                    "pairing must match the incident edges at the two sites exactly".into(),
                ));
            }
            p.iter().map(|&(he, ge)| (ge, he)).collect()
        }
    };

    // Relabel H's surviving vertices and edges into fresh blocks.
    let mut vertex_map = BTreeMap::new();
    let mut next_v = g.fresh_vertex_id().0;
    for &x in h.vertices() {
        if x != w {
            vertex_map.insert(x, VertexId(next_v));
            next_v += 1;
        }
    }
    let mut edge_map = BTreeMap::new();
    let removed_h: BTreeSet<EdgeId> = pairs.iter().map(|&(_, f)| f).collect();
    let mut next_e = g.fresh_edge_id().0;
    for e in h.edges() {
        if !removed_h.contains(&e.id) {
            edge_map.insert(e.id, EdgeId(next_e));
            next_e += 1;
        }
    }

    let mut vertices: Vec<VertexId> = g.vertices().iter().copied().filter(|&x| x != v).collect();
    vertices.extend(vertex_map.values().copied());

    let removed_g: BTreeSet<EdgeId> = pairs.iter().map(|&(e, _)| e).collect();
    let mut edges: Vec<(EdgeId, VertexId, VertexId)> = g
        .edges()
        .iter()
        .filter(|e| !removed_g.contains(&e.id))
        .map(|e| (e.id, e.u, e.v))
        .collect();
    for e in h.edges() {
        if let Some(&new_id) = edge_map.get(&e.id) {
            edges.push((new_id, vertex_map[&e.u], vertex_map[&e.v]));
        }
    }
    let mut bridges = Vec::new();
    for &(ge, he) in &pairs {
        let u_i = g.edge(ge)?.other(v);
        let z_i = vertex_map[&h.edge(he)?.other(w)];
        let id = EdgeId(next_e);
        next_e += 1;
        edges.push((id, u_i, z_i));
        bridges.push(Bridge {
            id,
            g_end: u_i,
            h_end: z_i,
            g_source: ge,
            h_source: he,
        });
    }

    let graph = Multigraph::build(vertices, edges, LoopPolicy::Allowed)?;
    Ok((
        graph,
        InjectInfo {
            vertex_map,
            edge_map,
            bridges,
        },
    ))
}

/// Provenance of a triangle blow-up.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlowUpInfo {
    /// The three fresh triangle vertices `x1, x2, x3`; `x_i` adopts the
    /// i-th edge at the blown-up vertex in edge-id order.
    pub new_vertices: [VertexId; 3],
    /// `(adopted edge, its new endpoint)` in edge-id order.
    pub adopted: [(EdgeId, VertexId); 3],
    /// Fresh triangle edges in the order `(x1 x2, x1 x3, x2 x3)`.
    pub triangle_edges: [EdgeId; 3],
}

/// Replace a vertex of a cubic graph by a triangle; each triangle vertex
/// adopts exactly one former edge of `v` (in edge-id order).  Adopted
/// edges keep their ids, and the result is again cubic.
pub fn blow_up_triangle(
    g: &Multigraph,
    v: VertexId,
) -> Result<(Multigraph, BlowUpInfo), GraphError> {
    if !g.has_vertex(v) {
        return Err(GraphError::UnknownVertex(v));
    }
    g.require_cubic()?;
    let incident = g.incident_edges(v);
    if incident.len() != 3 {
        return Err(GraphError::Invalid(format!(
            "blow-up site {v} has a loop"
        )));
    }

    let base_v = g.fresh_vertex_id().0;
    let xs = [VertexId(base_v), VertexId(base_v + 1), VertexId(base_v + 2)];
    let mut vertices: Vec<VertexId> = g.vertices().iter().copied().filter(|&x| x != v).collect();
    vertices.extend(xs);

    let mut edges: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
    let mut adopted = Vec::new();
    for e in g.edges() {
        if let Some(i) = incident.iter().position(|&id| id == e.id) {
            let (a, b) = if e.u == v { (xs[i], e.v) } else { (e.u, xs[i]) };
            edges.push((e.id, a, b));
            adopted.push((e.id, xs[i]));
        } else {
            edges.push((e.id, e.u, e.v));
        }
    }
    let base_e = g.fresh_edge_id().0;
    let tri = [
        EdgeId(base_e),
        EdgeId(base_e + 1),
        EdgeId(base_e + 2),
    ];
    edges.push((tri[0], xs[0], xs[1]));
    edges.push((tri[1], xs[0], xs[2]));
    edges.push((tri[2], xs[1], xs[2]));

    let graph = Multigraph::build(vertices, edges, LoopPolicy::Allowed)?;
    Ok((
        graph,
        BlowUpInfo {
            new_vertices: xs,
            adopted: adopted.try_into().expect("three incident edges"),
            triangle_edges: tri,
        },
    ))
}
