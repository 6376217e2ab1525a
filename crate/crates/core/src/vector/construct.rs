//! Canonical low-dimensional unit-vector flows.
//!
//! * Every graph with all degrees even carries a 1-dimensional flow:
//!   orient the edges along closed trails and give each the value `+1`.
//! * Every bipartite cubic graph carries a 2-dimensional flow whose
//!   values are the three cube roots of unity in the plane.
//! * More generally, a graph carries a cube-roots-of-unity flow exactly
//!   when it carries a nowhere-zero `Z_3` flow; [`r3_flow`] searches for
//!   one with exact integer arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{
    three_edge_coloring_bipartite_cubic, EdgeId, Multigraph, Orientation, VertexId,
};
use crate::util::Budget;

use super::{VectorError, VectorFlow};

/// sin(2*pi/3), the height of the non-real cube roots of unity.
const ROOT3_HALF: f64 = 0.8660254037844386;

/// The three cube roots of unity as plane vectors.
pub(crate) fn cube_root(c: u8) -> Vec<f64> {
    match c {
        0 => vec![1.0, 0.0],
        1 => vec![-0.5, ROOT3_HALF],
        2 => vec![-0.5, -ROOT3_HALF],
        _ => unreachable!("colors are 0, 1, 2"),
    }
}

/// Orient an all-even graph along closed trails and assign every edge
/// the 1-dimensional value `+1`.
///
/// At each vertex the number of outgoing edges then equals the number of
/// incoming ones, so conservation holds with zero floating-point error.
/// Fails on any vertex of odd degree.
pub fn s0_flow_even_graph(g: &Multigraph) -> Result<(Orientation, VectorFlow), VectorError> {
    for &v in g.vertices() {
        if g.degree(v) % 2 != 0 {
            return Err(VectorError::OddVertex(v));
        }
    }
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut dir: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
    // Incidence cursors so each vertex scans its edge list once overall.
    let incident: BTreeMap<VertexId, Vec<EdgeId>> = g
        .vertices()
        .iter()
        .map(|&v| (v, g.incident_edges(v)))
        .collect();
    let mut cursor: BTreeMap<VertexId, usize> =
        g.vertices().iter().map(|&v| (v, 0usize)).collect();

    for &start in g.vertices() {
        if incident[&start].iter().all(|e| used.contains(e)) {
            continue;
        }
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            let list = &incident[&v];
            let cur = cursor.get_mut(&v).unwrap();
            let mut advanced = false;
            while *cur < list.len() {
                let e = list[*cur];
                *cur += 1;
                if used.insert(e) {
                    let w = g.edge(e).unwrap().other(v);
                    dir.insert(e, (v, w));
                    stack.push(w);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
            }
        }
    }
    if used.len() != g.num_edges() {
        return Err(VectorError::Invalid(
            "internal error: even graph not fully traversed".into(),
        ));
    }
    let o = Orientation::build(g, dir.iter().map(|(&e, &(a, b))| (e, a, b)))
        .map_err(VectorError::Graph)?;
    let values = g.edges().iter().map(|e| (e.id, vec![1.0])).collect();
    Ok((o, VectorFlow::new(1, values)))
}

/// The plane flow of a bipartite cubic graph: orient all edges from the
/// left class to the right class and give the three matchings of a
/// proper 3-edge-coloring the three cube roots of unity.
///
/// The three roots sum to zero exactly in `f64` arithmetic, so every
/// vertex balances with zero residual, and each value is orthogonal to
/// nothing it needs to be — the flow lives in the plane and can be
/// embedded into higher dimensions with
/// [`VectorFlow::embed_in_dimension`].
pub fn s1_flow_r3(
    g: &Multigraph,
) -> Result<(Orientation, VectorFlow), VectorError> {
    let classes = three_edge_coloring_bipartite_cubic(g)?;
    let (left, _right) = crate::graph::require_bipartition(g)?;
    let left: BTreeSet<VertexId> = left.into_iter().collect();
    let mut dir = Vec::new();
    for e in g.edges() {
        if left.contains(&e.u) {
            dir.push((e.id, e.u, e.v));
        } else {
            dir.push((e.id, e.v, e.u));
        }
    }
    let o = Orientation::build(g, dir).map_err(VectorError::Graph)?;
    let mut values = BTreeMap::new();
    for (c, class) in classes.iter().enumerate() {
        for &e in class {
            values.insert(e, cube_root(c as u8));
        }
    }
    Ok((o, VectorFlow::new(2, values)))
}

/// Result of the exact cube-roots-of-unity flow search.
#[derive(Clone, Debug, PartialEq)]
pub enum R3Outcome {
    /// The lexicographically first flow, scanning edges in id order and
    /// units in the order 1, omega, omega^2, -1, -omega, -omega^2 (read
    /// along each edge's stored direction; a negative unit is realized by
    /// reversing the edge in the returned orientation).
    Found {
        orientation: Orientation,
        flow: VectorFlow,
    },
    ProvenNone,
    BudgetExhausted,
}

/// Eisenstein-integer coordinates `(a, b)` representing `a + b*omega`.
/// Units 0..3 are the cube roots (1,0), (0,1), (-1,-1); units 3..6 their
/// negations.
fn unit_coords(u: u8) -> (i32, i32) {
    match u {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, -1),
        3 => (-1, 0),
        4 => (0, -1),
        5 => (1, 1),
        _ => unreachable!("units are 0..6"),
    }
}

struct R3Search<'a> {
    budget: &'a Budget,
    /// Non-loop edges in id order as (u index, v index).
    arcs: Vec<(usize, usize)>,
    /// Per-vertex Eisenstein accumulator and count of unassigned ends.
    sum: Vec<(i32, i32)>,
    remaining: Vec<u32>,
    units: Vec<u8>,
    nodes: u64,
    out_of_time: bool,
    found: bool,
}

impl R3Search<'_> {
    /// A vertex with `r` unassigned ends can still cancel an accumulated
    /// value `z` only if `z` is within `r` steps by units of the
    /// Eisenstein lattice, i.e. `max(|a|, |b|, |a-b|) <= r`.
    fn feasible(&self, v: usize) -> bool {
        let (a, b) = self.sum[v];
        let r = self.remaining[v] as i32;
        a.abs() <= r && b.abs() <= r && (a - b).abs() <= r
    }

    fn dfs(&mut self, j: usize) -> bool {
        self.nodes += 1;
        if self.nodes % 4096 == 1 && self.budget.exhausted() {
            self.out_of_time = true;
            return true;
        }
        if j == self.arcs.len() {
            self.found = true;
            return true;
        }
        let (iu, iv) = self.arcs[j];
        for u in 0..6u8 {
            let (da, db) = unit_coords(u);
            self.sum[iu].0 += da;
            self.sum[iu].1 += db;
            self.sum[iv].0 -= da;
            self.sum[iv].1 -= db;
            self.remaining[iu] -= 1;
            self.remaining[iv] -= 1;
            if self.feasible(iu) && self.feasible(iv) {
                self.units[j] = u;
                if self.dfs(j + 1) {
                    // Leave state untouched on success so the caller can
                    // read the witness; the search is over either way.
                    return true;
                }
            }
            self.sum[iu].0 -= da;
            self.sum[iu].1 -= db;
            self.sum[iv].0 += da;
            self.sum[iv].1 += db;
            self.remaining[iu] += 1;
            self.remaining[iv] += 1;
        }
        false
    }
}

/// Search for a flow whose values are cube roots of unity, using exact
/// integer arithmetic in the Eisenstein lattice; the returned values are
/// the floating-point roots but conservation was proven exactly.
///
/// The search assigns each edge one of the six Eisenstein units and
/// folds negative signs into the returned orientation, so the outcome is
/// independent of how the edges are stored.  Loops carry the root 1
/// (they never affect conservation).  Such a flow exists if and only if
/// the graph has a nowhere-zero `Z_3` flow.
pub fn r3_flow(g: &Multigraph, budget: &Budget) -> Result<R3Outcome, VectorError> {
    let vs = g.vertices();
    let vidx: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut arcs = Vec::new();
    let mut arc_edges = Vec::new();
    let mut remaining = vec![0u32; vs.len()];
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        arcs.push((vidx[&e.u], vidx[&e.v]));
        arc_edges.push(e.id);
        remaining[vidx[&e.u]] += 1;
        remaining[vidx[&e.v]] += 1;
    }
    let mut search = R3Search {
        budget,
        units: vec![0; arcs.len()],
        arcs,
        sum: vec![(0, 0); vs.len()],
        remaining,
        nodes: 0,
        out_of_time: false,
        found: false,
    };
    search.dfs(0);
    if search.out_of_time {
        return Ok(R3Outcome::BudgetExhausted);
    }
    if !search.found {
        return Ok(R3Outcome::ProvenNone);
    }
    let mut dir = Vec::new();
    let mut values: BTreeMap<EdgeId, Vec<f64>> = BTreeMap::new();
    for (j, &eid) in arc_edges.iter().enumerate() {
        let e = g.edge(eid).unwrap();
        let u = search.units[j];
        if u < 3 {
            dir.push((eid, e.u, e.v));
            values.insert(eid, cube_root(u));
        } else {
            dir.push((eid, e.v, e.u));
            values.insert(eid, cube_root(u - 3));
        }
    }
    for e in g.edges() {
        if e.is_loop() {
            dir.push((e.id, e.u, e.v));
            values.insert(e.id, cube_root(0));
        }
    }
    let orientation = Orientation::build(g, dir).map_err(VectorError::Graph)?;
    Ok(R3Outcome::Found {
        orientation,
        flow: VectorFlow::new(2, values),
    })
}
