//! Finite multigraphs with stable integer ids, orientations, and cuts.
//!
//! Parallel edges are always allowed; loops only when the graph is built
//! with [`LoopPolicy::Allowed`].  A loop contributes 2 to the degree of its
//! vertex, never appears in a cut, and contributes zero net value to any
//! flow balance.  Edge and vertex ids are opaque and stable: graph
//! transformations keep the ids of untouched edges.

mod coloring;
mod generators;
mod iso;
mod predicates;
mod reduce;
mod surgery;

pub use coloring::three_edge_coloring_bipartite_cubic;
pub use generators::{
    complete_bipartite, complete_graph, cube_graph, cycle_graph, generalized_petersen, k4,
    multiplicity, petersen, quasi_petersen, triple_edge, two_triangles_with_bridge,
    GeneratorError,
};
pub use iso::are_isomorphic;
pub use predicates::{find_bridges, is_bipartite, require_bipartition, Bipartiteness};
pub use reduce::{reduce_to_cubic, EdgeTrace, SourceRef};
pub use surgery::{
    blow_up_triangle, inject, vertex_split, vertex_split_grouped, BlowUpInfo, Bridge, InjectInfo,
    SplitSpec,
};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Identifier of a vertex. Opaque and stable across transformations.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

/// Identifier of an edge. Opaque and stable across transformations.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge with stable endpoints `(u, v)`; `u == v` is a loop.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint other than `at`; for loops returns `at` itself.
    pub fn other(&self, at: VertexId) -> VertexId {
        if at == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Whether loops may be present.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LoopPolicy {
    Forbidden,
    Allowed,
}

/// Errors raised while building or querying graphs.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("loop at vertex {0} but loops are forbidden here")]
    LoopForbidden(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("orientation covers edge {0} not present in the graph")]
    OrientationExtraEdge(EdgeId),
    #[error("orientation missing edge {0}")]
    OrientationMissingEdge(EdgeId),
    #[error("orientation of edge {edge} uses {init}->{ter}, not its endpoints")]
    OrientationEndpointMismatch {
        edge: EdgeId,
        init: VertexId,
        ter: VertexId,
    },
    #[error("graph is not cubic: vertex {vertex} has degree {degree}")]
    NotCubic { vertex: VertexId, degree: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("vertex {0} has degree 1; flows and reductions are undefined")]
    DegreeOne(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    WrongDegree {
        vertex: VertexId,
        degree: usize,
        expected: usize,
    },
    #[error("{0}")]
    Invalid(String),
}

/// A finite multigraph.  Vertices and edges are kept sorted by id.
#[derive(Clone, Debug)]
pub struct Multigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    allow_loops: bool,
}

/// Equality is graph identity — the same vertices and the same edges.
/// The loop policy is a construction-time check, not part of the graph.
impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

/// One end of an edge incident to a vertex.  Loops occupy two slots.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EndKind {
    /// The `u` endpoint as stored.
    Head,
    /// The `v` endpoint as stored.
    Tail,
}

impl Multigraph {
    /// Build a graph, validating ids and endpoints.
    pub fn build(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
        loops: LoopPolicy,
    ) -> Result<Self, GraphError> {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0]));
            }
        }
        let vset: BTreeSet<VertexId> = vs.iter().copied().collect();
        let mut es: Vec<Edge> = edges
            .into_iter()
            .map(|(id, u, v)| Edge { id, u, v })
            .collect();
        es.sort_by_key(|e| e.id);
        for w in es.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateEdge(w[0].id));
            }
        }
        for e in &es {
            for end in [e.u, e.v] {
                if !vset.contains(&end) {
                    return Err(GraphError::DanglingEndpoint {
                        edge: e.id,
                        vertex: end,
                    });
                }
            }
            if e.is_loop() && loops == LoopPolicy::Forbidden {
                return Err(GraphError::LoopForbidden(e.u));
            }
        }
        Ok(Multigraph {
            vertices: vs,
            edges: es,
            allow_loops: loops == LoopPolicy::Allowed,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn allows_loops(&self) -> bool {
        self.allow_loops
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .map(|i| &self.edges[i])
            .map_err(|_| GraphError::UnknownEdge(id))
    }

    /// Degree of `v`; loops count twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }

    /// All edge ends at `v`, sorted by `(edge id, end)`.  A loop at `v`
    /// contributes both its ends.
    pub fn incident_ends(&self, v: VertexId) -> Vec<(EdgeId, EndKind)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.u == v {
                out.push((e.id, EndKind::Head));
            }
            if e.v == v {
                out.push((e.id, EndKind::Tail));
            }
        }
        out
    }

    /// Edges incident to `v` (each edge once, loops included once).
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .edges
            .iter()
            .filter(|e| e.u == v || e.v == v)
            .map(|e| e.id)
            .collect();
        out.dedup();
        out
    }

    pub fn is_cubic(&self) -> bool {
        self.vertices.iter().all(|&v| self.degree(v) == 3)
    }

    pub fn require_cubic(&self) -> Result<(), GraphError> {
        for &v in &self.vertices {
            let d = self.degree(v);
            if d != 3 {
                return Err(GraphError::NotCubic {
                    vertex: v,
                    degree: d,
                });
            }
        }
        Ok(())
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.is_loop())
    }

    /// Adjacency map: for each vertex the `(edge, neighbour)` pairs sorted
    /// by edge id.  Loops appear twice (once per end).
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> {
        let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.u).unwrap().push((e.id, e.v));
            adj.get_mut(&e.v).unwrap().push((e.id, e.u));
        }
        adj
    }

    /// Connected components as sorted vertex sets, in order of smallest
    /// member.  Isolated vertices form their own components.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut comps = Vec::new();
        for &v in &self.vertices {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![v];
            seen.insert(v);
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &(_, w) in &adj[&u] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Smallest id not used by any vertex.
    pub fn fresh_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.last().map_or(0, |v| v.0 + 1))
    }

    /// Smallest id not used by any edge.
    pub fn fresh_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.last().map_or(0, |e| e.id.0 + 1))
    }
}

/// An orientation assigns each edge an initial and terminal endpoint.
/// For a loop both are the loop vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orientation {
    dir: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Orientation {
    /// The orientation that sends every edge from its stored `u` to `v`.
    pub fn canonical(g: &Multigraph) -> Self {
        Orientation {
            dir: g.edges().iter().map(|e| (e.id, (e.u, e.v))).collect(),
        }
    }

    /// Build from explicit `(edge, init, ter)` entries and validate
    /// against the graph: every edge covered exactly once, endpoints match.
    pub fn build(
        g: &Multigraph,
        entries: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut dir = BTreeMap::new();
        for (id, init, ter) in entries {
            let e = g.edge(id).map_err(|_| GraphError::OrientationExtraEdge(id))?;
            let ok = (init == e.u && ter == e.v) || (init == e.v && ter == e.u);
            if !ok {
                return Err(GraphError::OrientationEndpointMismatch {
                    edge: id,
                    init,
                    ter,
                });
            }
            if dir.insert(id, (init, ter)).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
        }
        for e in g.edges() {
            if !dir.contains_key(&e.id) {
                return Err(GraphError::OrientationMissingEdge(e.id));
            }
        }
        Ok(Orientation { dir })
    }

    pub fn init(&self, e: EdgeId) -> Result<VertexId, GraphError> {
        self.dir
            .get(&e)
            .map(|&(i, _)| i)
            .ok_or(GraphError::UnknownEdge(e))
    }

    pub fn ter(&self, e: EdgeId) -> Result<VertexId, GraphError> {
        self.dir
            .get(&e)
            .map(|&(_, t)| t)
            .ok_or(GraphError::UnknownEdge(e))
    }

    pub fn entries(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.dir.iter().map(|(&e, &(i, t))| (e, i, t))
    }

    pub fn covers(&self, e: EdgeId) -> bool {
        self.dir.contains_key(&e)
    }

    /// Check that this orientation covers exactly the edges of `g` with
    /// matching endpoints.
    pub fn matches(&self, g: &Multigraph) -> Result<(), GraphError> {
        for e in g.edges() {
            match self.dir.get(&e.id) {
                None => return Err(GraphError::OrientationMissingEdge(e.id)),
                Some(&(i, t)) => {
                    let ok = (i == e.u && t == e.v) || (i == e.v && t == e.u);
                    if !ok {
                        return Err(GraphError::OrientationEndpointMismatch {
                            edge: e.id,
                            init: i,
                            ter: t,
                        });
                    }
                }
            }
        }
        for &e in self.dir.keys() {
            if g.edge(e).is_err() {
                return Err(GraphError::OrientationExtraEdge(e));
            }
        }
        Ok(())
    }

    /// Swap init and terminal endpoint of `e`.
    pub fn reverse_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        match self.dir.get_mut(&e) {
            Some(p) => {
                *p = (p.1, p.0);
                Ok(())
            }
            None => Err(GraphError::UnknownEdge(e)),
        }
    }

    /// +1 if `e` leaves `v` under this orientation, -1 if it enters, and
    /// 0 for a loop at `v` (whose two ends cancel).
    pub fn sign_at(&self, e: EdgeId, v: VertexId) -> Result<i8, GraphError> {
        let &(i, t) = self.dir.get(&e).ok_or(GraphError::UnknownEdge(e))?;
        Ok(if i == t {
            0
        } else if i == v {
            1
        } else if t == v {
            -1
        } else {
            0
        })
    }
}

/// The directed cut induced by a vertex set `X`: `outgoing` holds edges
/// with initial endpoint in `X` and terminal endpoint outside, `incoming`
/// the reverse.  Loops never appear.  Both lists are sorted by edge id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cut {
    pub outgoing: Vec<EdgeId>,
    pub incoming: Vec<EdgeId>,
}

/// Compute the directed cut of `x` in `g` under `o`.
///
/// Errors if `x` contains a vertex not in the graph.
pub fn cut(g: &Multigraph, o: &Orientation, x: &BTreeSet<VertexId>) -> Result<Cut, GraphError> {
    for &v in x {
        if !g.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
    }
    let mut outgoing = Vec::new();
    let mut incoming = Vec::new();
    for e in g.edges() {
        let init = o.init(e.id)?;
        let ter = o.ter(e.id)?;
        match (x.contains(&init), x.contains(&ter)) {
            (true, false) => outgoing.push(e.id),
            (false, true) => incoming.push(e.id),
            _ => {}
        }
    }
    Ok(Cut { outgoing, incoming })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(n: u32) -> VertexId {
        VertexId(n)
    }
    fn eid(n: u32) -> EdgeId {
        EdgeId(n)
    }

    fn triangle() -> Multigraph {
        Multigraph::build(
            (0..3).map(VertexId),
            vec![
                (eid(0), vid(0), vid(1)),
                (eid(1), vid(1), vid(2)),
                (eid(2), vid(2), vid(0)),
            ],
            LoopPolicy::Forbidden,
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_duplicates_and_dangling() {
        let dup_v = Multigraph::build(
            vec![vid(0), vid(0)],
            Vec::<(EdgeId, VertexId, VertexId)>::new(),
            LoopPolicy::Forbidden,
        );
        assert_eq!(dup_v.unwrap_err(), GraphError::DuplicateVertex(vid(0)));

        let dup_e = Multigraph::build(
            vec![vid(0), vid(1)],
            vec![(eid(0), vid(0), vid(1)), (eid(0), vid(1), vid(0))],
            LoopPolicy::Forbidden,
        );
        assert_eq!(dup_e.unwrap_err(), GraphError::DuplicateEdge(eid(0)));

        let dangling = Multigraph::build(
            vec![vid(0)],
            vec![(eid(0), vid(0), vid(7))],
            LoopPolicy::Allowed,
        );
        assert!(matches!(
            dangling.unwrap_err(),
            GraphError::DanglingEndpoint { .. }
        ));
    }

    #[test]
    fn loops_respect_policy_and_count_twice() {
        let forbidden = Multigraph::build(
            vec![vid(0)],
            vec![(eid(0), vid(0), vid(0))],
            LoopPolicy::Forbidden,
        );
        assert_eq!(forbidden.unwrap_err(), GraphError::LoopForbidden(vid(0)));

        let g = Multigraph::build(
            vec![vid(0), vid(1)],
            vec![(eid(0), vid(0), vid(0)), (eid(1), vid(0), vid(1))],
            LoopPolicy::Allowed,
        )
        .unwrap();
        assert_eq!(g.degree(vid(0)), 3);
        assert_eq!(g.degree(vid(1)), 1);
        assert_eq!(g.incident_ends(vid(0)).len(), 3);
    }

    #[test]
    fn parallel_edges_are_distinct() {
        let g = Multigraph::build(
            vec![vid(0), vid(1)],
            vec![
                (eid(0), vid(0), vid(1)),
                (eid(1), vid(0), vid(1)),
                (eid(2), vid(1), vid(0)),
            ],
            LoopPolicy::Forbidden,
        )
        .unwrap();
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.degree(vid(0)), 3);
        assert!(g.is_cubic());
    }

    #[test]
    fn orientation_validates_endpoints() {
        let g = triangle();
        let bad = Orientation::build(
            &g,
            vec![
                (eid(0), vid(0), vid(2)),
                (eid(1), vid(1), vid(2)),
                (eid(2), vid(2), vid(0)),
            ],
        );
        assert!(matches!(
            bad.unwrap_err(),
            GraphError::OrientationEndpointMismatch { .. }
        ));

        let missing = Orientation::build(&g, vec![(eid(0), vid(0), vid(1))]);
        assert_eq!(
            missing.unwrap_err(),
            GraphError::OrientationMissingEdge(eid(1))
        );
    }

    #[test]
    fn cut_of_singleton_is_incident_nonloops() {
        let mut edges = vec![
            (eid(0), vid(0), vid(1)),
            (eid(1), vid(1), vid(2)),
            (eid(2), vid(2), vid(0)),
            (eid(3), vid(0), vid(0)),
        ];
        edges.sort_by_key(|e| e.0);
        let g = Multigraph::build((0..3).map(VertexId), edges, LoopPolicy::Allowed).unwrap();
        let o = Orientation::canonical(&g);
        let x: BTreeSet<_> = [vid(0)].into_iter().collect();
        let c = cut(&g, &o, &x).unwrap();
        assert_eq!(c.outgoing, vec![eid(0)]);
        assert_eq!(c.incoming, vec![eid(2)]);
    }

    #[test]
    fn cut_rejects_unknown_vertices() {
        let g = triangle();
        let o = Orientation::canonical(&g);
        let x: BTreeSet<_> = [vid(9)].into_iter().collect();
        assert_eq!(
            cut(&g, &o, &x).unwrap_err(),
            GraphError::UnknownVertex(vid(9))
        );
    }

    #[test]
    fn components_and_connectivity() {
        let g = Multigraph::build(
            (0..4).map(VertexId),
            vec![(eid(0), vid(0), vid(1)), (eid(1), vid(2), vid(3))],
            LoopPolicy::Forbidden,
        )
        .unwrap();
        assert!(!g.is_connected());
        assert_eq!(
            g.components(),
            vec![vec![vid(0), vid(1)], vec![vid(2), vid(3)]]
        );
        assert!(triangle().is_connected());
    }
}
