//! Reduction of arbitrary-degree multigraphs to (near-)cubic form.
//!
//! Three local moves are applied:
//!
//! * even-degree vertices of degree `2k >= 4` split into `k` vertices of
//!   degree 2, each adopting a consecutive pair of edge ends (ends sorted
//!   by edge id);
//! * odd-degree vertices of degree `2k + 3 >= 5` split into `k` vertices
//!   of degree 2 plus one of degree 3, the last adopting the final three
//!   ends;
//! * degree-2 vertices are suppressed, merging their two distinct edges
//!   into one fresh edge whose *trace* records the ordered chain of
//!   original edges it replaces, with traversal directions.
//!
//! A vertex whose two ends belong to a single loop cannot be suppressed
//! and is left in place (this is where a component that collapses to a
//! cycle terminates).  Traces compose across cascaded suppressions, so a
//! nowhere-zero flow found on the reduced graph lifts edge-by-edge to the
//! original graph.

use super::{EdgeId, EndKind, GraphError, LoopPolicy, Multigraph, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// One source edge inside a trace chain.  `forward` tells whether the
/// chain traverses the source edge from its stored `u` to `v`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourceRef {
    pub edge: EdgeId,
    pub forward: bool,
}

impl SourceRef {
    fn reversed(self) -> Self {
        SourceRef {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// Records how a transformed graph's edges map back to source edges.
///
/// Every target edge has a chain: length 1 for edges copied verbatim
/// (possibly with reassigned endpoints), length >= 2 for edges produced by
/// suppression.  The chain of target edge `(u -> v)` lists the source
/// edges crossed when walking from `u` to `v` in order.  New vertices
/// introduced by splits map back to the vertex they came from.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EdgeTrace {
    entries: BTreeMap<EdgeId, Vec<SourceRef>>,
    vertex_origin: BTreeMap<VertexId, VertexId>,
}

impl EdgeTrace {
    /// The identity trace on a graph.
    pub fn identity(g: &Multigraph) -> Self {
        EdgeTrace {
            entries: g
                .edges()
                .iter()
                .map(|e| {
                    (
                        e.id,
                        vec![SourceRef {
                            edge: e.id,
                            forward: true,
                        }],
                    )
                })
                .collect(),
            vertex_origin: BTreeMap::new(),
        }
    }

    /// Chain for a target edge, relative to its stored direction.
    pub fn chain(&self, e: EdgeId) -> Option<&[SourceRef]> {
        self.entries.get(&e).map(|v| v.as_slice())
    }

    pub fn entries(&self) -> impl Iterator<Item = (EdgeId, &[SourceRef])> {
        self.entries.iter().map(|(&e, c)| (e, c.as_slice()))
    }

    /// Which source vertex a new vertex came from; identity if untouched.
    pub fn vertex_origin(&self, v: VertexId) -> VertexId {
        *self.vertex_origin.get(&v).unwrap_or(&v)
    }

    pub fn vertex_origins(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_origin
    }

    /// Check that the trace is a bijection-with-chains between `target`'s
    /// edges and `source`'s edges: every target edge has a chain and every
    /// source edge appears in exactly one chain, exactly once.
    pub fn validate(&self, source: &Multigraph, target: &Multigraph) -> Result<(), GraphError> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        for e in target.edges() {
            let chain = self.chain(e.id).ok_or_else(|| {
                GraphError::Invalid(format!("trace missing entry for target edge {}", e.id))
            })?;
            if chain.is_empty() {
                return Err(GraphError::Invalid(format!(
                    "trace entry for edge {} is empty",
                    e.id
                )));
            }
            for s in chain {
                source.edge(s.edge)?;
                if !seen.insert(s.edge) {
                    return Err(GraphError::Invalid(format!(
                        "source edge {} appears in more than one chain",
                        s.edge
                    )));
                }
            }
        }
        for e in source.edges() {
            if !seen.contains(&e.id) {
                return Err(GraphError::Invalid(format!(
                    "source edge {} not covered by any chain",
                    e.id
                )));
            }
        }
        Ok(())
    }
}

/// Reduce every vertex to degree 3 where possible.
///
/// Returns the transformed graph and the trace back to the input.  Errors
/// if any vertex has degree 0 or 1.  Vertices of degree 2 whose both edge
/// ends belong to one loop remain (they cannot be suppressed); on a
/// connected input of minimum degree >= 2 whose reduction keeps at least
/// 4 vertices, the output is cubic.
pub fn reduce_to_cubic(g: &Multigraph) -> Result<(Multigraph, EdgeTrace), GraphError> {
    for &v in g.vertices() {
        match g.degree(v) {
            0 => {
                return Err(GraphError::Invalid(format!(
                    "isolated vertex {v} cannot be reduced to degree 3"
                )))
            }
            1 => return Err(GraphError::DegreeOne(v)),
            _ => {}
        }
    }

    let mut w = Working::from_graph(g);

    // Phase 1: split all vertices of degree >= 4.  Created vertices have
    // degree <= 3 and are never revisited.
    loop {
        let candidate = w
            .vertices
            .iter()
            .copied()
            .find(|&v| w.degree(v) >= 4);
        match candidate {
            None => break,
            Some(v) => w.split(v),
        }
    }

    debug_assert!(w.vertices.iter().all(|&v| w.degree(v) <= 3));

    // Phase 2: suppress degree-2 vertices until only loop-terminal ones
    // remain.
    loop {
        let candidate = w.vertices.iter().copied().find(|&v| {
            if w.degree(v) != 2 {
                return false;
            }
            let slots = w.end_slots(v);
            slots[0].0 != slots[1].0 // both ends on one loop: terminal
        });
        match candidate {
            None => break,
            Some(v) => w.suppress(v),
        }
    }

    w.finish(g)
}

/// Mutable working state for the reduction.
struct Working {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    trace: BTreeMap<EdgeId, Vec<SourceRef>>,
    vertex_origin: BTreeMap<VertexId, VertexId>,
    next_vertex: u32,
    next_edge: u32,
}

impl Working {
    fn from_graph(g: &Multigraph) -> Self {
        Working {
            vertices: g.vertices().iter().copied().collect(),
            edges: g.edges().iter().map(|e| (e.id, (e.u, e.v))).collect(),
            trace: EdgeTrace::identity(g).entries,
            vertex_origin: BTreeMap::new(),
            next_vertex: g.fresh_vertex_id().0,
            next_edge: g.fresh_edge_id().0,
        }
    }

    fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// End slots at `v` sorted by (edge id, end kind).
    fn end_slots(&self, v: VertexId) -> Vec<(EdgeId, EndKind)> {
        let mut out = Vec::new();
        for (&e, &(a, b)) in &self.edges {
            if a == v {
                out.push((e, EndKind::Head));
            }
            if b == v {
                out.push((e, EndKind::Tail));
            }
        }
        out
    }

    fn fresh_vertex(&mut self, origin: VertexId) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(v);
        let base = *self.vertex_origin.get(&origin).unwrap_or(&origin);
        self.vertex_origin.insert(v, base);
        v
    }

    fn reassign(&mut self, slot: (EdgeId, EndKind), to: VertexId) {
        let ends = self.edges.get_mut(&slot.0).expect("live edge");
        match slot.1 {
            EndKind::Head => ends.0 = to,
            EndKind::Tail => ends.1 = to,
        }
    }

    /// Number of connected components (isolated vertices count).
    fn component_count(&self) -> usize {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut count = 0;
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(u) = stack.pop() {
                for &(a, b) in self.edges.values() {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == u && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
            }
        }
        count
    }

    /// Split a vertex of degree >= 4 into degree-2 parts (plus one
    /// degree-3 part when the degree is odd), one pair of ends at a time.
    ///
    /// Each pair is the lexicographically first (by edge id and end kind)
    /// whose removal into its own vertex keeps the component count
    /// unchanged.  When no pair does, every edge at `v` leads to a
    /// different component of the graph minus `v`, each of which contains
    /// a vertex of degree 3 (an all-degree-2 attachment would have odd
    /// total degree), so splitting the first two ends off is safe: no
    /// part of the graph can later collapse to a bare loop that was not
    /// already a cycle component of the input.
    fn split(&mut self, v: VertexId) {
        // Scratch vertex for trial splits; never enters the result.
        const TRIAL: VertexId = VertexId(u32::MAX);
        while self.degree(v) >= 4 {
            let slots = self.end_slots(v);
            let mut choice = (slots[0], slots[1]);
            let before = self.component_count();
            self.vertices.insert(TRIAL);
            'pairs: for i in 0..slots.len() {
                for j in i + 1..slots.len() {
                    self.reassign(slots[i], TRIAL);
                    self.reassign(slots[j], TRIAL);
                    let keeps = self.component_count() == before;
                    self.reassign(slots[i], v);
                    self.reassign(slots[j], v);
                    if keeps {
                        choice = (slots[i], slots[j]);
                        break 'pairs;
                    }
                }
            }
            self.vertices.remove(&TRIAL);
            let part = self.fresh_vertex(v);
            self.reassign(choice.0, part);
            self.reassign(choice.1, part);
        }
        // Move the remaining two or three ends to a part of their own so
        // the split vertex's name disappears, as with every other part.
        let last = self.fresh_vertex(v);
        for slot in self.end_slots(v) {
            self.reassign(slot, last);
        }
        self.vertices.remove(&v);
        self.vertex_origin.remove(&v);
    }

    /// Chain of `e` oriented along (`forward`) or against its storage.
    fn chain_oriented(&self, e: EdgeId, forward: bool) -> Vec<SourceRef> {
        let chain = self.trace.get(&e).expect("live edge has a chain");
        if forward {
            chain.clone()
        } else {
            chain.iter().rev().map(|s| s.reversed()).collect()
        }
    }

    /// Suppress a degree-2 vertex whose ends lie on two distinct edges.
    fn suppress(&mut self, v: VertexId) {
        let slots = self.end_slots(v);
        debug_assert_eq!(slots.len(), 2);
        let (e1, end1) = slots[0];
        let (e2, end2) = slots[1];
        debug_assert_ne!(e1, e2);
        // Walk a -> v -> b.  Slot Head means the edge is stored (v, x), so
        // the walk traverses it against storage.
        let (a, first_forward) = match end1 {
            EndKind::Head => (self.edges[&e1].1, false),
            EndKind::Tail => (self.edges[&e1].0, true),
        };
        let (b, second_forward) = match end2 {
            EndKind::Head => (self.edges[&e2].1, true),
            EndKind::Tail => (self.edges[&e2].0, false),
        };
        let mut chain = self.chain_oriented(e1, first_forward);
        chain.extend(self.chain_oriented(e2, second_forward));
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.remove(&e1);
        self.edges.remove(&e2);
        self.trace.remove(&e1);
        self.trace.remove(&e2);
        self.edges.insert(id, (a, b));
        self.trace.insert(id, chain);
        self.vertices.remove(&v);
        self.vertex_origin.remove(&v);
    }

    fn finish(self, source: &Multigraph) -> Result<(Multigraph, EdgeTrace), GraphError> {
        let graph = Multigraph::build(
            self.vertices.iter().copied(),
            self.edges.iter().map(|(&e, &(a, b))| (e, a, b)),
            LoopPolicy::Allowed,
        )?;
        let trace = EdgeTrace {
            entries: self.trace,
            vertex_origin: self.vertex_origin,
        };
        trace.validate(source, &graph)?;
        Ok((graph, trace))
    }
}
