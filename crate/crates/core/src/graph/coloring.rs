//! Proper 3-edge-colouring of bipartite cubic multigraphs.
//!
//! Every k-regular bipartite multigraph decomposes into k perfect
//! matchings; this module peels them off one at a time with augmenting
//! paths.

use super::{predicates::require_bipartition, EdgeId, GraphError, Multigraph, VertexId};
use std::collections::BTreeMap;

/// Split the edges of a loop-free bipartite cubic multigraph into three
/// perfect matchings.  Deterministic: the matchings are produced by
/// augmenting-path search scanning vertices and edges in id order, and are
/// returned sorted.
///
/// Errors when the graph has loops, is not cubic, or is not bipartite.
pub fn three_edge_coloring_bipartite_cubic(
    g: &Multigraph,
) -> Result<[Vec<EdgeId>; 3], GraphError> {
    if g.has_loops() {
        return Err(GraphError::Invalid(
            "3-edge-colouring requires a loop-free graph".into(),
        ));
    }
    g.require_cubic()?;
    let (left, _right) = require_bipartition(g)?;
    let left_set: std::collections::BTreeSet<VertexId> = left.iter().copied().collect();

    let mut remaining: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    let mut classes: Vec<Vec<EdgeId>> = Vec::new();
    for _round in 0..3 {
        let matching = perfect_matching(g, &left_set, &remaining)?;
        remaining.retain(|e| !matching.contains(e));
        classes.push(matching);
    }
    debug_assert!(remaining.is_empty(), "three matchings must cover E");
    let [a, b, c]: [Vec<EdgeId>; 3] = classes.try_into().unwrap();
    Ok([a, b, c])
}

/// Perfect matching on the sub-multigraph given by `edges`, which must be
/// regular bipartite (true for every peeling round here).
fn perfect_matching(
    g: &Multigraph,
    left: &std::collections::BTreeSet<VertexId>,
    edges: &[EdgeId],
) -> Result<Vec<EdgeId>, GraphError> {
    // Adjacency restricted to the remaining edges, from the left side.
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for &eid in edges {
        let e = g.edge(eid)?;
        let (l, r) = if left.contains(&e.u) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        adj.entry(l).or_default().push((eid, r));
    }
    for lst in adj.values_mut() {
        lst.sort();
    }

    // match_of_right: right vertex -> (left vertex, edge).
    let mut match_right: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
    let mut match_left: BTreeMap<VertexId, EdgeId> = BTreeMap::new();

    let lefts: Vec<VertexId> = adj.keys().copied().collect();
    for &start in &lefts {
        if match_left.contains_key(&start) {
            continue;
        }
        // DFS for an augmenting path from `start`.
        let mut visited_right: std::collections::BTreeSet<VertexId> = Default::default();
        if !augment(&adj, start, &mut visited_right, &mut match_right, &mut match_left) {
            return Err(GraphError::Invalid(format!(
                "no perfect matching saturating vertex {start}; graph is not regular bipartite"
            )));
        }
    }

    let mut out: Vec<EdgeId> = match_left.values().copied().collect();
    out.sort();
    Ok(out)
}

fn augment(
    adj: &BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    l: VertexId,
    visited_right: &mut std::collections::BTreeSet<VertexId>,
    match_right: &mut BTreeMap<VertexId, (VertexId, EdgeId)>,
    match_left: &mut BTreeMap<VertexId, EdgeId>,
) -> bool {
    for &(eid, r) in adj.get(&l).map(|v| v.as_slice()).unwrap_or(&[]) {
        if !visited_right.insert(r) {
            continue;
        }
        let free = match match_right.get(&r) {
            None => true,
            Some(&(l2, _)) => augment(adj, l2, visited_right, match_right, match_left),
        };
        if free {
            match_right.insert(r, (l, eid));
            match_left.insert(l, eid);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cube_graph, petersen, triple_edge};

    fn check_coloring(g: &Multigraph) {
        let classes = three_edge_coloring_bipartite_cubic(g).unwrap();
        let mut all: Vec<EdgeId> = classes.iter().flatten().copied().collect();
        all.sort();
        let expect: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        assert_eq!(all, expect, "classes partition the edge set");
        for class in &classes {
            // Each class is a perfect matching: saturates every vertex once.
            let mut seen = std::collections::BTreeSet::new();
            for &eid in class {
                let e = g.edge(eid).unwrap();
                assert!(seen.insert(e.u), "vertex {} repeated", e.u);
                assert!(seen.insert(e.v), "vertex {} repeated", e.v);
            }
            assert_eq!(seen.len(), g.num_vertices());
        }
    }

    #[test]
    fn colors_k33_cube_and_triple_edge() {
        check_coloring(&complete_bipartite(3, 3).unwrap());
        check_coloring(&cube_graph());
        check_coloring(&triple_edge());
    }

    #[test]
    fn deterministic() {
        let a = three_edge_coloring_bipartite_cubic(&cube_graph()).unwrap();
        let b = three_edge_coloring_bipartite_cubic(&cube_graph()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_nonbipartite() {
        assert_eq!(
            three_edge_coloring_bipartite_cubic(&petersen()).unwrap_err(),
            GraphError::NotBipartite
        );
    }

    #[test]
    fn rejects_noncubic() {
        let g = crate::graph::cycle_graph(4).unwrap();
        assert!(matches!(
            three_edge_coloring_bipartite_cubic(&g).unwrap_err(),
            GraphError::NotCubic { .. }
        ));
    }
}
