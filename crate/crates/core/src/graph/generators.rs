//! Graph families used throughout the crate.
//!
//! Id conventions are fixed so downstream constructions (orientations,
//! immersions) are deterministic: vertices and edges are numbered layer by
//! layer in the documented order.

use super::{Edge, EdgeId, LoopPolicy, Multigraph, VertexId};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("quasi-Petersen parameters out of range: need ceil(p/6) <= a,b <= floor(p/2), got a={a}, b={b}, p={p}")]
    QuasiPetersenBounds { a: u32, b: u32, p: u32 },
    #[error("generalized Petersen parameters out of range: need n >= 3 and 1 <= k < n/2, got n={n}, k={k}")]
    GeneralizedPetersenBounds { n: u32, k: u32 },
    #[error("{what} requires at least {min} vertices, got {got}")]
    TooSmall {
        what: &'static str,
        min: u32,
        got: u32,
    },
}

fn build(vertices: Vec<VertexId>, edges: Vec<(EdgeId, VertexId, VertexId)>) -> Multigraph {
    Multigraph::build(vertices, edges, LoopPolicy::Forbidden)
        .expect("generator produced an invalid graph")
}

/// Cubic graph on vertex layers `V = {0..p}` and `W = {p..2p}` with edges
/// `v_i v_{i+a}`, `w_i w_{i+b}` (indices mod `p`) and the matching
/// `v_i w_i`.  Edge ids: the `V`-layer cycle edges are `0..p` (id `i` joins
/// `v_i` to `v_{i+a}`), the `W`-layer `p..2p`, the matching `2p..3p`.
///
/// Requires `ceil(p/6) <= a, b <= floor(p/2)`.  When `a = p/2` the layer
/// consists of parallel pairs; loops never arise.
pub fn quasi_petersen(a: u32, b: u32, p: u32) -> Result<Multigraph, GeneratorError> {
    let lo = p.div_ceil(6);
    let hi = p / 2;
    if p == 0 || a < lo || a > hi || b < lo || b > hi {
        return Err(GeneratorError::QuasiPetersenBounds { a, b, p });
    }
    let v = |i: u32| VertexId(i % p);
    let w = |i: u32| VertexId(p + i % p);
    let mut edges = Vec::with_capacity(3 * p as usize);
    for i in 0..p {
        edges.push((EdgeId(i), v(i), v(i + a)));
    }
    for i in 0..p {
        edges.push((EdgeId(p + i), w(i), w(i + b)));
    }
    for i in 0..p {
        edges.push((EdgeId(2 * p + i), v(i), w(i)));
    }
    Ok(build((0..2 * p).map(VertexId).collect(), edges))
}

/// Generalized Petersen graph: outer cycle `u_0..u_n` (ids `0..n`), spokes
/// `u_i v_i` (ids `n..2n`), inner edges `v_i v_{i+k}` (ids `2n..3n`).
/// Requires `n >= 3` and `1 <= k < n/2`.
pub fn generalized_petersen(n: u32, k: u32) -> Result<Multigraph, GeneratorError> {
    if n < 3 || k == 0 || 2 * k >= n {
        return Err(GeneratorError::GeneralizedPetersenBounds { n, k });
    }
    let u = |i: u32| VertexId(i % n);
    let v = |i: u32| VertexId(n + i % n);
    let mut edges = Vec::with_capacity(3 * n as usize);
    for i in 0..n {
        edges.push((EdgeId(i), u(i), u(i + 1)));
    }
    for i in 0..n {
        edges.push((EdgeId(n + i), u(i), v(i)));
    }
    for i in 0..n {
        edges.push((EdgeId(2 * n + i), v(i), v(i + k)));
    }
    Ok(build((0..2 * n).map(VertexId).collect(), edges))
}

/// The Petersen graph, as `generalized_petersen(5, 2)`.
pub fn petersen() -> Multigraph {
    generalized_petersen(5, 2).expect("(5,2) is in range")
}

/// Complete graph on `n` vertices `0..n`.  Edge ids enumerate pairs
/// `(u, v)` with `u < v` in lexicographic order.
pub fn complete_graph(n: u32) -> Result<Multigraph, GeneratorError> {
    if n < 1 {
        return Err(GeneratorError::TooSmall {
            what: "complete graph",
            min: 1,
            got: n,
        });
    }
    let mut edges = Vec::new();
    let mut id = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((EdgeId(id), VertexId(u), VertexId(v)));
            id += 1;
        }
    }
    Ok(build((0..n).map(VertexId).collect(), edges))
}

/// `K_4`, the smallest cubic graph requiring four flow values.
pub fn k4() -> Multigraph {
    complete_graph(4).expect("4 >= 1")
}

/// Complete bipartite graph with sides `0..m` and `m..m+n`.  Edge ids
/// enumerate `(i, j)` pairs in lexicographic order: id `n*i + j` joins
/// vertex `i` to vertex `m + j`.
pub fn complete_bipartite(m: u32, n: u32) -> Result<Multigraph, GeneratorError> {
    if m < 1 || n < 1 {
        return Err(GeneratorError::TooSmall {
            what: "complete bipartite graph",
            min: 1,
            got: m.min(n),
        });
    }
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            edges.push((EdgeId(n * i + j), VertexId(i), VertexId(m + j)));
        }
    }
    Ok(build((0..m + n).map(VertexId).collect(), edges))
}

/// The 3-dimensional cube graph.  Vertex `i` is the bit pattern of `i`;
/// edges join patterns at Hamming distance 1, ids in lexicographic
/// endpoint order.
pub fn cube_graph() -> Multigraph {
    let mut edges = Vec::new();
    let mut id = 0;
    for u in 0u32..8 {
        for bit in 0..3 {
            let v = u ^ (1 << bit);
            if u < v {
                edges.push((EdgeId(id), VertexId(u), VertexId(v)));
                id += 1;
            }
        }
    }
    edges.sort_by_key(|&(_, u, v)| (u, v));
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(i, (_, u, v))| (EdgeId(i as u32), u, v))
        .collect();
    build((0..8).map(VertexId).collect(), edges)
}

/// Cycle on `n >= 2` vertices; `n = 2` gives a parallel pair.
pub fn cycle_graph(n: u32) -> Result<Multigraph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall {
            what: "cycle",
            min: 2,
            got: n,
        });
    }
    let edges = (0..n)
        .map(|i| (EdgeId(i), VertexId(i), VertexId((i + 1) % n)))
        .collect();
    Ok(build((0..n).map(VertexId).collect(), edges))
}

/// Two vertices joined by three parallel edges: the smallest cubic
/// bipartite multigraph.
pub fn triple_edge() -> Multigraph {
    build(
        vec![VertexId(0), VertexId(1)],
        (0..3).map(|i| (EdgeId(i), VertexId(0), VertexId(1))).collect(),
    )
}

/// Two disjoint triangles `0-1-2` and `3-4-5` joined by a single bridge
/// `0-3`.  Returns the graph and the bridge's edge id.
pub fn two_triangles_with_bridge() -> (Multigraph, EdgeId) {
    let v = VertexId;
    let edges = vec![
        (EdgeId(0), v(0), v(1)),
        (EdgeId(1), v(1), v(2)),
        (EdgeId(2), v(2), v(0)),
        (EdgeId(3), v(3), v(4)),
        (EdgeId(4), v(4), v(5)),
        (EdgeId(5), v(5), v(3)),
        (EdgeId(6), v(0), v(3)),
    ];
    (build((0..6).map(VertexId).collect(), edges), EdgeId(6))
}

/// Number of edges shared by two vertices (multiplicity).
pub fn multiplicity(g: &Multigraph, a: VertexId, b: VertexId) -> usize {
    g.edges()
        .iter()
        .filter(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
        .count()
}

#[allow(unused)]
fn edge_pairs(g: &Multigraph) -> Vec<(VertexId, VertexId)> {
    g.edges()
        .iter()
        .map(|e: &Edge| (e.u.min(e.v), e.u.max(e.v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::are_isomorphic;

    #[test]
    fn quasi_petersen_1_2_5_is_petersen() {
        let qp = quasi_petersen(1, 2, 5).unwrap();
        assert_eq!(qp.num_vertices(), 10);
        assert_eq!(qp.num_edges(), 15);
        assert!(qp.is_cubic());
        assert!(are_isomorphic(&qp, &petersen()));
    }

    #[test]
    fn quasi_petersen_bounds_enforced() {
        // p=12: lo = 2, hi = 6.
        assert!(quasi_petersen(1, 3, 12).is_err());
        assert!(quasi_petersen(7, 3, 12).is_err());
        assert!(quasi_petersen(2, 6, 12).is_ok());
        assert!(quasi_petersen(0, 0, 0).is_err());
    }

    #[test]
    fn quasi_petersen_half_step_gives_parallel_pairs() {
        let g = quasi_petersen(2, 2, 4).unwrap();
        assert_eq!(g.num_edges(), 12);
        assert!(g.is_cubic());
        // V layer: v0v2 twice, v1v3 twice.
        assert_eq!(multiplicity(&g, VertexId(0), VertexId(2)), 2);
        assert_eq!(multiplicity(&g, VertexId(1), VertexId(3)), 2);
        assert!(!g.has_loops());
    }

    #[test]
    fn quasi_petersen_is_always_cubic_in_range() {
        for p in 2..=13u32 {
            for a in p.div_ceil(6)..=p / 2 {
                for b in p.div_ceil(6)..=p / 2 {
                    let g = quasi_petersen(a, b, p).unwrap();
                    assert!(g.is_cubic(), "a={a} b={b} p={p}");
                    assert_eq!(g.num_edges() as u32, 3 * p);
                    assert!(!g.has_loops());
                }
            }
        }
    }

    #[test]
    fn generalized_petersen_shape() {
        let g = generalized_petersen(7, 2).unwrap();
        assert_eq!(g.num_vertices(), 14);
        assert_eq!(g.num_edges(), 21);
        assert!(g.is_cubic());
        assert!(generalized_petersen(6, 3).is_err(), "k < n/2 required");
        assert!(generalized_petersen(2, 1).is_err());
    }

    #[test]
    fn named_graphs_are_cubic() {
        assert!(k4().is_cubic());
        assert!(petersen().is_cubic());
        assert!(cube_graph().is_cubic());
        assert!(triple_edge().is_cubic());
        assert!(complete_bipartite(3, 3).unwrap().is_cubic());
    }

    #[test]
    fn cube_graph_is_bipartite_k33_too() {
        use crate::graph::{is_bipartite, Bipartiteness};
        assert!(matches!(
            is_bipartite(&cube_graph()),
            Bipartiteness::Bipartition { .. }
        ));
        assert!(matches!(
            is_bipartite(&complete_bipartite(3, 3).unwrap()),
            Bipartiteness::Bipartition { .. }
        ));
    }

    #[test]
    fn counts() {
        assert_eq!(complete_graph(5).unwrap().num_edges(), 10);
        assert_eq!(complete_bipartite(3, 3).unwrap().num_edges(), 9);
        assert_eq!(cycle_graph(2).unwrap().num_edges(), 2);
        let (g, bridge) = two_triangles_with_bridge();
        assert_eq!(g.num_edges(), 7);
        assert_eq!(crate::graph::find_bridges(&g), vec![bridge]);
    }
}
