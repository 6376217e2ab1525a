//! Structural predicates: bipartiteness (with witnesses) and bridges.

use super::{EdgeId, GraphError, Multigraph, VertexId};
use std::collections::BTreeMap;

/// Outcome of a bipartiteness test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Bipartiteness {
    /// A two-colouring: the sorted sides of the bipartition.
    Bipartition {
        left: Vec<VertexId>,
        right: Vec<VertexId>,
    },
    /// A closed walk of odd length, listed as its vertex sequence
    /// (first vertex repeated at the end).
    OddClosedWalk(Vec<VertexId>),
}

/// Two-colour the graph by BFS, producing either a bipartition or an odd
/// closed walk as a witness of failure.  A loop is an odd closed walk of
/// length 1.  Bipartition sides are chosen so that in each component the
/// smallest vertex is on the left.
pub fn is_bipartite(g: &Multigraph) -> Bipartiteness {
    let adj = g.adjacency();
    // colour: 0/1; parent edge for walk reconstruction.
    let mut colour: BTreeMap<VertexId, u8> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();

    for e in g.edges() {
        if e.is_loop() {
            return Bipartiteness::OddClosedWalk(vec![e.u, e.u]);
        }
    }

    for &root in g.vertices() {
        if colour.contains_key(&root) {
            continue;
        }
        colour.insert(root, 0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[&u];
            for &(_, w) in &adj[&u] {
                match colour.get(&w) {
                    None => {
                        colour.insert(w, 1 - cu);
                        parent.insert(w, u);
                        queue.push_back(w);
                    }
                    Some(&cw) if cw == cu => {
                        // Odd closed walk: path(root..u) + edge(u,w) + path(w..root) reversed.
                        let path_to_root = |mut x: VertexId| {
                            let mut p = vec![x];
                            while let Some(&px) = parent.get(&x) {
                                p.push(px);
                                x = px;
                            }
                            p
                        };
                        let up = path_to_root(u); // u .. root
                        let wp = path_to_root(w); // w .. root
                        let mut walk: Vec<VertexId> = up.iter().rev().copied().collect(); // root..u
                        walk.push(w);
                        walk.extend(wp.into_iter().skip(1)); // w's parent .. root
                        return Bipartiteness::OddClosedWalk(walk);
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&v, &c) in &colour {
        if c == 0 {
            left.push(v);
        } else {
            right.push(v);
        }
    }
    Bipartiteness::Bipartition { left, right }
}

/// All bridges (cut edges), sorted by edge id.  Parallel edges are never
/// bridges, and loops are never bridges.
pub fn find_bridges(g: &Multigraph) -> Vec<EdgeId> {
    // Iterative DFS with low-point computation on the multigraph; the
    // traversal tracks edge ids so a parallel copy of the tree edge
    // correctly gives a back edge.
    let adj = g.adjacency();
    let index_of: BTreeMap<VertexId, usize> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let n = g.num_vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut bridges = Vec::new();

    for &root in g.vertices() {
        let ri = index_of[&root];
        if disc[ri] != usize::MAX {
            continue;
        }
        // Stack frames: (vertex, incoming edge id, iterator position).
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        disc[ri] = timer;
        low[ri] = timer;
        timer += 1;
        while let Some(&mut (u, in_edge, ref mut pos)) = stack.last_mut() {
            let ui = index_of[&u];
            if *pos < adj[&u].len() {
                let (eid, w) = adj[&u][*pos];
                *pos += 1;
                if Some(eid) == in_edge || w == u {
                    continue; // the tree edge itself, or a loop
                }
                let wi = index_of[&w];
                if disc[wi] == usize::MAX {
                    disc[wi] = timer;
                    low[wi] = timer;
                    timer += 1;
                    stack.push((w, Some(eid), 0));
                } else {
                    low[ui] = low[ui].min(disc[wi]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    let pi = index_of[&p];
                    low[pi] = low[pi].min(low[ui]);
                    if low[ui] > disc[pi] {
                        bridges.push(in_edge.expect("non-root frame has an incoming edge"));
                    }
                }
            }
        }
    }
    bridges.sort();
    bridges
}

/// Convenience wrapper: error unless the graph is bipartite, returning the
/// sides otherwise.
pub fn require_bipartition(g: &Multigraph) -> Result<(Vec<VertexId>, Vec<VertexId>), GraphError> {
    match is_bipartite(g) {
        Bipartiteness::Bipartition { left, right } => Ok((left, right)),
        Bipartiteness::OddClosedWalk(_) => Err(GraphError::NotBipartite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, petersen, two_triangles_with_bridge, LoopPolicy};

    fn vid(n: u32) -> VertexId {
        VertexId(n)
    }
    fn eid(n: u32) -> EdgeId {
        EdgeId(n)
    }

    #[test]
    fn even_cycle_bipartite_odd_cycle_not() {
        match is_bipartite(&cycle_graph(6).unwrap()) {
            Bipartiteness::Bipartition { left, right } => {
                assert_eq!(left.len(), 3);
                assert_eq!(right.len(), 3);
            }
            _ => panic!("C6 is bipartite"),
        }
        match is_bipartite(&cycle_graph(5).unwrap()) {
            Bipartiteness::OddClosedWalk(walk) => {
                assert!(walk.len() >= 2);
                assert_eq!(walk.first(), walk.last());
                assert_eq!(walk.len() % 2, 0, "odd edge count = even vertex count");
            }
            _ => panic!("C5 is not bipartite"),
        }
    }

    #[test]
    fn odd_walk_is_a_real_walk() {
        match is_bipartite(&petersen()) {
            Bipartiteness::OddClosedWalk(walk) => {
                let g = petersen();
                let adj = g.adjacency();
                for pair in walk.windows(2) {
                    assert!(
                        adj[&pair[0]].iter().any(|&(_, w)| w == pair[1]),
                        "walk uses non-edge {:?}",
                        pair
                    );
                }
                assert_eq!(walk.first(), walk.last());
            }
            _ => panic!("Petersen graph is not bipartite"),
        }
    }

    #[test]
    fn loop_is_odd_walk() {
        let g = Multigraph::build(
            vec![vid(0)],
            vec![(eid(0), vid(0), vid(0))],
            LoopPolicy::Allowed,
        )
        .unwrap();
        assert_eq!(
            is_bipartite(&g),
            Bipartiteness::OddClosedWalk(vec![vid(0), vid(0)])
        );
    }

    #[test]
    fn bridge_in_barbell_found() {
        let (g, bridge) = two_triangles_with_bridge();
        assert_eq!(find_bridges(&g), vec![bridge]);
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = Multigraph::build(
            vec![vid(0), vid(1), vid(2)],
            vec![
                (eid(0), vid(0), vid(1)),
                (eid(1), vid(0), vid(1)),
                (eid(2), vid(1), vid(2)),
            ],
            LoopPolicy::Forbidden,
        )
        .unwrap();
        assert_eq!(find_bridges(&g), vec![eid(2)]);
    }

    #[test]
    fn bridgeless_graph_has_no_bridges() {
        assert!(find_bridges(&petersen()).is_empty());
        assert!(find_bridges(&cycle_graph(4).unwrap()).is_empty());
    }

    #[test]
    fn tree_is_all_bridges() {
        let g = Multigraph::build(
            (0..4).map(VertexId),
            vec![
                (eid(0), vid(0), vid(1)),
                (eid(1), vid(1), vid(2)),
                (eid(2), vid(1), vid(3)),
            ],
            LoopPolicy::Forbidden,
        )
        .unwrap();
        assert_eq!(find_bridges(&g), vec![eid(0), eid(1), eid(2)]);
    }
}
