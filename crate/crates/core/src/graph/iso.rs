//! Multigraph isomorphism by backtracking, for small graphs (tests and
//! acceptance checks; intended for at most ~20 vertices).

use super::{Multigraph, VertexId};
use std::collections::BTreeMap;

/// True if the two multigraphs are isomorphic (respecting edge
/// multiplicities and loops).  Exponential in the worst case; use only on
/// small graphs.
pub fn are_isomorphic(g1: &Multigraph, g2: &Multigraph) -> bool {
    if g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return false;
    }
    let n = g1.num_vertices();
    let idx1: BTreeMap<VertexId, usize> = index(g1);
    let idx2: BTreeMap<VertexId, usize> = index(g2);
    let m1 = mult_matrix(g1, &idx1);
    let m2 = mult_matrix(g2, &idx2);

    // Invariant per vertex: (degree, loop count, sorted multiset of
    // incident multiplicities).
    let sig = |m: &Vec<Vec<usize>>, i: usize| {
        let mut mults: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| m[i][j]).collect();
        mults.sort_unstable();
        mults.retain(|&x| x > 0);
        let deg: usize = mults.iter().sum::<usize>() + 2 * m[i][i];
        (deg, m[i][i], mults)
    };
    let sig1: Vec<_> = (0..n).map(|i| sig(&m1, i)).collect();
    let sig2: Vec<_> = (0..n).map(|i| sig(&m2, i)).collect();
    {
        let mut s1 = sig1.clone();
        let mut s2 = sig2.clone();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return false;
        }
    }

    // Map vertices of g1 in order of rarest signature first.
    let mut order: Vec<usize> = (0..n).collect();
    let mut freq: BTreeMap<&(usize, usize, Vec<usize>), usize> = BTreeMap::new();
    for s in &sig1 {
        *freq.entry(s).or_insert(0) += 1;
    }
    order.sort_by_key(|&i| (freq[&sig1[i]], i));

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(0, &order, &sig1, &sig2, &m1, &m2, &mut mapping, &mut used)
}

fn index(g: &Multigraph) -> BTreeMap<VertexId, usize> {
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect()
}

fn mult_matrix(g: &Multigraph, idx: &BTreeMap<VertexId, usize>) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut m = vec![vec![0usize; n]; n];
    for e in g.edges() {
        let (a, b) = (idx[&e.u], idx[&e.v]);
        if a == b {
            m[a][a] += 1; // loop count stored on the diagonal
        } else {
            m[a][b] += 1;
            m[b][a] += 1;
        }
    }
    m
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    k: usize,
    order: &[usize],
    sig1: &[(usize, usize, Vec<usize>)],
    sig2: &[(usize, usize, Vec<usize>)],
    m1: &Vec<Vec<usize>>,
    m2: &Vec<Vec<usize>>,
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let i = order[k];
    for j in 0..sig2.len() {
        if used[j] || sig1[i] != sig2[j] {
            continue;
        }
        // Multiplicities to every already-mapped vertex must agree.
        let consistent = order[..k]
            .iter()
            .all(|&p| m1[i][p] == m2[j][mapping[p]] && m1[i][i] == m2[j][j]);
        if !consistent {
            continue;
        }
        mapping[i] = j;
        used[j] = true;
        if backtrack(k + 1, order, sig1, sig2, m1, m2, mapping, used) {
            return true;
        }
        used[j] = false;
        mapping[i] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        complete_bipartite, cube_graph, cycle_graph, generalized_petersen, k4, petersen,
        quasi_petersen, EdgeId, LoopPolicy,
    };

    #[test]
    fn relabelled_graphs_are_isomorphic() {
        let g = petersen();
        // Shift all vertex ids by 100 and reverse edge ids.
        let m = g.num_edges() as u32;
        let shifted = Multigraph::build(
            g.vertices().iter().map(|v| VertexId(v.0 + 100)),
            g.edges().iter().map(|e| {
                (
                    EdgeId(m - 1 - e.id.0),
                    VertexId(e.u.0 + 100),
                    VertexId(e.v.0 + 100),
                )
            }),
            LoopPolicy::Forbidden,
        )
        .unwrap();
        assert!(are_isomorphic(&g, &shifted));
    }

    #[test]
    fn different_cubic_graphs_differ() {
        assert!(!are_isomorphic(&k4(), &complete_bipartite(3, 3).unwrap()));
        assert!(!are_isomorphic(&petersen(), &cube_graph()));
        // Same vertex and edge count, different structure: the
        // triangular prism has triangles, K_{3,3} has none.
        assert!(!are_isomorphic(
            &generalized_petersen(3, 1).unwrap(),
            &complete_bipartite(3, 3).unwrap()
        ));
        // The 4-prism is the cube, under either generator.
        assert!(are_isomorphic(
            &generalized_petersen(4, 1).unwrap(),
            &cube_graph()
        ));
        assert!(are_isomorphic(
            &quasi_petersen(1, 1, 4).unwrap(),
            &cube_graph()
        ));
    }

    #[test]
    fn multiplicities_matter() {
        let a = cycle_graph(2).unwrap(); // double edge
        let b = Multigraph::build(
            vec![VertexId(0), VertexId(1)],
            vec![
                (EdgeId(0), VertexId(0), VertexId(0)),
                (EdgeId(1), VertexId(1), VertexId(1)),
            ],
            LoopPolicy::Allowed,
        )
        .unwrap();
        assert!(!are_isomorphic(&a, &b));
    }

    #[test]
    fn loops_matter() {
        let a = Multigraph::build(
            vec![VertexId(0)],
            vec![(EdgeId(0), VertexId(0), VertexId(0))],
            LoopPolicy::Allowed,
        )
        .unwrap();
        let b = Multigraph::build(
            vec![VertexId(0)],
            Vec::<(EdgeId, VertexId, VertexId)>::new(),
            LoopPolicy::Allowed,
        )
        .unwrap();
        assert!(!are_isomorphic(&a, &b));
    }
}
