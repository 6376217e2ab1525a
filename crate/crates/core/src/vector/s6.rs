//! Seven-dimensional unit flows on bridgeless graphs, by decomposition.
//!
//! The construction finds an even subgraph `H1` and three subgraphs
//! `H2, H3, H4` that each carry a nowhere-zero `Z_3` flow, such that
//! every edge lies in exactly three of the four.  Composing `H1`'s
//! 1-dimensional flow with the three 2-dimensional cube-root flows at
//! scale `1/sqrt(3)` yields a verified unit flow of dimension 7.
//!
//! The search is exhaustive at desk scale: candidate `H1` are the
//! elements of the even-subgraph (cycle) space, and for each candidate
//! every way of excluding its edges from one of `H2..H4` is tried,
//! memoizing `Z_3`-flowability per subgraph.  A nowhere-zero `Z_6` flow,
//! when one is found quickly, seeds the candidate order so the first
//! family tried is usually a valid one.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{find_bridges, EdgeId, LoopPolicy, Multigraph, Orientation, VertexId};
use crate::group::{solve_flow_exhaustive, CyclicProduct, GroupFlow, SolveOutcome};
use crate::util::Budget;

use super::{
    compose_decomposition, r3_flow, s0_flow_even_graph, FlowPart, R3Outcome, VectorError,
    VectorFlow,
};

/// A decomposition witnessing a 7-dimensional unit flow: the host
/// orientation, the four parts (the first even with a 1-dimensional
/// flow, the rest with cube-root flows), and the composed flow itself.
#[derive(Clone, Debug, PartialEq)]
pub struct S6Certificate {
    pub orientation: Orientation,
    pub parts: Vec<FlowPart>,
    pub flow: VectorFlow,
}

impl S6Certificate {
    /// How many parts contain each edge (3 everywhere by construction).
    pub fn coverage(&self) -> BTreeMap<EdgeId, usize> {
        let mut count = BTreeMap::new();
        for p in &self.parts {
            for e in p.graph.edges() {
                *count.entry(e.id).or_insert(0) += 1;
            }
        }
        count
    }
}

/// The subgraph of `g` spanned by the edges of `mask` (indices into
/// `edge_ids`), keeping ids and endpoints, with only incident vertices.
fn subgraph_of_mask(g: &Multigraph, edge_ids: &[EdgeId], mask: u128) -> Multigraph {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, &eid) in edge_ids.iter().enumerate() {
        if mask >> i & 1 == 1 {
            let e = g.edge(eid).unwrap();
            edges.push((e.id, e.u, e.v));
            vertices.push(e.u);
            vertices.push(e.v);
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    Multigraph::build(vertices, edges, LoopPolicy::Allowed)
        .expect("a subgraph of a valid graph is valid")
}

/// Memoized test for nowhere-zero `Z_3`-flowability of edge subsets.
struct Z3Cache<'a> {
    g: &'a Multigraph,
    edge_ids: &'a [EdgeId],
    z3: CyclicProduct,
    budget: &'a Budget,
    memo: HashMap<u128, bool>,
}

impl Z3Cache<'_> {
    fn flowable(&mut self, mask: u128) -> Result<bool, VectorError> {
        if let Some(&hit) = self.memo.get(&mask) {
            return Ok(hit);
        }
        let sub = subgraph_of_mask(self.g, self.edge_ids, mask);
        let o = Orientation::canonical(&sub);
        let outcome = solve_flow_exhaustive(&sub, &o, &self.z3, self.budget)
            .map_err(|e| VectorError::Invalid(format!("subgraph flow solve failed: {e}")))?;
        let answer = match outcome {
            SolveOutcome::Found(_) => true,
            SolveOutcome::ProvenNone => false,
            SolveOutcome::BudgetExhausted => return Err(VectorError::BudgetExhausted),
        };
        self.memo.insert(mask, answer);
        Ok(answer)
    }
}

/// Assign each `H1` edge to the one part (2, 3 or 4) it is excluded
/// from, depth-first with hint-guided branch order, and report the
/// exclusion masks of the first assignment whose three parts are all
/// `Z_3`-flowable.
struct ExclusionSearch<'a, 'b> {
    h1_edges: Vec<usize>,
    /// Branch order per H1 edge: a permutation of {0, 1, 2} meaning the
    /// part (2 + value) to exclude the edge from first.
    orders: Vec<[usize; 3]>,
    full_mask: u128,
    cache: &'b mut Z3Cache<'a>,
    budget: &'a Budget,
    excl: [u128; 3],
    nodes: u64,
}

impl ExclusionSearch<'_, '_> {
    fn dfs(&mut self, depth: usize) -> Result<Option<[u128; 3]>, VectorError> {
        self.nodes += 1;
        if self.nodes % 1024 == 1 && self.budget.exhausted() {
            return Err(VectorError::BudgetExhausted);
        }
        if depth == self.h1_edges.len() {
            for j in 0..3 {
                if !self.cache.flowable(self.full_mask ^ self.excl[j])? {
                    return Ok(None);
                }
            }
            return Ok(Some(self.excl));
        }
        let bit = 1u128 << self.h1_edges[depth];
        let order = self.orders[depth];
        for j in order {
            self.excl[j] |= bit;
            let hit = self.dfs(depth + 1)?;
            self.excl[j] &= !bit;
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }
}

/// The even-subgraph space of `g` as edge masks: one fundamental cycle
/// per non-forest edge, XOR-closed.  Loops are cycles of their own.
fn cycle_space_basis(g: &Multigraph, edge_index: &BTreeMap<EdgeId, usize>) -> Vec<u128> {
    let vs = g.vertices();
    let vidx: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vs.len();
    let mut visited = vec![false; n];
    let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut tree_edges: Vec<bool> = vec![false; g.num_edges()];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        queue.push_back(root);
        while let Some(ui) = queue.pop_front() {
            for (eid, _end) in g.incident_ends(vs[ui]) {
                let e = g.edge(eid).unwrap();
                if e.is_loop() {
                    continue;
                }
                let wi = vidx[&e.other(vs[ui])];
                if !visited[wi] {
                    visited[wi] = true;
                    parent[wi] = Some((ui, eid));
                    depth[wi] = depth[ui] + 1;
                    tree_edges[edge_index[&eid]] = true;
                    queue.push_back(wi);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for e in g.edges() {
        let i = edge_index[&e.id];
        if tree_edges[i] {
            continue;
        }
        let mut mask = 1u128 << i;
        if !e.is_loop() {
            // Walk both endpoints up to their common ancestor.
            let (mut a, mut b) = (vidx[&e.u], vidx[&e.v]);
            while depth[a] > depth[b] {
                let (p, pe) = parent[a].unwrap();
                mask ^= 1u128 << edge_index[&pe];
                a = p;
            }
            while depth[b] > depth[a] {
                let (p, pe) = parent[b].unwrap();
                mask ^= 1u128 << edge_index[&pe];
                b = p;
            }
            while a != b {
                let (pa, ea) = parent[a].unwrap();
                let (pb, eb) = parent[b].unwrap();
                mask ^= 1u128 << edge_index[&ea];
                mask ^= 1u128 << edge_index[&eb];
                a = pa;
                b = pb;
            }
        }
        basis.push(mask);
    }
    basis
}

/// Decompose a bridgeless graph into an even subgraph and three
/// `Z_3`-flowable subgraphs covering every edge exactly three times, and
/// compose their flows into a 7-dimensional unit flow.
///
/// Complete at desk scale; fails with a budget error when the time runs
/// out, and rejects graphs with bridges (which carry no nowhere-zero
/// flow of any kind).
pub fn s6_pipeline(g: &Multigraph, budget: &Budget) -> Result<S6Certificate, VectorError> {
    let bridges = find_bridges(g);
    if let Some(&b) = bridges.first() {
        return Err(VectorError::Invalid(format!("bridge present: edge {b}")));
    }
    let m = g.num_edges();
    if m > 128 {
        return Err(VectorError::Invalid(
            "decomposition search supports at most 128 edges".into(),
        ));
    }
    let host_o = Orientation::canonical(g);
    let edge_ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    let edge_index: BTreeMap<EdgeId, usize> =
        edge_ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let full_mask: u128 = if m == 0 { 0 } else { (!0u128) >> (128 - m) };

    // Seed: a nowhere-zero Z_6 flow, read as a pair (mod 2, mod 3).  Its
    // odd-support is an even subgraph and a natural H1; edges whose
    // residue kills the mod-3 part want to be excluded from H2 first,
    // which tends to make H2 flowable outright.
    let seed = match solve_flow_exhaustive(
        g,
        &host_o,
        &CyclicProduct::cyclic(6).expect("6 is a valid modulus"),
        budget,
    )
    .map_err(|e| VectorError::Invalid(format!("seed flow solve failed: {e}")))?
    {
        SolveOutcome::Found(f) => Some(f),
        SolveOutcome::ProvenNone => None,
        SolveOutcome::BudgetExhausted => return Err(VectorError::BudgetExhausted),
    };
    let seed_mask = seed.as_ref().map(|f: &GroupFlow| {
        let mut mask = 0u128;
        for (&e, &v) in &f.values {
            if f.group.residues(v)[0] % 2 == 1 {
                mask |= 1 << edge_index[&e];
            }
        }
        mask
    });

    // Candidate H1: the whole cycle space, seed first, then by size.
    let basis = cycle_space_basis(g, &edge_index);
    if basis.len() > 20 {
        return Err(VectorError::Invalid(format!(
            "even-subgraph space dimension {} is beyond direct search",
            basis.len()
        )));
    }
    let mut candidates: Vec<u128> = (0u32..1u32 << basis.len())
        .map(|code| {
            basis
                .iter()
                .enumerate()
                .filter(|&(i, _)| code >> i & 1 == 1)
                .fold(0u128, |acc, (_, &b)| acc ^ b)
        })
        .collect();
    candidates.sort_unstable_by_key(|&mask| (mask.count_ones(), mask));
    candidates.dedup();
    if let Some(sm) = seed_mask {
        if let Some(pos) = candidates.iter().position(|&c| c == sm) {
            candidates.remove(pos);
            candidates.insert(0, sm);
        }
    }

    let mut cache = Z3Cache {
        g,
        edge_ids: &edge_ids,
        z3: CyclicProduct::cyclic(3).expect("3 is a valid modulus"),
        budget,
        memo: HashMap::new(),
    };
    let mut winner: Option<(u128, [u128; 3])> = None;
    'candidates: for &h1 in &candidates {
        if budget.exhausted() {
            return Err(VectorError::BudgetExhausted);
        }
        let h1_edges: Vec<usize> = (0..m).filter(|i| h1 >> i & 1 == 1).collect();
        let orders: Vec<[usize; 3]> = h1_edges
            .iter()
            .map(|&i| match &seed {
                // Residues 3 (odd, mod-3 part zero) prefer exclusion
                // from H2; other H1 edges carry mod-3 information and
                // try H3/H4 first, leaving H2 close to the mod-3
                // support.
                Some(f) if f.group.residues(f.values[&edge_ids[i]])[0] % 3 == 0 => [0, 1, 2],
                Some(_) => [1, 2, 0],
                None => [0, 1, 2],
            })
            .collect();
        let mut search = ExclusionSearch {
            h1_edges,
            orders,
            full_mask,
            cache: &mut cache,
            budget,
            excl: [0; 3],
            nodes: 0,
        };
        if let Some(excl) = search.dfs(0)? {
            winner = Some((h1, excl));
            break 'candidates;
        }
    }
    let (h1, excl) = winner.ok_or_else(|| {
        VectorError::Invalid("no valid decomposition exists for this graph".into())
    })?;

    let mut parts = Vec::with_capacity(4);
    let h1_graph = subgraph_of_mask(g, &edge_ids, h1);
    let (o1, f1) = s0_flow_even_graph(&h1_graph)?;
    parts.push(FlowPart {
        graph: h1_graph,
        orientation: o1,
        flow: f1,
    });
    for &ex in &excl {
        let sub = subgraph_of_mask(g, &edge_ids, full_mask ^ ex);
        match r3_flow(&sub, budget)? {
            R3Outcome::Found { orientation, flow } => parts.push(FlowPart {
                graph: sub,
                orientation,
                flow,
            }),
            R3Outcome::BudgetExhausted => return Err(VectorError::BudgetExhausted),
            R3Outcome::ProvenNone => {
                return Err(VectorError::Invalid(
                    "internal error: cube-root search failed on a Z3-flowable part".into(),
                ))
            }
        }
    }
    let flow = compose_decomposition(g, &host_o, &parts, 3)?;
    Ok(S6Certificate {
        orientation: host_o,
        parts,
        flow,
    })
}
