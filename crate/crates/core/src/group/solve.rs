//! Exhaustive search for nowhere-zero group flows.
//!
//! The solver picks a spanning forest, enumerates assignments of nonzero
//! group elements to the cotree edges in lexicographic order, and derives
//! every tree edge's value from the fundamental cut through it.  An
//! assignment extends to a flow exactly when all derived values are
//! nonzero, so the search is complete: it reports either the
//! lexicographically first witness or a proof that none exists.

use std::collections::BTreeMap;

use crate::graph::{
    require_bipartition, EdgeId, GraphError, Multigraph, Orientation, VertexId,
};
use crate::util::Budget;

use super::{CyclicProduct, FlowError, GroupElem, GroupFlow};

/// Result of an exhaustive flow search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A nowhere-zero flow exists; this is the lexicographically first
    /// one (ordering cotree edges by id and elements by residue tuple).
    Found(GroupFlow),
    /// The whole search space was covered and no flow exists.
    ProvenNone,
    /// The time budget ran out before the search finished.
    BudgetExhausted,
}

struct TreeSlot {
    edge: EdgeId,
    /// +1 when the edge's init endpoint lies inside the subtree its cut
    /// separates, -1 when it points into the subtree.
    kappa: i8,
    remaining: usize,
    partial: GroupElem,
}

struct Search<'a> {
    group: &'a CyclicProduct,
    budget: &'a Budget,
    cotree: Vec<EdgeId>,
    /// For each cotree edge, the tree slots whose fundamental cut it
    /// crosses, with the crossing sign.
    affects: Vec<Vec<(usize, i8)>>,
    slots: Vec<TreeSlot>,
    assignment: Vec<GroupElem>,
    nodes: u64,
    result: Option<BTreeMap<EdgeId, GroupElem>>,
}

enum Control {
    /// This subtree of the search is exhausted; keep going.
    Continue,
    Found,
    Budget,
}

impl Search<'_> {
    fn tree_value(&self, t: usize) -> GroupElem {
        let s = &self.slots[t];
        if s.kappa > 0 {
            self.group.neg(s.partial)
        } else {
            s.partial
        }
    }

    fn dfs(&mut self, j: usize) -> Control {
        self.nodes += 1;
        if self.nodes % 1024 == 1 && self.budget.exhausted() {
            return Control::Budget;
        }
        if j == self.cotree.len() {
            let mut values = BTreeMap::new();
            for (j, &e) in self.cotree.iter().enumerate() {
                values.insert(e, self.assignment[j]);
            }
            for t in 0..self.slots.len() {
                debug_assert_eq!(self.slots[t].remaining, 0);
                values.insert(self.slots[t].edge, self.tree_value(t));
            }
            self.result = Some(values);
            return Control::Found;
        }
        for raw in 1..self.group.order() {
            let val = GroupElem(raw);
            let mut ok = true;
            for k in 0..self.affects[j].len() {
                let (t, coeff) = self.affects[j][k];
                let delta = if coeff > 0 { val } else { self.group.neg(val) };
                self.slots[t].partial = self.group.add(self.slots[t].partial, delta);
                self.slots[t].remaining -= 1;
                if self.slots[t].remaining == 0 && self.group.is_zero(self.tree_value(t)) {
                    ok = false;
                }
            }
            let control = if ok {
                self.assignment[j] = val;
                self.dfs(j + 1)
            } else {
                Control::Continue
            };
            for k in 0..self.affects[j].len() {
                let (t, coeff) = self.affects[j][k];
                let delta = if coeff > 0 { val } else { self.group.neg(val) };
                self.slots[t].partial = self.group.sub(self.slots[t].partial, delta);
                self.slots[t].remaining += 1;
            }
            match control {
                Control::Continue => {}
                done => return done,
            }
        }
        Control::Continue
    }
}

/// Search for a nowhere-zero flow on `g` relative to `o`, valued in
/// `group`.  Complete and deterministic; single-threaded.
pub fn solve_flow_exhaustive(
    g: &Multigraph,
    o: &Orientation,
    group: &CyclicProduct,
    budget: &Budget,
) -> Result<SolveOutcome, FlowError> {
    if o.matches(g).is_err() {
        return Err(FlowError::OrientationMismatch);
    }
    let vs = g.vertices();
    let n = vs.len();
    let vidx: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Breadth-first spanning forest, rooting each component at its
    // smallest vertex and scanning neighbours in edge-id order.
    let mut visited = vec![false; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tree_edge_of_child: BTreeMap<EdgeId, usize> = BTreeMap::new();
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
                let w = e.other(vs[ui]);
                let wi = vidx[&w];
                if !visited[wi] {
                    visited[wi] = true;
                    children[ui].push(wi);
                    tree_edge_of_child.insert(eid, wi);
                    queue.push_back(wi);
                }
            }
        }
    }

    let cotree: Vec<EdgeId> = g
        .edges()
        .iter()
        .map(|e| e.id)
        .filter(|id| !tree_edge_of_child.contains_key(id))
        .collect();

    // Fundamental cut of each tree edge: the edges with exactly one
    // endpoint below it in the forest.  Loops never cross a cut.
    let mut slots = Vec::new();
    let mut affects: Vec<Vec<(usize, i8)>> = vec![Vec::new(); cotree.len()];
    for (&te, &child) in &tree_edge_of_child {
        let mut inside = vec![false; n];
        let mut stack = vec![child];
        while let Some(x) = stack.pop() {
            inside[x] = true;
            stack.extend(children[x].iter().copied());
        }
        let init = o.init(te).unwrap();
        let kappa = if inside[vidx[&init]] { 1 } else { -1 };
        let slot = slots.len();
        let mut remaining = 0;
        for (j, &ce) in cotree.iter().enumerate() {
            let e = g.edge(ce).unwrap();
            if e.is_loop() {
                continue;
            }
            let iu = inside[vidx[&o.init(ce).unwrap()]];
            let iv = inside[vidx[&o.ter(ce).unwrap()]];
            if iu != iv {
                affects[j].push((slot, if iu { 1 } else { -1 }));
                remaining += 1;
            }
        }
        slots.push(TreeSlot {
            edge: te,
            kappa,
            remaining,
            partial: group.zero(),
        });
    }

    // A tree edge crossed by no cotree edge is a bridge: its value is
    // forced to zero, so no nowhere-zero flow exists.
    if slots.iter().any(|s| s.remaining == 0) {
        return Ok(SolveOutcome::ProvenNone);
    }

    let mut search = Search {
        group,
        budget,
        assignment: vec![group.zero(); cotree.len()],
        cotree,
        affects,
        slots,
        nodes: 0,
        result: None,
    };
    match search.dfs(0) {
        Control::Found => Ok(SolveOutcome::Found(GroupFlow::new(
            group.clone(),
            search.result.expect("witness recorded"),
        ))),
        Control::Continue => Ok(SolveOutcome::ProvenNone),
        Control::Budget => Ok(SolveOutcome::BudgetExhausted),
    }
}

/// The canonical 3-flow on a bipartite cubic graph: orient every edge
/// from the left class to the right class and assign 1 in `Z_3`.  Each
/// vertex then has balance +-3 = 0 (mod 3).
pub fn z3_flow_bipartite_cubic(
    g: &Multigraph,
) -> Result<(Orientation, GroupFlow), GraphError> {
    g.require_cubic()?;
    let (left, _right) = require_bipartition(g)?;
    let left: std::collections::BTreeSet<VertexId> = left.into_iter().collect();
    let mut dir = Vec::new();
    for e in g.edges() {
        if left.contains(&e.u) {
            dir.push((e.id, e.u, e.v));
        } else {
            dir.push((e.id, e.v, e.u));
        }
    }
    let o = Orientation::build(g, dir)?;
    let group = CyclicProduct::cyclic(3).expect("order 3");
    let one = group.element(&[1]).expect("1 < 3");
    let values = g.edges().iter().map(|e| (e.id, one)).collect();
    Ok((o, GroupFlow::new(group, values)))
}
