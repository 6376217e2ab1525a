//! Group-valued flows: verification, orientation normalization, lifting.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{cut, EdgeId, EdgeTrace, Multigraph, Orientation, VertexId};

use super::{CyclicProduct, GroupElem};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("orientation does not cover the graph's edge set")]
    OrientationMismatch,
    #[error("flow is missing a value for edge {0}")]
    MissingEdge(EdgeId),
    #[error("flow has a value for unknown edge {0}")]
    ExtraEdge(EdgeId),
    #[error("conservation fails at vertex {vertex}")]
    KclViolation { vertex: VertexId },
    #[error("edge {0} carries the identity element")]
    ZeroEdge(EdgeId),
    #[error("cut side contains unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge trace is inconsistent: {0}")]
    BadTrace(String),
}

/// An assignment of group elements to every edge of a graph.  The values
/// are read relative to an [`Orientation`] supplied alongside the flow.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupFlow {
    pub group: CyclicProduct,
    pub values: BTreeMap<EdgeId, GroupElem>,
}

impl GroupFlow {
    pub fn new(group: CyclicProduct, values: BTreeMap<EdgeId, GroupElem>) -> Self {
        GroupFlow { group, values }
    }

    pub fn value(&self, e: EdgeId) -> Option<GroupElem> {
        self.values.get(&e).copied()
    }

    /// Residue tuples keyed by edge, for serialization and display.
    pub fn residue_map(&self) -> BTreeMap<EdgeId, Vec<u64>> {
        self.values
            .iter()
            .map(|(&e, &v)| (e, self.group.residues(v)))
            .collect()
    }
}

fn check_coverage(g: &Multigraph, o: &Orientation, f: &GroupFlow) -> Result<(), FlowError> {
    if o.matches(g).is_err() {
        return Err(FlowError::OrientationMismatch);
    }
    for e in g.edges() {
        if !f.values.contains_key(&e.id) {
            return Err(FlowError::MissingEdge(e.id));
        }
    }
    for &e in f.values.keys() {
        if g.edge(e).is_err() {
            return Err(FlowError::ExtraEdge(e));
        }
    }
    Ok(())
}

/// Outcome of checking a group flow: which vertices break conservation
/// and which edges carry the identity.  Both lists empty means the flow
/// is a nowhere-zero flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculationReport {
    pub kcl_violations: Vec<VertexId>,
    pub zeros: Vec<EdgeId>,
}

impl CirculationReport {
    pub fn is_circulation(&self) -> bool {
        self.kcl_violations.is_empty()
    }

    pub fn is_nowhere_zero_flow(&self) -> bool {
        self.kcl_violations.is_empty() && self.zeros.is_empty()
    }
}

/// Check conservation at every vertex — the sum of values on outgoing
/// edges equals the sum on incoming edges — and list identity-valued
/// edges.  Loops cancel themselves and never affect the balance.
pub fn verify_circulation(
    g: &Multigraph,
    o: &Orientation,
    f: &GroupFlow,
) -> Result<CirculationReport, FlowError> {
    check_coverage(g, o, f)?;
    let grp = &f.group;
    let mut acc: BTreeMap<VertexId, GroupElem> =
        g.vertices().iter().map(|&v| (v, grp.zero())).collect();
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        let v = f.values[&e.id];
        let init = o.init(e.id).map_err(|_| FlowError::OrientationMismatch)?;
        let ter = o.ter(e.id).map_err(|_| FlowError::OrientationMismatch)?;
        let a = acc.get_mut(&init).expect("endpoint is a vertex");
        *a = grp.add(*a, v);
        let b = acc.get_mut(&ter).expect("endpoint is a vertex");
        *b = grp.sub(*b, v);
    }
    let kcl_violations: Vec<VertexId> = acc
        .iter()
        .filter(|(_, &sum)| !grp.is_zero(sum))
        .map(|(&v, _)| v)
        .collect();
    let zeros: Vec<EdgeId> = f
        .values
        .iter()
        .filter(|(_, &v)| grp.is_zero(v))
        .map(|(&e, _)| e)
        .collect();
    Ok(CirculationReport {
        kcl_violations,
        zeros,
    })
}

/// Check conservation and nowhere-zeroness, reporting the first defect
/// as an error.
pub fn verify_nowhere_zero(
    g: &Multigraph,
    o: &Orientation,
    f: &GroupFlow,
) -> Result<(), FlowError> {
    let report = verify_circulation(g, o, f)?;
    if let Some(&vertex) = report.kcl_violations.first() {
        return Err(FlowError::KclViolation { vertex });
    }
    if let Some(&e) = report.zeros.first() {
        return Err(FlowError::ZeroEdge(e));
    }
    Ok(())
}

/// Whether the net flow leaving the vertex set `x` is zero.  For a
/// circulation this holds for every `x`; the check exists as an oracle
/// for that property.
pub fn verify_cut_balance(
    g: &Multigraph,
    o: &Orientation,
    f: &GroupFlow,
    x: &BTreeSet<VertexId>,
) -> Result<bool, FlowError> {
    check_coverage(g, o, f)?;
    let c = cut(g, o, x).map_err(|_| {
        let bad = x
            .iter()
            .find(|&&v| !g.has_vertex(v))
            .copied()
            .unwrap_or(VertexId(0));
        FlowError::UnknownVertex(bad)
    })?;
    let grp = &f.group;
    let mut net = grp.zero();
    for e in &c.outgoing {
        net = grp.add(net, f.values[e]);
    }
    for e in &c.incoming {
        net = grp.sub(net, f.values[e]);
    }
    Ok(grp.is_zero(net))
}

/// Reverse the orientation of every edge whose (edge, value) pair fails
/// the predicate, negating its value so the flow is unchanged as a
/// physical object.  Returns the rewritten orientation and flow.
pub fn reverse_edge_normalize(
    g: &Multigraph,
    o: &Orientation,
    f: &GroupFlow,
    mut keep: impl FnMut(EdgeId, GroupElem) -> bool,
) -> Result<(Orientation, GroupFlow), FlowError> {
    check_coverage(g, o, f)?;
    let mut dir = Vec::new();
    let mut values = BTreeMap::new();
    for e in g.edges() {
        let v = f.values[&e.id];
        let init = o.init(e.id).unwrap();
        let ter = o.ter(e.id).unwrap();
        if keep(e.id, v) {
            dir.push((e.id, init, ter));
            values.insert(e.id, v);
        } else {
            dir.push((e.id, ter, init));
            values.insert(e.id, f.group.neg(v));
        }
    }
    let o2 = Orientation::build(g, dir).map_err(|_| FlowError::OrientationMismatch)?;
    Ok((o2, GroupFlow::new(f.group.clone(), values)))
}

/// Transport a flow on a reduced graph back to the graph it was reduced
/// from, using the edge trace produced by the reduction.
///
/// Each reduced edge's value is pushed along its chain of source edges:
/// a source edge traversed with the chain keeps the value, one traversed
/// against it gets the negated value, always read relative to the
/// original orientation.  Conservation and nowhere-zeroness survive
/// because every interior vertex of a chain sees the value once in and
/// once out.
pub fn lift_flow(
    original: &Multigraph,
    original_orientation: &Orientation,
    trace: &EdgeTrace,
    reduced: &Multigraph,
    reduced_orientation: &Orientation,
    f: &GroupFlow,
) -> Result<GroupFlow, FlowError> {
    check_coverage(reduced, reduced_orientation, f)?;
    if original_orientation.matches(original).is_err() {
        return Err(FlowError::OrientationMismatch);
    }
    trace
        .validate(original, reduced)
        .map_err(|e| FlowError::BadTrace(e.to_string()))?;
    let grp = &f.group;
    let mut values: BTreeMap<EdgeId, GroupElem> = BTreeMap::new();
    for (re, chain) in trace.entries() {
        let redge = reduced.edge(re).map_err(|_| FlowError::ExtraEdge(re))?;
        let init = reduced_orientation.init(re).unwrap();
        // Value of the reduced edge in the chain's walk direction, which
        // runs from the stored endpoint `u` to `v`.
        let walk_value = if init == redge.u {
            f.values[&re]
        } else {
            grp.neg(f.values[&re])
        };
        for sref in chain {
            let se = original
                .edge(sref.edge)
                .map_err(|_| FlowError::BadTrace(format!("unknown source edge {}", sref.edge)))?;
            // Walk traverses the source edge u->v when forward, v->u
            // otherwise; align with the original orientation.
            let walk_init = if sref.forward { se.u } else { se.v };
            let oinit = original_orientation.init(se.id).unwrap();
            let val = if oinit == walk_init {
                walk_value
            } else {
                grp.neg(walk_value)
            };
            if values.insert(se.id, val).is_some() {
                return Err(FlowError::BadTrace(format!(
                    "source edge {} covered twice",
                    se.id
                )));
            }
        }
    }
    for e in original.edges() {
        if !values.contains_key(&e.id) {
            return Err(FlowError::BadTrace(format!(
                "source edge {} not covered by any chain",
                e.id
            )));
        }
    }
    Ok(GroupFlow::new(grp.clone(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, k4, reduce_to_cubic, LoopPolicy};

    fn z(k: u64) -> CyclicProduct {
        CyclicProduct::cyclic(k).unwrap()
    }

    /// Triangle with all edges oriented around the cycle and value 1 in Z_3.
    fn triangle_flow() -> (Multigraph, Orientation, GroupFlow) {
        let g = cycle_graph(3).unwrap();
        let o = Orientation::canonical(&g);
        // canonical orientation: e0: 0->1, e1: 1->2, e2: 2->0 — already cyclic.
        let grp = z(3);
        let one = grp.element(&[1]).unwrap();
        let values = g.edges().iter().map(|e| (e.id, one)).collect();
        (g, o, GroupFlow::new(grp, values))
    }

    #[test]
    fn triangle_circulation_is_valid() {
        let (g, o, f) = triangle_flow();
        verify_nowhere_zero(&g, &o, &f).unwrap();
        // Every vertex subset is balanced.
        for mask in 0u32..8 {
            let x: BTreeSet<VertexId> = (0..3)
                .filter(|i| mask >> i & 1 == 1)
                .map(VertexId)
                .collect();
            assert!(verify_cut_balance(&g, &o, &f, &x).unwrap());
        }
    }

    #[test]
    fn detects_kcl_violation_and_zero_edge() {
        let (g, o, mut f) = triangle_flow();
        let two = f.group.element(&[2]).unwrap();
        f.values.insert(EdgeId(0), two);
        let report = verify_circulation(&g, &o, &f).unwrap();
        assert_eq!(report.kcl_violations, vec![VertexId(0), VertexId(1)]);
        assert!(report.zeros.is_empty());
        assert!(!report.is_circulation());
        // The imbalance shows up as an unbalanced cut around vertex 0 too.
        let x: BTreeSet<_> = [VertexId(0)].into();
        assert!(!verify_cut_balance(&g, &o, &f, &x).unwrap());

        // The all-zero flow conserves but fails nowhere-zeroness.
        let (g, o, mut f) = triangle_flow();
        for e in g.edges() {
            f.values.insert(e.id, f.group.zero());
        }
        let report = verify_circulation(&g, &o, &f).unwrap();
        assert!(report.is_circulation());
        assert!(!report.is_nowhere_zero_flow());
        assert_eq!(report.zeros.len(), g.num_edges());
        assert_eq!(
            verify_nowhere_zero(&g, &o, &f),
            Err(FlowError::ZeroEdge(EdgeId(0)))
        );
    }

    #[test]
    fn loops_never_disturb_balance() {
        let g = Multigraph::build(
            vec![VertexId(0)],
            vec![(EdgeId(0), VertexId(0), VertexId(0))],
            LoopPolicy::Allowed,
        )
        .unwrap();
        let o = Orientation::canonical(&g);
        let grp = z(5);
        let f = GroupFlow::new(
            grp.clone(),
            [(EdgeId(0), grp.element(&[3]).unwrap())].into(),
        );
        verify_nowhere_zero(&g, &o, &f).unwrap();
        let x: BTreeSet<_> = [VertexId(0)].into();
        assert!(verify_cut_balance(&g, &o, &f, &x).unwrap());
    }

    #[test]
    fn normalization_preserves_the_circulation() {
        let (g, o, f) = triangle_flow();
        // Flip every edge.
        let (o2, f2) = reverse_edge_normalize(&g, &o, &f, |_, _| false).unwrap();
        verify_nowhere_zero(&g, &o2, &f2).unwrap();
        let two = f.group.element(&[2]).unwrap();
        for e in g.edges() {
            assert_eq!(f2.value(e.id), Some(two));
            assert_eq!(o2.init(e.id), o.ter(e.id));
        }
        // Flipping nothing is the identity.
        let (o3, f3) = reverse_edge_normalize(&g, &o, &f, |_, _| true).unwrap();
        assert_eq!(f3, f);
        for e in g.edges() {
            assert_eq!(o3.init(e.id), o.init(e.id));
        }
    }

    #[test]
    fn lift_through_cycle_suppression() {
        // C_4 reduces to a single vertex with one loop; a Z_5 value 2 on
        // the loop must lift to +-2 around the cycle, conserving flow.
        let g = cycle_graph(4).unwrap();
        let (red, trace) = reduce_to_cubic(&g).unwrap();
        assert_eq!(red.num_edges(), 1);
        let loop_edge = red.edges()[0].id;
        let ro = Orientation::canonical(&red);
        let grp = z(5);
        let rf = GroupFlow::new(
            grp.clone(),
            [(loop_edge, grp.element(&[2]).unwrap())].into(),
        );
        let go = Orientation::canonical(&g);
        let lifted = lift_flow(&g, &go, &trace, &red, &ro, &rf).unwrap();
        verify_nowhere_zero(&g, &go, &lifted).unwrap();
        assert_eq!(lifted.values.len(), 4);
        for (_, &v) in &lifted.values {
            let r = grp.residues(v)[0];
            assert!(r == 2 || r == 3, "expected +-2, got {r}");
        }
    }

    #[test]
    fn lift_identity_reduction_is_identity() {
        let g = k4();
        let (red, trace) = reduce_to_cubic(&g).unwrap();
        let o = Orientation::canonical(&g);
        let ro = Orientation::canonical(&red);
        let grp = z(4);
        // K4 has a nowhere-zero Z_4 flow; build one by hand: orient the
        // triangle 1->2->3->1 with value 1 and the spokes 0->1,0->2,0->3
        // won't balance; easier: use values on canonical orientation
        // found by the solver in solve.rs tests.  Here just check the
        // chain structure: identity trace lifts values unchanged.
        let values: BTreeMap<EdgeId, GroupElem> = g
            .edges()
            .iter()
            .map(|e| (e.id, grp.element(&[(e.id.0 as u64 % 3) + 1]).unwrap()))
            .collect();
        let f = GroupFlow::new(grp.clone(), values.clone());
        let lifted = lift_flow(&g, &o, &trace, &red, &ro, &f).unwrap();
        assert_eq!(lifted.values, values);
    }
}
