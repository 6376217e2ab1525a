//! Flows valued in unit vectors of a sphere `S^{d-1}` inside `R^d`.
//!
//! A *unit-vector flow* assigns a unit vector of a fixed dimension to
//! every edge of an oriented multigraph so that the vector sum of
//! outgoing values equals that of incoming values at each vertex.  The
//! submodules provide verification, canonical constructions on even and
//! bipartite cubic graphs, composition of flow decompositions, transfer
//! of 3-dimensional flows across graph surgeries, and a search that
//! decomposes a graph into pieces carrying low-dimensional flows.

mod compose;
mod construct;
mod s6;

pub use compose::{
    blow_up_flow_transfer, compose_decomposition, injection_flow_transfer, k4_tetrahedral_flow,
    FlowPart,
};
pub use construct::{r3_flow, s0_flow_even_graph, s1_flow_r3, R3Outcome};
pub use s6::{s6_pipeline, S6Certificate};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Multigraph, Orientation, VertexId};
use crate::util::Tolerances;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum VectorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("orientation does not cover the graph's edge set")]
    OrientationMismatch,
    #[error("flow is missing a value for edge {0}")]
    MissingEdge(EdgeId),
    #[error("flow has a value for unknown edge {0}")]
    ExtraEdge(EdgeId),
    #[error("edge {edge} has a value of dimension {got}, expected {expected}")]
    DimMismatch { edge: EdgeId, expected: usize, got: usize },
    #[error("edge {0} carries a (numerically) zero vector")]
    ZeroValue(EdgeId),
    #[error("value clusters are ambiguous: {0}")]
    AmbiguousValueClusters(String),
    #[error("vertex {0} has odd degree")]
    OddVertex(VertexId),
    #[error("site is degenerate: {0}")]
    DegenerateSite(String),
    #[error("decomposition is invalid: {0}")]
    BadDecomposition(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("{0}")]
    Invalid(String),
}

/// An assignment of `dim`-dimensional vectors to every edge, read
/// relative to an [`Orientation`] supplied alongside the flow.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorFlow {
    pub dim: usize,
    pub values: BTreeMap<EdgeId, Vec<f64>>,
}

impl VectorFlow {
    pub fn new(dim: usize, values: BTreeMap<EdgeId, Vec<f64>>) -> Self {
        VectorFlow { dim, values }
    }

    pub fn value(&self, e: EdgeId) -> Option<&[f64]> {
        self.values.get(&e).map(|v| v.as_slice())
    }

    /// The value of `e` as seen leaving `at`, i.e. negated when the
    /// orientation points into `at`.  Loops are reported as-is.
    pub fn outward_value(&self, o: &Orientation, e: EdgeId, at: VertexId) -> Option<Vec<f64>> {
        let v = self.values.get(&e)?;
        match o.init(e).ok() {
            Some(init) if init == at => Some(v.clone()),
            Some(_) => Some(v.iter().map(|x| -x).collect()),
            None => None,
        }
    }

    /// Pad every value with zeros up to `dim` coordinates.
    pub fn embed_in_dimension(&self, dim: usize) -> Result<VectorFlow, VectorError> {
        if dim < self.dim {
            return Err(VectorError::Invalid(format!(
                "cannot embed dimension {} into {}",
                self.dim, dim
            )));
        }
        let values = self
            .values
            .iter()
            .map(|(&e, v)| {
                let mut w = v.clone();
                w.resize(dim, 0.0);
                (e, w)
            })
            .collect();
        Ok(VectorFlow { dim, values })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Numerical health report for a vector flow.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFlowReport {
    /// Largest vertex imbalance, measured as the Euclidean norm of the
    /// signed sum of incident values.
    pub max_kcl_residual: f64,
    /// Largest deviation of a value's norm from 1.
    pub max_norm_deviation: f64,
    /// Edges whose value is numerically zero.
    pub zero_edges: Vec<EdgeId>,
}

impl VectorFlowReport {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.max_kcl_residual <= tol.eps_kcl
            && self.max_norm_deviation <= tol.eps_unit
            && self.zero_edges.is_empty()
    }
}

pub(crate) fn check_coverage(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
) -> Result<(), VectorError> {
    if o.matches(g).is_err() {
        return Err(VectorError::OrientationMismatch);
    }
    for e in g.edges() {
        match f.values.get(&e.id) {
            None => return Err(VectorError::MissingEdge(e.id)),
            Some(v) if v.len() != f.dim => {
                return Err(VectorError::DimMismatch {
                    edge: e.id,
                    expected: f.dim,
                    got: v.len(),
                })
            }
            Some(_) => {}
        }
    }
    for &e in f.values.keys() {
        if g.edge(e).is_err() {
            return Err(VectorError::ExtraEdge(e));
        }
    }
    Ok(())
}

/// Measure conservation and unit-norm quality of a vector flow.
///
/// Residuals at each vertex are accumulated in ascending edge-id order,
/// so the report is bit-for-bit reproducible across runs.  Loops cancel
/// themselves and contribute nothing.
pub fn verify_vector_flow(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
    tol: &Tolerances,
) -> Result<VectorFlowReport, VectorError> {
    check_coverage(g, o, f)?;
    let mut acc: BTreeMap<VertexId, Vec<f64>> = g
        .vertices()
        .iter()
        .map(|&v| (v, vec![0.0; f.dim]))
        .collect();
    let mut max_norm_deviation: f64 = 0.0;
    let mut zero_edges = Vec::new();
    for e in g.edges() {
        let v = &f.values[&e.id];
        let n = norm(v);
        max_norm_deviation = max_norm_deviation.max((n - 1.0).abs());
        if n <= tol.eps_unit {
            zero_edges.push(e.id);
        }
        if e.is_loop() {
            continue;
        }
        let init = o.init(e.id).unwrap();
        let ter = o.ter(e.id).unwrap();
        for (i, &x) in v.iter().enumerate() {
            acc.get_mut(&init).unwrap()[i] += x;
            acc.get_mut(&ter).unwrap()[i] -= x;
        }
    }
    let max_kcl_residual = acc
        .values()
        .map(|r| norm(r))
        .fold(0.0f64, f64::max);
    Ok(VectorFlowReport {
        max_kcl_residual,
        max_norm_deviation,
        zero_edges,
    })
}

/// The largest vertex imbalance of a flow, re-expressed through its
/// value classes: at each vertex the incident classes are combined with
/// integer coefficients (+-1 per incidence, sign from orientation and
/// sign-flip flag) and the norm of the resulting combination is taken.
///
/// For an index built from the flow itself this equals the KCL residual
/// up to the clustering distance; a vanishing result certifies that the
/// class representatives satisfy the balance conditions.
pub fn balanced_residual(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
    index: &FlowValueIndex,
) -> Result<f64, VectorError> {
    check_coverage(g, o, f)?;
    for e in g.edges() {
        if !index.assignment.contains_key(&e.id) {
            return Err(VectorError::MissingEdge(e.id));
        }
    }
    let mut worst = 0.0f64;
    for &v in g.vertices() {
        let mut eps = vec![0i64; index.reps.len()];
        for e in g.incident_edges(v) {
            if g.edge(e).unwrap().is_loop() {
                continue;
            }
            let sign = if o.init(e).unwrap() == v { 1 } else { -1 };
            let (class, flipped) = index.assignment[&e];
            eps[class] += if flipped { -sign } else { sign };
        }
        let mut sum = vec![0.0; f.dim];
        for (class, &coeff) in eps.iter().enumerate() {
            if coeff != 0 {
                for (k, &x) in index.reps[class].iter().enumerate() {
                    sum[k] += coeff as f64 * x;
                }
            }
        }
        worst = worst.max(norm(&sum));
    }
    Ok(worst)
}

/// The distinct values of a flow up to sign, with each edge assigned to
/// its class.
///
/// Representatives are sign-normalized so that the coordinate of largest
/// magnitude (first such on ties) is positive, and listed in order of
/// first appearance by edge id.  `flipped` marks edges whose value is
/// the negated representative; consumers treat such an edge as if its
/// orientation were reversed.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowValueIndex {
    pub reps: Vec<Vec<f64>>,
    pub assignment: BTreeMap<EdgeId, (usize, bool)>,
}

impl FlowValueIndex {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }
}

/// Cluster the values of a flow into sign-classes.
///
/// Two values land in the same class when they agree up to sign within
/// `clustering` distance.  Distinct classes must be separated by more
/// than `2 * clustering` (again up to sign) or the clustering is
/// rejected as ambiguous.
pub fn index_flow_values(
    f: &VectorFlow,
    clustering: f64,
) -> Result<FlowValueIndex, VectorError> {
    let mut reps: Vec<Vec<f64>> = Vec::new();
    let mut assignment = BTreeMap::new();
    for (&e, v) in &f.values {
        if norm(v) <= 10.0 * clustering {
            return Err(VectorError::ZeroValue(e));
        }
        let mut found = None;
        for (j, r) in reps.iter().enumerate() {
            let d_plus = norm(&v.iter().zip(r).map(|(a, b)| a - b).collect::<Vec<_>>());
            let d_minus = norm(&v.iter().zip(r).map(|(a, b)| a + b).collect::<Vec<_>>());
            if d_plus <= clustering {
                found = Some((j, false));
                break;
            }
            if d_minus <= clustering {
                found = Some((j, true));
                break;
            }
        }
        match found {
            Some((j, flip)) => {
                assignment.insert(e, (j, flip));
            }
            None => {
                let (rep, flip) = canonical_sign(v).ok_or(VectorError::ZeroValue(e))?;
                reps.push(rep);
                assignment.insert(e, (reps.len() - 1, flip));
            }
        }
    }
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            let d_plus = norm(
                &reps[i]
                    .iter()
                    .zip(&reps[j])
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            );
            let d_minus = norm(
                &reps[i]
                    .iter()
                    .zip(&reps[j])
                    .map(|(a, b)| a + b)
                    .collect::<Vec<_>>(),
            );
            if d_plus <= 2.0 * clustering || d_minus <= 2.0 * clustering {
                return Err(VectorError::AmbiguousValueClusters(format!(
                    "classes {i} and {j} are within twice the clustering distance"
                )));
            }
        }
    }
    Ok(FlowValueIndex { reps, assignment })
}

/// Normalize the sign of a vector: the returned copy has its
/// largest-magnitude coordinate positive.  The flag reports whether the
/// input was negated.  Returns `None` for the zero vector.
fn canonical_sign(v: &[f64]) -> Option<(Vec<f64>, bool)> {
    let mut best = 0usize;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] == 0.0 {
        return None;
    }
    if v[best] < 0.0 {
        Some((v.iter().map(|x| -x).collect(), true))
    } else {
        Some((v.to_vec(), false))
    }
}
