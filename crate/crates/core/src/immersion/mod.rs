//! Equiangular immersions of cubic multigraphs on the unit sphere.
//!
//! An *immersion* places every vertex at a point of the unit sphere in
//! `R^3` and realizes every edge as a directed great-circle arc between
//! its endpoint placements.  It is *equiangular* when at each vertex the
//! three departure directions of the incident arcs make pairwise angles
//! of `2π/3`.  Equiangular immersions and 3-dimensional unit-vector
//! flows are two views of the same structure on cubic graphs:
//!
//! * [`immersion_to_flow`] reads off each arc's winding axis, which is a
//!   verified unit-vector flow;
//! * [`flow_to_immersion`] rebuilds vertex placements from cross
//!   products of incident flow values and spans each edge by the arc
//!   around its value's axis.
//!
//! Concrete constructions (pole-to-pole immersions of bipartite graphs,
//! the regular tetrahedron, rotationally symmetric two-band immersions)
//! live in the sibling constructors re-exported below.

mod construct;

pub use construct::{
    k4_immersion, one_point_immersion, quasi_petersen_immersion, two_point_immersion,
};

use std::collections::BTreeMap;

use nalgebra::Vector3;
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Multigraph, Orientation, VertexId};
use crate::util::Tolerances;
use crate::vector::{verify_vector_flow, VectorError, VectorFlow};

/// A third of a full turn: the angle every equiangular vertex exhibits.
pub const EQUIANGLE: f64 = 2.0 * std::f64::consts::PI / 3.0;

/// Below this norm a cross product of flow values is treated as
/// degenerate and vertex placement is refused.
pub const CROSS_DEGENERACY: f64 = 1e-6;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ImmersionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error("arc is degenerate: {0}")]
    DegenerateArc(String),
    #[error("arc start is not orthogonal to its axis (dot = {dot:.3e})")]
    SkewArc { dot: f64 },
    #[error("arc length {0} is outside (0, 2π]")]
    BadArcLength(f64),
    #[error("no placement for vertex {0}")]
    MissingVertex(VertexId),
    #[error("placement for unknown vertex {0}")]
    ExtraVertex(VertexId),
    #[error("no arc for edge {0}")]
    MissingArc(EdgeId),
    #[error("arc for unknown edge {0}")]
    ExtraArc(EdgeId),
    #[error("placement of vertex {vertex} has norm deviating by {deviation:.3e}")]
    NotUnit { vertex: VertexId, deviation: f64 },
    #[error("arc of edge {edge} misses its {which} vertex placement by {distance:.3e}")]
    ArcEndpointMismatch {
        edge: EdgeId,
        which: &'static str,
        distance: f64,
    },
    #[error("departure angles deviate from 2π/3 by {max_deviation:.3e}")]
    NotEquiangular { max_deviation: f64 },
    #[error("incident values at vertex {vertex} have cross product of norm {norm:.3e}")]
    DegenerateCross { vertex: VertexId, norm: f64 },
    #[error("root bracketing failed: {0}")]
    BracketFailure(String),
    #[error("bad construction parameters: {0}")]
    BadParameters(String),
    #[error("{0}")]
    Invalid(String),
}

/// A directed arc of a great circle on the unit sphere.
///
/// The arc starts at `start` and winds counterclockwise around `axis`
/// (the great circle's unit normal) for `length` radians.  Lengths lie
/// in `(0, 2π]`; a full circle is `2π`, never 0, so arcs with coincident
/// endpoints still have well-defined departure directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectedArc {
    /// Unit normal of the arc's great circle; travel is counterclockwise
    /// around it.
    pub axis: [f64; 3],
    /// Unit start point, orthogonal to `axis`.
    pub start: [f64; 3],
    /// Arc length in radians, in `(0, 2π]`.
    pub length: f64,
}

/// Which endpoint of an arc a departure direction is taken at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcEndpoint {
    Start,
    End,
}

pub(crate) fn v3(a: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(a[0], a[1], a[2])
}

pub(crate) fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Rotate `x` counterclockwise around the unit vector `axis` by `angle`.
pub(crate) fn rotate_about(axis: &Vector3<f64>, angle: f64, x: &Vector3<f64>) -> Vector3<f64> {
    let (s, c) = angle.sin_cos();
    x * c + axis.cross(x) * s + axis * (axis.dot(x)) * (1.0 - c)
}

/// Unsigned angle between two directions, robust near 0 and π.
pub(crate) fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let an = a.normalize();
    let bn = b.normalize();
    an.cross(&bn).norm().atan2(an.dot(&bn).clamp(-1.0, 1.0))
}

/// Unit tangent at `from` pointing along the minor great-circle arc
/// toward `toward` (the initial bearing).
pub(crate) fn bearing_tangent(
    from: &Vector3<f64>,
    toward: &Vector3<f64>,
) -> Result<Vector3<f64>, ImmersionError> {
    let t = toward - from * from.dot(toward);
    t.try_normalize(1e-12).ok_or_else(|| {
        ImmersionError::DegenerateArc("bearing undefined: points coincident or antipodal".into())
    })
}

impl DirectedArc {
    /// Validate and build an arc.  `axis` and `start` are renormalized;
    /// they must be nonzero, orthogonal within `tol.eps_unit`, and the
    /// length must lie in `(0, 2π]`.
    pub fn new(
        axis: [f64; 3],
        start: [f64; 3],
        length: f64,
        tol: &Tolerances,
    ) -> Result<Self, ImmersionError> {
        let a = v3(&axis)
            .try_normalize(1e-12)
            .ok_or_else(|| ImmersionError::DegenerateArc("axis has norm ~0".into()))?;
        let s = v3(&start)
            .try_normalize(1e-12)
            .ok_or_else(|| ImmersionError::DegenerateArc("start has norm ~0".into()))?;
        if !length.is_finite() {
            return Err(ImmersionError::DegenerateArc("length is not finite".into()));
        }
        let dot = a.dot(&s);
        if dot.abs() > tol.eps_unit {
            return Err(ImmersionError::SkewArc { dot });
        }
        if length <= 0.0 || length > std::f64::consts::TAU {
            return Err(ImmersionError::BadArcLength(length));
        }
        Ok(DirectedArc {
            axis: arr(&a),
            start: arr(&s),
            length,
        })
    }

    /// The point reached after traveling `t` radians from the start.
    pub fn point_at(&self, t: f64) -> [f64; 3] {
        arr(&rotate_about(&v3(&self.axis), t, &v3(&self.start)))
    }

    /// The arc's end point (start rotated by the full length).
    pub fn end(&self) -> [f64; 3] {
        self.point_at(self.length)
    }

    /// `n >= 2` evenly spaced points from start to end, for plotting.
    pub fn sample(&self, n: usize) -> Vec<[f64; 3]> {
        let n = n.max(2);
        (0..n)
            .map(|k| self.point_at(self.length * k as f64 / (n - 1) as f64))
            .collect()
    }
}

/// The unit direction in which travel leaves an arc endpoint.
///
/// At the start this is the direction of travel, `axis × start`; at the
/// end it is the direction of leaving the arc backward, `−(axis × end)`.
pub fn departure_tangent(arc: &DirectedArc, at: ArcEndpoint) -> Result<[f64; 3], ImmersionError> {
    let axis = v3(&arc.axis);
    let t = match at {
        ArcEndpoint::Start => axis.cross(&v3(&arc.start)),
        ArcEndpoint::End => -axis.cross(&v3(&arc.end())),
    };
    let t = t.try_normalize(1e-9).ok_or_else(|| {
        ImmersionError::DegenerateArc("axis and endpoint are nearly parallel".into())
    })?;
    Ok(arr(&t))
}

/// A placement of a graph on the unit sphere: one point per vertex and
/// one directed arc per edge, read relative to an [`Orientation`]
/// supplied alongside (each arc runs from the placement of the edge's
/// initial vertex to that of its terminal vertex).
#[derive(Clone, Debug, PartialEq)]
pub struct Immersion {
    pub vertices: BTreeMap<VertexId, [f64; 3]>,
    pub arcs: BTreeMap<EdgeId, DirectedArc>,
}

impl Immersion {
    /// Check structural validity against a graph and orientation: every
    /// vertex placed on the sphere (unit within `tol.eps_unit`), every
    /// edge spanned by an arc whose start and end agree with the
    /// placements of its oriented endpoints within `tol.eps_unit`, and
    /// no data for unknown vertices or edges.
    pub fn verify(
        &self,
        g: &Multigraph,
        o: &Orientation,
        tol: &Tolerances,
    ) -> Result<(), ImmersionError> {
        o.matches(g)?;
        for &v in g.vertices() {
            let p = self
                .vertices
                .get(&v)
                .ok_or(ImmersionError::MissingVertex(v))?;
            let deviation = (v3(p).norm() - 1.0).abs();
            if deviation > tol.eps_unit {
                return Err(ImmersionError::NotUnit {
                    vertex: v,
                    deviation,
                });
            }
        }
        for &v in self.vertices.keys() {
            if !g.has_vertex(v) {
                return Err(ImmersionError::ExtraVertex(v));
            }
        }
        for e in g.edges() {
            let arc = self.arcs.get(&e.id).ok_or(ImmersionError::MissingArc(e.id))?;
            let start = v3(&self.vertices[&o.init(e.id)?]);
            let end = v3(&self.vertices[&o.ter(e.id)?]);
            let ds = (v3(&arc.start) - start).norm();
            if ds > tol.eps_unit {
                return Err(ImmersionError::ArcEndpointMismatch {
                    edge: e.id,
                    which: "initial",
                    distance: ds,
                });
            }
            let de = (v3(&arc.end()) - end).norm();
            if de > tol.eps_unit {
                return Err(ImmersionError::ArcEndpointMismatch {
                    edge: e.id,
                    which: "terminal",
                    distance: de,
                });
            }
        }
        for &e in self.arcs.keys() {
            if g.edge(e).is_err() {
                return Err(ImmersionError::ExtraArc(e));
            }
        }
        Ok(())
    }
}

/// Per-vertex departure angles of an immersion of a cubic graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EquiangularReport {
    /// The three pairwise angles between departure directions at each
    /// vertex, for incident ends in edge-id order: (first, second),
    /// (first, third), (second, third).
    pub per_vertex: BTreeMap<VertexId, [f64; 3]>,
    /// Largest deviation of any angle from `2π/3`.
    pub max_deviation: f64,
}

/// The departure direction of edge `e`'s arc as seen from vertex `v`.
///
/// For a loop both ends sit at `v` and the two incident end slots report
/// the start and end tangents respectively.
fn tangent_at(
    g: &Multigraph,
    o: &Orientation,
    imm: &Immersion,
    e: EdgeId,
    v: VertexId,
    slot: crate::graph::EndKind,
) -> Result<Vector3<f64>, ImmersionError> {
    let arc = imm.arcs.get(&e).ok_or(ImmersionError::MissingArc(e))?;
    let endpoint = if g.edge(e)?.is_loop() {
        match slot {
            crate::graph::EndKind::Head => ArcEndpoint::Start,
            crate::graph::EndKind::Tail => ArcEndpoint::End,
        }
    } else if o.init(e)? == v {
        ArcEndpoint::Start
    } else {
        ArcEndpoint::End
    };
    Ok(v3(&departure_tangent(arc, endpoint)?))
}

/// Measure how far an immersion of a cubic graph is from equiangular:
/// at every vertex, the three pairwise angles between the departure
/// directions of the incident arcs, and the largest deviation from
/// `2π/3` overall.
pub fn check_equiangular(
    g: &Multigraph,
    o: &Orientation,
    imm: &Immersion,
) -> Result<EquiangularReport, ImmersionError> {
    g.require_cubic()?;
    o.matches(g)?;
    let mut per_vertex = BTreeMap::new();
    let mut max_deviation = 0.0f64;
    for &v in g.vertices() {
        let slots = g.incident_ends(v);
        debug_assert_eq!(slots.len(), 3);
        let mut ts = Vec::with_capacity(3);
        for (e, kind) in slots {
            ts.push(tangent_at(g, o, imm, e, v, kind)?);
        }
        let angles = [
            angle_between(&ts[0], &ts[1]),
            angle_between(&ts[0], &ts[2]),
            angle_between(&ts[1], &ts[2]),
        ];
        for a in angles {
            max_deviation = max_deviation.max((a - EQUIANGLE).abs());
        }
        per_vertex.insert(v, angles);
    }
    Ok(EquiangularReport {
        per_vertex,
        max_deviation,
    })
}

/// Read a 3-dimensional unit-vector flow off an equiangular immersion:
/// each edge's value is its arc's winding axis.
///
/// The immersion must be structurally valid and equiangular within
/// `tol.eps_angle`; the resulting flow then balances at every vertex
/// because the three departure directions sum to zero and each axis is
/// the placement crossed with its tangent.
pub fn immersion_to_flow(
    g: &Multigraph,
    o: &Orientation,
    imm: &Immersion,
    tol: &Tolerances,
) -> Result<VectorFlow, ImmersionError> {
    imm.verify(g, o, tol)?;
    let report = check_equiangular(g, o, imm)?;
    if report.max_deviation > tol.eps_angle {
        return Err(ImmersionError::NotEquiangular {
            max_deviation: report.max_deviation,
        });
    }
    let values = imm
        .arcs
        .iter()
        .map(|(&e, arc)| (e, v3(&arc.axis).normalize().as_slice().to_vec()))
        .collect();
    Ok(VectorFlow::new(3, values))
}

/// Span the great circle orthogonal to `axis` from one placement to
/// another, winding counterclockwise; coincident placements yield the
/// full circle.
fn arc_about_axis(
    axis: &Vector3<f64>,
    from: &Vector3<f64>,
    to: &Vector3<f64>,
    tol: &Tolerances,
) -> Result<DirectedArc, ImmersionError> {
    let project = |p: &Vector3<f64>| -> Result<Vector3<f64>, ImmersionError> {
        (p - axis * axis.dot(p)).try_normalize(CROSS_DEGENERACY).ok_or_else(|| {
            ImmersionError::DegenerateArc(
                "placement is parallel to the arc axis".into(),
            )
        })
    };
    let x = project(from)?;
    let y = project(to)?;
    let length = if (x - y).norm() <= tol.clustering {
        std::f64::consts::TAU
    } else {
        let a = axis.dot(&x.cross(&y)).atan2(x.dot(&y));
        if a > 0.0 {
            a
        } else {
            a + std::f64::consts::TAU
        }
    };
    DirectedArc::new(arr(axis), arr(&x), length, tol)
}

/// Rebuild an immersion from a verified 3-dimensional unit-vector flow
/// on a cubic graph.
///
/// Each vertex is placed at the normalized cross product of the outward
/// values of its two lowest-id incident edges (scaled by `2/√3`, the
/// exact inverse when the values are at pairwise angle `2π/3`); each
/// edge is spanned by the arc around its value from the placement of its
/// initial vertex to that of its terminal vertex.  Fails when a cross
/// product falls below `1e-6` in norm — the flow is then too degenerate
/// to define placements.
pub fn flow_to_immersion(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
    tol: &Tolerances,
) -> Result<Immersion, ImmersionError> {
    g.require_cubic()?;
    if f.dim != 3 {
        return Err(ImmersionError::Invalid(format!(
            "flow has dimension {}, expected 3",
            f.dim
        )));
    }
    let report = verify_vector_flow(g, o, f, tol)?;
    if !report.passes(tol) {
        return Err(ImmersionError::Invalid(format!(
            "flow does not verify: residual {:.3e}, norm deviation {:.3e}, {} zero edge(s)",
            report.max_kcl_residual,
            report.max_norm_deviation,
            report.zero_edges.len()
        )));
    }

    let as_v3 = |vals: &[f64]| Vector3::new(vals[0], vals[1], vals[2]);
    let mut vertices = BTreeMap::new();
    for &v in g.vertices() {
        let incident = g.incident_edges(v);
        let a = as_v3(&f.outward_value(o, incident[0], v).unwrap());
        let b = as_v3(&f.outward_value(o, incident[1], v).unwrap());
        let cross = a.cross(&b) * (2.0 / 3.0f64.sqrt());
        let norm = cross.norm();
        if norm < CROSS_DEGENERACY {
            return Err(ImmersionError::DegenerateCross { vertex: v, norm });
        }
        vertices.insert(v, arr(&(cross / norm)));
    }

    let mut arcs = BTreeMap::new();
    for e in g.edges() {
        let axis = as_v3(f.value(e.id).unwrap()).normalize();
        let from = v3(&vertices[&o.init(e.id)?]);
        let to = v3(&vertices[&o.ter(e.id)?]);
        arcs.insert(e.id, arc_about_axis(&axis, &from, &to, tol)?);
    }
    Ok(Immersion { vertices, arcs })
}

/// Move one vertex of an immersion to its antipode.
///
/// The placement is negated and every incident arc is re-spanned on the
/// same great circle so it reaches the antipode: lengths change by `π`
/// (extended through the old endpoint when that stays within a full
/// turn, shortened otherwise), and a loop is carried to the antipode
/// unchanged in length.  Applying the flip twice restores the original.
/// Equiangularity is preserved because both departure directions at the
/// antipode are the negations of rotations of the originals by `π`.
pub fn antipodal_flip(
    g: &Multigraph,
    o: &Orientation,
    imm: &Immersion,
    v: VertexId,
) -> Result<Immersion, ImmersionError> {
    if !g.has_vertex(v) {
        return Err(ImmersionError::Graph(GraphError::UnknownVertex(v)));
    }
    o.matches(g)?;
    let mut out = imm.clone();
    let p = out
        .vertices
        .get_mut(&v)
        .ok_or(ImmersionError::MissingVertex(v))?;
    *p = arr(&(-v3(p)));

    let flip_length = |l: f64| -> f64 {
        if l + std::f64::consts::PI <= std::f64::consts::TAU {
            l + std::f64::consts::PI
        } else {
            l - std::f64::consts::PI
        }
    };
    for e in g.incident_edges(v) {
        let arc = out.arcs.get_mut(&e).ok_or(ImmersionError::MissingArc(e))?;
        if g.edge(e)?.is_loop() {
            arc.start = arr(&(-v3(&arc.start)));
        } else if o.init(e)? == v {
            arc.start = arr(&(-v3(&arc.start)));
            arc.length = flip_length(arc.length);
        } else {
            arc.length = flip_length(arc.length);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_bipartite;
    use crate::vector::{k4_tetrahedral_flow, s1_flow_r3};

    const TAU: f64 = std::f64::consts::TAU;
    const PI: f64 = std::f64::consts::PI;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn assert_close(a: &[f64; 3], b: &[f64; 3], tol: f64) {
        let d = (v3(a) - v3(b)).norm();
        assert!(d <= tol, "{a:?} vs {b:?}: distance {d:.3e}");
    }

    #[test]
    fn arc_construction_validates_inputs() {
        let z = [0.0, 0.0, 1.0];
        let x = [1.0, 0.0, 0.0];
        assert!(DirectedArc::new(z, x, PI, &tols()).is_ok());
        // Start not orthogonal to axis.
        assert!(matches!(
            DirectedArc::new(z, [0.0, 0.6, 0.8], PI, &tols()),
            Err(ImmersionError::SkewArc { .. })
        ));
        // Degenerate axis, zero or overlong lengths.
        assert!(DirectedArc::new([0.0; 3], x, PI, &tols()).is_err());
        assert!(matches!(
            DirectedArc::new(z, x, 0.0, &tols()),
            Err(ImmersionError::BadArcLength(_))
        ));
        assert!(DirectedArc::new(z, x, TAU + 0.1, &tols()).is_err());
        // Inputs are renormalized.
        let arc = DirectedArc::new([0.0, 0.0, 2.0], [3.0, 0.0, 0.0], TAU, &tols()).unwrap();
        assert_close(&arc.axis, &z, 1e-15);
        assert_close(&arc.start, &x, 1e-15);
    }

    #[test]
    fn departure_tangents_at_both_ends() {
        let arc = DirectedArc::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], PI, &tols()).unwrap();
        // Travel leaves the start eastward.
        assert_close(
            &departure_tangent(&arc, ArcEndpoint::Start).unwrap(),
            &[0.0, 1.0, 0.0],
            1e-12,
        );
        // End is (-1, 0, 0); leaving it backward along the arc also
        // points eastward.
        assert_close(&arc.end(), &[-1.0, 0.0, 0.0], 1e-12);
        assert_close(
            &departure_tangent(&arc, ArcEndpoint::End).unwrap(),
            &[0.0, 1.0, 0.0],
            1e-12,
        );
        // A full circle departs its common endpoint in opposite
        // directions.
        let full = DirectedArc::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], TAU, &tols()).unwrap();
        assert_close(
            &departure_tangent(&full, ArcEndpoint::Start).unwrap(),
            &[0.0, 1.0, 0.0],
            1e-12,
        );
        assert_close(
            &departure_tangent(&full, ArcEndpoint::End).unwrap(),
            &[0.0, -1.0, 0.0],
            1e-12,
        );
    }

    #[test]
    fn sampling_walks_the_arc() {
        let arc = DirectedArc::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], PI, &tols()).unwrap();
        let pts = arc.sample(3);
        assert_eq!(pts.len(), 3);
        assert_close(&pts[0], &[1.0, 0.0, 0.0], 1e-12);
        assert_close(&pts[1], &[0.0, 1.0, 0.0], 1e-12);
        assert_close(&pts[2], &[-1.0, 0.0, 0.0], 1e-12);
    }

    #[test]
    fn tetrahedral_flow_round_trips_through_an_immersion() {
        let (g, o, f) = k4_tetrahedral_flow();
        let imm = flow_to_immersion(&g, &o, &f, &tols()).unwrap();
        imm.verify(&g, &o, &tols()).unwrap();
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(
            report.max_deviation <= 1e-8,
            "deviation {:.3e}",
            report.max_deviation
        );
        let back = immersion_to_flow(&g, &o, &imm, &tols()).unwrap();
        for e in g.edges() {
            let orig = v3(f.value(e.id).unwrap().try_into().unwrap());
            let rt = v3(back.value(e.id).unwrap().try_into().unwrap());
            assert!(
                (orig - rt).norm() <= 1e-9,
                "edge {}: {orig:?} vs {rt:?}",
                e.id
            );
        }
    }

    #[test]
    fn planar_bipartite_flow_produces_a_two_point_immersion() {
        // A flow with all values in the z = 0 plane places every vertex
        // at one of the poles.
        let g = complete_bipartite(3, 3).unwrap();
        let (o, f2) = s1_flow_r3(&g).unwrap();
        let f = f2.embed_in_dimension(3).unwrap();
        let imm = flow_to_immersion(&g, &o, &f, &tols()).unwrap();
        for p in imm.vertices.values() {
            assert!(p[0].abs() <= 1e-12 && p[1].abs() <= 1e-12);
            assert!((p[2].abs() - 1.0).abs() <= 1e-12);
        }
        imm.verify(&g, &o, &tols()).unwrap();
        // Arcs run along meridians: half turns between distinct poles,
        // full circles between coincident placements (either pole is a
        // valid placement at every vertex, so the reconstruction may
        // put adjacent vertices on the same one).
        for e in g.edges() {
            let arc = &imm.arcs[&e.id];
            let same_pole = (imm.vertices[&e.u][2] - imm.vertices[&e.v][2]).abs() <= 1e-12;
            let expect = if same_pole { TAU } else { PI };
            assert!((arc.length - expect).abs() <= 1e-9);
        }
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(report.max_deviation <= 1e-9);
    }

    #[test]
    fn extraction_requires_equiangularity() {
        let (g, o, f) = k4_tetrahedral_flow();
        let mut imm = flow_to_immersion(&g, &o, &f, &tols()).unwrap();
        // Tilt one arc's axis: the departure angles at its endpoints
        // move away from 2π/3.
        let arc = imm.arcs.get_mut(&EdgeId(0)).unwrap();
        let tilted = (v3(&arc.axis) + Vector3::new(0.02, 0.0, 0.0)).normalize();
        let start = v3(&arc.start);
        let fixed_start = (start - tilted * tilted.dot(&start)).normalize();
        *arc = DirectedArc::new(arr(&tilted), arr(&fixed_start), arc.length, &tols()).unwrap();
        let report_err = immersion_to_flow(&g, &o, &imm, &tols());
        assert!(report_err.is_err());
    }

    #[test]
    fn flip_is_an_involution_and_preserves_angles() {
        let (g, o, f) = k4_tetrahedral_flow();
        let imm = flow_to_immersion(&g, &o, &f, &tols()).unwrap();
        let before = check_equiangular(&g, &o, &imm).unwrap().max_deviation;
        let flipped = antipodal_flip(&g, &o, &imm, VertexId(2)).unwrap();
        let after = check_equiangular(&g, &o, &flipped).unwrap().max_deviation;
        assert!(after <= before + 1e-12, "flip broke angles: {after:.3e}");
        assert_close(
            &flipped.vertices[&VertexId(2)],
            &arr(&-v3(&imm.vertices[&VertexId(2)])),
            1e-15,
        );
        // The flipped arcs still span their (new) endpoints.
        flipped.verify(&g, &o, &tols()).unwrap();
        let twice = antipodal_flip(&g, &o, &flipped, VertexId(2)).unwrap();
        for (e, arc) in &imm.arcs {
            let rt = &twice.arcs[e];
            assert_close(&rt.start, &arc.start, 1e-12);
            assert_close(&rt.axis, &arc.axis, 1e-12);
            assert!((rt.length - arc.length).abs() <= 1e-12);
        }
    }

    #[test]
    fn verify_spots_mismatched_arcs() {
        let (g, o, f) = k4_tetrahedral_flow();
        let mut imm = flow_to_immersion(&g, &o, &f, &tols()).unwrap();
        let v = *imm.vertices.keys().next().unwrap();
        let moved = (v3(&imm.vertices[&v]) + Vector3::new(0.001, 0.0, 0.0)).normalize();
        imm.vertices.insert(v, arr(&moved));
        assert!(matches!(
            imm.verify(&g, &o, &tols()),
            Err(ImmersionError::ArcEndpointMismatch { .. })
        ));
    }

    #[test]
    fn coincident_endpoints_span_a_full_circle() {
        let axis = Vector3::new(0.0, 0.0, 1.0);
        let p = Vector3::new(1.0, 0.0, 0.0);
        let arc = arc_about_axis(&axis, &p, &p, &tols()).unwrap();
        assert_eq!(arc.length, TAU);
        // Antipodal endpoints give the counterclockwise half turn.
        let q = -p;
        let half = arc_about_axis(&axis, &p, &q, &tols()).unwrap();
        assert!((half.length - PI).abs() <= 1e-12);
    }
}
