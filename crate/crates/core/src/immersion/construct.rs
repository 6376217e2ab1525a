//! Concrete equiangular immersions: pole-to-pole placements of
//! bipartite cubic graphs, the regular tetrahedron, and two-band
//! rotationally symmetric placements of quasi-Petersen graphs.

use std::collections::BTreeMap;

use nalgebra::Vector3;

use crate::graph::{
    quasi_petersen, require_bipartition, three_edge_coloring_bipartite_cubic, Multigraph,
    Orientation, VertexId,
};
use crate::util::Tolerances;

use super::{
    angle_between, antipodal_flip, arr, bearing_tangent, DirectedArc, Immersion,
    ImmersionError, EQUIANGLE,
};

const PI: f64 = std::f64::consts::PI;
const TAU: f64 = std::f64::consts::TAU;

/// Minor great-circle arc from one point to another (both unit, neither
/// coincident nor antipodal).
fn minor_arc(
    from: &Vector3<f64>,
    to: &Vector3<f64>,
    tol: &Tolerances,
) -> Result<DirectedArc, ImmersionError> {
    let cross = from.cross(to);
    let n = cross.norm();
    if n < 1e-9 {
        return Err(ImmersionError::DegenerateArc(
            "minor arc undefined: endpoints coincident or antipodal".into(),
        ));
    }
    let axis = cross / n;
    let length = n.atan2(from.dot(to).clamp(-1.0, 1.0));
    DirectedArc::new(arr(&axis), arr(from), length, tol)
}

/// Find a sign change of `f` by bisection.  The endpoint values must
/// have strictly opposite signs; the bracket is narrowed to `1e-12`
/// (at most 200 halvings).
fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64, ImmersionError> {
    let flo = f(lo);
    let fhi = f(hi);
    if !(flo * fhi < 0.0) {
        return Err(ImmersionError::BracketFailure(format!(
            "no sign change on [{lo}, {hi}]: f = {flo:.3e}, {fhi:.3e}"
        )));
    }
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Point of the unit sphere at colatitude `theta` (angle from the north
/// pole) and longitude `lambda`.
fn sphere_point(theta: f64, lambda: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sl, cl) = lambda.sin_cos();
    Vector3::new(st * cl, st * sl, ct)
}

/// Immerse a loop-free bipartite cubic graph with one vertex class at
/// the north pole and the other at the south pole, each edge running
/// pole to pole along one of three meridians `2π/3` apart, chosen by a
/// proper 3-edge-coloring.  Returns the orientation (every edge directed
/// north to south) together with the immersion.
pub fn two_point_immersion(
    g: &Multigraph,
) -> Result<(Orientation, Immersion), ImmersionError> {
    let classes = three_edge_coloring_bipartite_cubic(g)?;
    let (left, _right) = require_bipartition(g)?;
    let left: std::collections::BTreeSet<VertexId> = left.into_iter().collect();
    let north = [0.0, 0.0, 1.0];
    let south = [0.0, 0.0, -1.0];

    let mut vertices = BTreeMap::new();
    for &v in g.vertices() {
        vertices.insert(v, if left.contains(&v) { north } else { south });
    }

    let mut entries = Vec::new();
    for e in g.edges() {
        let (init, ter) = if left.contains(&e.u) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        entries.push((e.id, init, ter));
    }
    let o = Orientation::build(g, entries)?;

    let tol = Tolerances::default();
    let mut arcs = BTreeMap::new();
    for (c, class) in classes.iter().enumerate() {
        let lambda = TAU * c as f64 / 3.0;
        let axis = [-lambda.sin(), lambda.cos(), 0.0];
        for &e in class {
            arcs.insert(e, DirectedArc::new(axis, north, PI, &tol)?);
        }
    }
    Ok((o, Immersion { vertices, arcs }))
}

/// Immerse a loop-free bipartite cubic graph with *every* vertex at the
/// north pole: the two-point immersion with each south-pole vertex
/// carried to its antipode, turning every meridian into a full circle.
pub fn one_point_immersion(
    g: &Multigraph,
) -> Result<(Orientation, Immersion), ImmersionError> {
    let (o, mut imm) = two_point_immersion(g)?;
    let south: Vec<VertexId> = imm
        .vertices
        .iter()
        .filter(|(_, p)| p[2] < 0.0)
        .map(|(&v, _)| v)
        .collect();
    for v in south {
        imm = antipodal_flip(g, &o, &imm, v)?;
    }
    Ok((o, imm))
}

/// Departure-angle defect at an off-pole vertex of the tetrahedral
/// placement: one apex vertex at the north pole, three at colatitude
/// `theta` spaced `2π/3` in longitude, all edges minor arcs.  Zero when
/// the two base-cycle departures at a base vertex make angle `2π/3`.
fn k4_defect(theta: f64) -> f64 {
    let v1 = sphere_point(theta, 0.0);
    let v2 = sphere_point(theta, TAU / 3.0);
    let v3_ = sphere_point(theta, -TAU / 3.0);
    let t12 = bearing_tangent(&v1, &v2).expect("distinct placements");
    let t13 = bearing_tangent(&v1, &v3_).expect("distinct placements");
    angle_between(&t12, &t13) - EQUIANGLE
}

/// The equiangular immersion of the complete graph on four vertices:
/// the regular spherical tetrahedron, with one vertex at the north pole
/// and the base colatitude found by bisection (it lands on
/// `arccos(-1/3)`).  Returns the graph, its canonical orientation, and
/// the immersion.
pub fn k4_immersion() -> Result<(Multigraph, Orientation, Immersion), ImmersionError> {
    // Below the equator the two base departures close from a straight
    // angle down past 2π/3; above it they reopen toward the apex
    // instead, so the sign change lives in (π/2, π).
    let theta = bisect(k4_defect, PI / 2.0, PI - 0.1)?;

    let g = crate::graph::k4();
    let o = Orientation::canonical(&g);
    let pts = [
        Vector3::new(0.0, 0.0, 1.0),
        sphere_point(theta, 0.0),
        sphere_point(theta, TAU / 3.0),
        sphere_point(theta, -TAU / 3.0),
    ];
    let mut vertices = BTreeMap::new();
    for (i, p) in pts.iter().enumerate() {
        vertices.insert(VertexId(i as u32), arr(p));
    }
    let tol = Tolerances::default();
    let mut arcs = BTreeMap::new();
    for e in g.edges() {
        let arc = minor_arc(&pts[e.u.0 as usize], &pts[e.v.0 as usize], &tol)?;
        arcs.insert(e.id, arc);
    }
    Ok((g, o, Immersion { vertices, arcs }))
}

/// Departure-angle defect of a rotationally symmetric band: `p` points
/// at colatitude `theta`, each joined to the points `step` positions
/// away on either side by minor arcs.  Zero when the two departures make
/// angle `2π/3` (the third incident arc runs along the meridian and then
/// bisects the remaining sector automatically).
fn band_defect(theta: f64, step: u32, p: u32) -> f64 {
    let phi = TAU * step as f64 / p as f64;
    let v0 = sphere_point(theta, 0.0);
    let plus = sphere_point(theta, phi);
    let minus = sphere_point(theta, -phi);
    let tp = bearing_tangent(&v0, &plus).expect("distinct placements");
    let tm = bearing_tangent(&v0, &minus).expect("distinct placements");
    angle_between(&tp, &tm) - EQUIANGLE
}

/// Solve for the band colatitude in `(0, π/2)` at which the two cycle
/// departures of step `step` make angle `2π/3`.
fn band_colatitude(step: u32, p: u32) -> Result<f64, ImmersionError> {
    // Toward the pole the band flattens to a planar star whose cycle
    // departures make angle π(1 − 2·step/p) < 2π/3 exactly when
    // 6·step > p; at the equator the two departures are opposite.  Keep
    // shrinking the lower end until the defect is negative there.
    let mut lo = 0.1;
    while band_defect(lo, step, p) >= 0.0 {
        lo /= 2.0;
        if lo < 1e-6 {
            return Err(ImmersionError::BracketFailure(format!(
                "band defect has no negative values near the pole for step {step} of {p}"
            )));
        }
    }
    bisect(|t| band_defect(t, step, p), lo, PI / 2.0)
}

/// Equiangular immersion of the quasi-Petersen graph `QP(a, b, p)`: the
/// `a`-step cycle on a northern band, the `b`-step cycle mirrored on the
/// southern band, and the perfect matching along meridians.  Requires
/// the strict parameter window `p/6 < a, b < p/2`; the band colatitudes
/// come from bisection and the matching arcs bisect each remaining
/// sector by symmetry.  Returns the graph (vertices `0..p` on the north
/// band, `p..2p` on the south band), its canonical orientation, and the
/// immersion.
pub fn quasi_petersen_immersion(
    a: u32,
    b: u32,
    p: u32,
) -> Result<(Multigraph, Orientation, Immersion), ImmersionError> {
    for (name, s) in [("a", a), ("b", b)] {
        if !(6 * s > p && 2 * s < p) {
            return Err(ImmersionError::BadParameters(format!(
                "step {name} = {s} is outside the open window (p/6, p/2) for p = {p}"
            )));
        }
    }
    let g = quasi_petersen(a, b, p).map_err(|e| ImmersionError::BadParameters(e.to_string()))?;
    let o = Orientation::canonical(&g);

    let theta_v = band_colatitude(a, p)?;
    let theta_w = band_colatitude(b, p)?;

    let mut vertices = BTreeMap::new();
    let mut pts = Vec::with_capacity(2 * p as usize);
    for i in 0..p {
        let lambda = TAU * i as f64 / p as f64;
        pts.push(sphere_point(theta_v, lambda));
    }
    for i in 0..p {
        let lambda = TAU * i as f64 / p as f64;
        pts.push(sphere_point(PI - theta_w, lambda));
    }
    for (i, pt) in pts.iter().enumerate() {
        vertices.insert(VertexId(i as u32), arr(pt));
    }
    // The two bands sit strictly on opposite sides of the equator, so
    // all 2p placements are pairwise distinct; check anyway.
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() <= 1e-9 {
                return Err(ImmersionError::Invalid(format!(
                    "placements of vertices {i} and {j} coincide"
                )));
            }
        }
    }

    let tol = Tolerances::default();
    let mut arcs = BTreeMap::new();
    for e in g.edges() {
        let arc = minor_arc(&pts[e.u.0 as usize], &pts[e.v.0 as usize], &tol)?;
        arcs.insert(e.id, arc);
    }
    Ok((g, o, Immersion { vertices, arcs }))
}

#[cfg(test)]
mod tests {
    use super::super::{check_equiangular, immersion_to_flow, v3};
    use super::*;
    use crate::graph::{are_isomorphic, complete_bipartite, cube_graph, petersen};
    use crate::vector::verify_vector_flow;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn two_point_immersion_of_k33_is_equiangular() {
        let g = complete_bipartite(3, 3).unwrap();
        let (o, imm) = two_point_immersion(&g).unwrap();
        imm.verify(&g, &o, &tols()).unwrap();
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(
            report.max_deviation <= 1e-12,
            "deviation {:.3e}",
            report.max_deviation
        );
        // Exactly two distinct placements, the poles.
        for p in imm.vertices.values() {
            assert!(p[0] == 0.0 && p[1] == 0.0 && p[2].abs() == 1.0);
        }
    }

    #[test]
    fn two_point_immersion_of_the_cube_yields_a_planar_flow() {
        let g = cube_graph();
        let (o, imm) = two_point_immersion(&g).unwrap();
        let f = immersion_to_flow(&g, &o, &imm, &tols()).unwrap();
        let report = verify_vector_flow(&g, &o, &f, &tols()).unwrap();
        assert!(report.passes(&tols()));
        // Every value is orthogonal to the pole direction.
        for e in g.edges() {
            assert!(f.value(e.id).unwrap()[2].abs() <= 1e-9);
        }
    }

    #[test]
    fn two_point_immersion_rejects_nonbipartite_input() {
        assert!(two_point_immersion(&petersen()).is_err());
    }

    #[test]
    fn one_point_immersion_stacks_everything_on_the_north_pole() {
        let g = complete_bipartite(3, 3).unwrap();
        let (o, imm) = one_point_immersion(&g).unwrap();
        imm.verify(&g, &o, &tols()).unwrap();
        for p in imm.vertices.values() {
            assert!((v3(p) - Vector3::new(0.0, 0.0, 1.0)).norm() <= 1e-12);
        }
        for arc in imm.arcs.values() {
            assert!((arc.length - TAU).abs() <= 1e-12);
        }
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(report.max_deviation <= 1e-12);
    }

    #[test]
    fn tetrahedron_base_lands_on_the_regular_colatitude() {
        let (g, o, imm) = k4_immersion().unwrap();
        imm.verify(&g, &o, &tols()).unwrap();
        // cos θ* = −1/3 for the regular tetrahedron.
        let theta = imm.vertices[&VertexId(1)][2].acos();
        assert!(
            (theta - (-1.0f64 / 3.0).acos()).abs() <= 1e-9,
            "theta = {theta}"
        );
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(report.max_deviation <= 1e-9);
        let f = immersion_to_flow(&g, &o, &imm, &tols()).unwrap();
        assert!(verify_vector_flow(&g, &o, &f, &tols()).unwrap().passes(&tols()));
    }

    #[test]
    fn petersen_band_immersion_is_equiangular() {
        let (g, o, imm) = quasi_petersen_immersion(1, 2, 5).unwrap();
        assert!(are_isomorphic(&g, &petersen()));
        imm.verify(&g, &o, &tols()).unwrap();
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(
            report.max_deviation <= 1e-9,
            "deviation {:.3e}",
            report.max_deviation
        );
        let f = immersion_to_flow(&g, &o, &imm, &tols()).unwrap();
        let vr = verify_vector_flow(&g, &o, &f, &tols()).unwrap();
        assert!(vr.max_kcl_residual <= 1e-9 && vr.max_norm_deviation <= 1e-9);
    }

    #[test]
    fn wider_band_immersion_is_equiangular() {
        let (g, o, imm) = quasi_petersen_immersion(2, 3, 7).unwrap();
        imm.verify(&g, &o, &tols()).unwrap();
        let report = check_equiangular(&g, &o, &imm).unwrap();
        assert!(report.max_deviation <= 1e-9);
        // All 14 placements distinct.
        let pts: Vec<_> = imm.vertices.values().collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert!((v3(pts[i]) - v3(pts[j])).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn band_immersion_rejects_parameters_outside_the_window() {
        // step 1 of 6 sits exactly on the closed bound p/6: too flat.
        assert!(matches!(
            quasi_petersen_immersion(1, 1, 6),
            Err(ImmersionError::BadParameters(_))
        ));
        // step 3 of 6 sits on p/2.
        assert!(matches!(
            quasi_petersen_immersion(2, 3, 6),
            Err(ImmersionError::BadParameters(_))
        ));
    }

    #[test]
    fn bisection_requires_a_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_err());
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((root - 2.0f64.sqrt()).abs() <= 1e-11);
    }
}
