//! Combining and transporting unit-vector flows.
//!
//! * [`compose_decomposition`] interleaves flows on the parts of an edge
//!   decomposition into one flow of higher dimension.
//! * [`injection_flow_transfer`] and [`blow_up_flow_transfer`] carry a
//!   3-dimensional flow across the corresponding graph surgeries, using
//!   a rotation that aligns the flow values at the two surgery sites.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};

use crate::graph::{
    blow_up_triangle, complete_graph, inject, BlowUpInfo, EdgeId, InjectInfo, Multigraph,
    Orientation, VertexId,
};
use crate::util::Tolerances;

use super::{check_coverage, verify_vector_flow, VectorError, VectorFlow};

/// Numerical slack allowed when checking that surgery sites carry
/// compatible value triples.  Inputs are flows that verify to ~1e-9, so
/// this is generous without masking real mismatches.
const SITE_TOL: f64 = 1e-6;

/// One part of an edge decomposition: a subgraph of the host graph
/// (sharing vertex and edge ids) together with an oriented flow on it.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPart {
    pub graph: Multigraph,
    pub orientation: Orientation,
    pub flow: VectorFlow,
}

/// Compose flows on the parts of a decomposition into one flow on the
/// host graph.
///
/// Every edge of `g` must lie in exactly `l >= 1` of the parts, and each
/// part's flow must verify on its subgraph.  The composite value of an
/// edge is the concatenation over all parts of that part's value scaled
/// by `1/sqrt(l)` (a zero block where the part misses the edge), negated
/// where the part orients the edge against `o`.  The composite is then a
/// unit flow of dimension `sum of part dimensions`.
pub fn compose_decomposition(
    g: &Multigraph,
    o: &Orientation,
    parts: &[FlowPart],
    l: usize,
) -> Result<VectorFlow, VectorError> {
    if o.matches(g).is_err() {
        return Err(VectorError::OrientationMismatch);
    }
    if l == 0 {
        return Err(VectorError::BadDecomposition(
            "coverage multiplicity l must be at least 1".into(),
        ));
    }
    let tol = Tolerances::default();
    for (i, p) in parts.iter().enumerate() {
        check_coverage(&p.graph, &p.orientation, &p.flow)
            .map_err(|e| VectorError::BadDecomposition(format!("part {i}: {e}")))?;
        for &v in p.graph.vertices() {
            if !g.has_vertex(v) {
                return Err(VectorError::BadDecomposition(format!(
                    "part {i} has vertex {v} not in the host graph"
                )));
            }
        }
        for e in p.graph.edges() {
            let host = g.edge(e.id).map_err(|_| {
                VectorError::BadDecomposition(format!(
                    "part {i} has edge {} not in the host graph",
                    e.id
                ))
            })?;
            let same = (host.u == e.u && host.v == e.v) || (host.u == e.v && host.v == e.u);
            if !same {
                return Err(VectorError::BadDecomposition(format!(
                    "part {i} disagrees with the host graph on the endpoints of edge {}",
                    e.id
                )));
            }
        }
        let rep = verify_vector_flow(&p.graph, &p.orientation, &p.flow, &tol)?;
        if !rep.passes(&tol) {
            return Err(VectorError::BadDecomposition(format!(
                "unverified part {i} (kcl residual {:.3e}, norm deviation {:.3e})",
                rep.max_kcl_residual, rep.max_norm_deviation
            )));
        }
    }
    let mut count: BTreeMap<EdgeId, usize> =
        g.edges().iter().map(|e| (e.id, 0usize)).collect();
    for p in parts {
        for e in p.graph.edges() {
            *count.get_mut(&e.id).unwrap() += 1;
        }
    }
    if let Some((&e, &c)) = count.iter().find(|&(_, &c)| c != l) {
        return Err(VectorError::BadDecomposition(format!(
            "coverage count {c} != {l} on edge {e}"
        )));
    }
    let total_dim: usize = parts.iter().map(|p| p.flow.dim).sum();
    let scale = 1.0 / (l as f64).sqrt();
    let mut values: BTreeMap<EdgeId, Vec<f64>> = BTreeMap::new();
    for e in g.edges() {
        let mut out = vec![0.0; total_dim];
        let mut offset = 0;
        for p in parts {
            if p.graph.edge(e.id).is_ok() {
                let sign = if p.orientation.init(e.id).unwrap() == o.init(e.id).unwrap() {
                    1.0
                } else {
                    -1.0
                };
                for (k, &x) in p.flow.values[&e.id].iter().enumerate() {
                    out[offset + k] = sign * scale * x;
                }
            }
            offset += p.flow.dim;
        }
        values.insert(e.id, out);
    }
    Ok(VectorFlow::new(total_dim, values))
}

fn to_v3(v: &[f64]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

/// A flow being transferred must itself be a verified unit flow; surgery
/// only preserves conservation it was given.
fn require_verified_input(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
    which: &str,
) -> Result<(), VectorError> {
    let tol = Tolerances::default();
    let rep = verify_vector_flow(g, o, f, &tol)?;
    if !rep.passes(&tol) {
        return Err(VectorError::Invalid(format!(
            "input flow on {which} does not verify (kcl residual {:.3e}, norm deviation {:.3e}, {} zero edges)",
            rep.max_kcl_residual,
            rep.max_norm_deviation,
            rep.zero_edges.len()
        )));
    }
    Ok(())
}

/// Transferred flows must conserve within a small multiple of the input
/// tolerance; a failure here means the site alignment went wrong.
fn require_verified_output(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
) -> Result<(), VectorError> {
    let tol = Tolerances::default();
    let rep = verify_vector_flow(g, o, f, &tol)?;
    if rep.max_kcl_residual > 10.0 * tol.eps_kcl || !rep.zero_edges.is_empty() {
        return Err(VectorError::Invalid(format!(
            "transferred flow failed verification (kcl residual {:.3e})",
            rep.max_kcl_residual
        )));
    }
    Ok(())
}

/// The rotation sending each `b[i]` to `-a[i]`.
///
/// Exists whenever both triples are unit vectors summing to zero (then
/// each is a planar triple at mutual angles of 120 degrees).  Built from
/// the orthonormal frames spanned by the first vector and the plane
/// normal on each side; the result is validated on all three pairs.
fn rotation_negating_triples(
    a: &[Vector3<f64>; 3],
    b: &[Vector3<f64>; 3],
) -> Result<Matrix3<f64>, VectorError> {
    let t1 = -a[0];
    let t2 = -a[1];
    let n_a = t1.cross(&t2);
    let n_b = b[0].cross(&b[1]);
    if n_a.norm() < 1e-9 || n_b.norm() < 1e-9 {
        return Err(VectorError::DegenerateSite(
            "site values are collinear; no plane normal".into(),
        ));
    }
    let n_a = n_a.normalize();
    let n_b = n_b.normalize();
    let u1 = t1.normalize();
    let w1 = b[0].normalize();
    let frame_a = Matrix3::from_columns(&[u1, n_a.cross(&u1), n_a]);
    let frame_b = Matrix3::from_columns(&[w1, n_b.cross(&w1), n_b]);
    let rot = frame_a * frame_b.transpose();
    for i in 0..3 {
        if (rot * b[i] + a[i]).norm() > SITE_TOL {
            return Err(VectorError::DegenerateSite(format!(
                "site value triples are not rotation-compatible (pair {i})"
            )));
        }
    }
    Ok(rot)
}

fn site_triple(
    f: &VectorFlow,
    o: &Orientation,
    edges: [EdgeId; 3],
    at: VertexId,
) -> Result<[Vector3<f64>; 3], VectorError> {
    let mut out = [Vector3::zeros(); 3];
    for (i, e) in edges.into_iter().enumerate() {
        let v = f
            .outward_value(o, e, at)
            .ok_or(VectorError::MissingEdge(e))?;
        out[i] = to_v3(&v);
    }
    let sum: Vector3<f64> = out[0] + out[1] + out[2];
    if sum.norm() > SITE_TOL {
        return Err(VectorError::DegenerateSite(format!(
            "flow is not conserved at vertex {at} (residual {:.3e})",
            sum.norm()
        )));
    }
    for (i, v) in out.iter().enumerate() {
        if (v.norm() - 1.0).abs() > SITE_TOL {
            return Err(VectorError::DegenerateSite(format!(
                "site value {i} at vertex {at} is not a unit vector"
            )));
        }
    }
    Ok(out)
}

/// Inject `h` into `g` and transport their 3-dimensional unit flows onto
/// the result.
///
/// Both surgery sites must have degree 3.  The flow of `h` is rotated so
/// that its outward value triple at `w` lands on the negated outward
/// triple of `g` at `v` (pairwise, in pairing order); each bridge then
/// carries, away from its `g`-side endpoint, exactly the value the
/// removed `g` edge carried into that endpoint, so conservation survives
/// at every vertex.
#[allow(clippy::too_many_arguments)]
pub fn injection_flow_transfer(
    g: &Multigraph,
    og: &Orientation,
    fg: &VectorFlow,
    v: VertexId,
    h: &Multigraph,
    oh: &Orientation,
    fh: &VectorFlow,
    w: VertexId,
    pairing: Option<&[(EdgeId, EdgeId)]>,
) -> Result<(Multigraph, InjectInfo, Orientation, VectorFlow), VectorError> {
    if fg.dim != 3 || fh.dim != 3 {
        return Err(VectorError::Invalid(
            "flow transfer requires 3-dimensional flows".into(),
        ));
    }
    check_coverage(g, og, fg)?;
    check_coverage(h, oh, fh)?;
    g.require_cubic().map_err(VectorError::Graph)?;
    h.require_cubic().map_err(VectorError::Graph)?;
    require_verified_input(g, og, fg, "the host graph")?;
    require_verified_input(h, oh, fh, "the injected graph")?;
    let (gh, info) = inject(h, w, g, v, pairing)?;
    let g_sources = [
        info.bridges[0].g_source,
        info.bridges[1].g_source,
        info.bridges[2].g_source,
    ];
    let h_sources = [
        info.bridges[0].h_source,
        info.bridges[1].h_source,
        info.bridges[2].h_source,
    ];
    let alpha = site_triple(fg, og, g_sources, v)?;
    let beta = site_triple(fh, oh, h_sources, w)?;
    let rot = rotation_negating_triples(&alpha, &beta)?;

    let inverse_edge_map: BTreeMap<EdgeId, EdgeId> =
        info.edge_map.iter().map(|(&old, &new)| (new, old)).collect();
    let bridge_of: BTreeMap<EdgeId, usize> = info
        .bridges
        .iter()
        .enumerate()
        .map(|(i, b)| (b.id, i))
        .collect();

    let mut dir = Vec::new();
    let mut values: BTreeMap<EdgeId, Vec<f64>> = BTreeMap::new();
    for e in gh.edges() {
        if let Some(&i) = bridge_of.get(&e.id) {
            let b = &info.bridges[i];
            dir.push((e.id, b.g_end, b.h_end));
            values.insert(e.id, (-alpha[i]).iter().copied().collect());
        } else if let Some(&old) = inverse_edge_map.get(&e.id) {
            let init = info.vertex_map[&oh.init(old).unwrap()];
            let ter = info.vertex_map[&oh.ter(old).unwrap()];
            dir.push((e.id, init, ter));
            let rotated = rot * to_v3(&fh.values[&old]);
            values.insert(e.id, rotated.iter().copied().collect());
        } else {
            dir.push((e.id, og.init(e.id).unwrap(), og.ter(e.id).unwrap()));
            values.insert(e.id, fg.values[&e.id].clone());
        }
    }
    let o = Orientation::build(&gh, dir).map_err(VectorError::Graph)?;
    let f = VectorFlow::new(3, values);
    require_verified_output(&gh, &o, &f)?;
    Ok((gh, info, o, f))
}

/// The complete graph on 4 vertices with its regular-tetrahedron flow:
/// the value of edge `(i, j)`, oriented `i -> j`, is the unit vector
/// along `p_i x p_j` for the four tetrahedron corners `p_i`.  At each
/// corner the three outward values sum to `p x (-p) = 0`, so the flow is
/// conserved up to rounding.
pub fn k4_tetrahedral_flow() -> (Multigraph, Orientation, VectorFlow) {
    let g = complete_graph(4).expect("K4 is constructible");
    let o = Orientation::canonical(&g);
    let s = 1.0 / 3.0f64.sqrt();
    let p = [
        Vector3::new(s, s, s),
        Vector3::new(s, -s, -s),
        Vector3::new(-s, s, -s),
        Vector3::new(-s, -s, s),
    ];
    let mut values = BTreeMap::new();
    for e in g.edges() {
        let axis = p[e.u.0 as usize].cross(&p[e.v.0 as usize]).normalize();
        values.insert(e.id, axis.iter().copied().collect());
    }
    (g, o, VectorFlow::new(3, values))
}

/// Replace vertex `v` (degree 3, no loop) by a triangle and extend the
/// flow over the three new edges.
///
/// The adopted edges keep their values, so conservation away from the
/// site is untouched; the triangle values are those of the tetrahedron
/// flow of `K4`, rotated so the model's outward triple at its apex lands
/// on the negated outward triple of `f` at `v`.
pub fn blow_up_flow_transfer(
    g: &Multigraph,
    og: &Orientation,
    fg: &VectorFlow,
    v: VertexId,
) -> Result<(Multigraph, BlowUpInfo, Orientation, VectorFlow), VectorError> {
    if fg.dim != 3 {
        return Err(VectorError::Invalid(
            "flow transfer requires 3-dimensional flows".into(),
        ));
    }
    check_coverage(g, og, fg)?;
    let (g2, info) = blow_up_triangle(g, v)?;
    require_verified_input(g, og, fg, "the host graph")?;
    let adopted_edges = [info.adopted[0].0, info.adopted[1].0, info.adopted[2].0];
    let alpha = site_triple(fg, og, adopted_edges, v)?;
    let (_k4g, k4o, k4f) = k4_tetrahedral_flow();
    // Outward values of the model flow at its apex, vertex 0 of K4,
    // whose incident edges are 0, 1, 2 in id order.
    let beta = site_triple(&k4f, &k4o, [EdgeId(0), EdgeId(1), EdgeId(2)], VertexId(0))?;
    let rot = rotation_negating_triples(&alpha, &beta)?;

    // The triangle edges correspond to K4's edges 3 = (1,2), 4 = (1,3),
    // 5 = (2,3) on the model side, oriented low index -> high index.
    let nv = info.new_vertices;
    let triangle_dirs = [(nv[0], nv[1]), (nv[0], nv[2]), (nv[1], nv[2])];
    let model_edges = [EdgeId(3), EdgeId(4), EdgeId(5)];

    let mut dir = Vec::new();
    let mut values: BTreeMap<EdgeId, Vec<f64>> = BTreeMap::new();
    let adopted_by: BTreeMap<EdgeId, VertexId> = info.adopted.iter().copied().collect();
    for e in g2.edges() {
        if let Some(k) = info.triangle_edges.iter().position(|&t| t == e.id) {
            dir.push((e.id, triangle_dirs[k].0, triangle_dirs[k].1));
            let rotated = rot * to_v3(&k4f.values[&model_edges[k]]);
            values.insert(e.id, rotated.iter().copied().collect());
        } else {
            let mut init = og.init(e.id).unwrap();
            let mut ter = og.ter(e.id).unwrap();
            if let Some(&x) = adopted_by.get(&e.id) {
                if init == v {
                    init = x;
                }
                if ter == v {
                    ter = x;
                }
            }
            dir.push((e.id, init, ter));
            values.insert(e.id, fg.values[&e.id].clone());
        }
    }
    let o2 = Orientation::build(&g2, dir).map_err(VectorError::Graph)?;
    let f2 = VectorFlow::new(3, values);
    require_verified_output(&g2, &o2, &f2)?;
    Ok((g2, info, o2, f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;
    use crate::util::Tolerances;
    use crate::vector::verify_vector_flow;

    #[test]
    fn tetrahedron_flow_is_a_unit_flow() {
        let (g, o, f) = k4_tetrahedral_flow();
        let rep = verify_vector_flow(&g, &o, &f, &Tolerances::default()).unwrap();
        assert!(rep.max_kcl_residual <= 1e-14);
        assert!(rep.max_norm_deviation <= 1e-14);
        // Values at a vertex are at mutual angles of 120 degrees.
        let a = super::site_triple(&f, &o, [EdgeId(0), EdgeId(1), EdgeId(2)], VertexId(0))
            .unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!((a[i].dot(&a[j]) + 0.5).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn composition_interleaves_and_scales() {
        let g = cycle_graph(4).unwrap();
        let o = Orientation::canonical(&g);
        let ones = |dim| {
            let values: BTreeMap<EdgeId, Vec<f64>> = g
                .edges()
                .iter()
                .map(|e| (e.id, vec![1.0; dim]))
                .collect();
            VectorFlow::new(dim, values)
        };
        // Part 2 runs against the host orientation on every edge.
        let mut reversed = Orientation::canonical(&g);
        for e in g.edges() {
            reversed.reverse_edge(e.id).unwrap();
        }
        let parts = [
            FlowPart {
                graph: g.clone(),
                orientation: o.clone(),
                flow: ones(1),
            },
            FlowPart {
                graph: g.clone(),
                orientation: reversed,
                flow: ones(1),
            },
        ];
        let f = compose_decomposition(&g, &o, &parts, 2).unwrap();
        assert_eq!(f.dim, 2);
        let s = 1.0 / 2.0f64.sqrt();
        for e in g.edges() {
            let v = f.value(e.id).unwrap();
            assert!((v[0] - s).abs() <= 1e-15);
            assert!((v[1] + s).abs() <= 1e-15);
        }
        let rep = verify_vector_flow(&g, &o, &f, &Tolerances::default()).unwrap();
        assert!(rep.passes(&Tolerances::default()));
    }

    #[test]
    fn composition_rejects_uneven_coverage() {
        let g = cycle_graph(3).unwrap();
        let o = Orientation::canonical(&g);
        let sub = Multigraph::build(
            vec![VertexId(0), VertexId(1)],
            vec![(EdgeId(0), VertexId(0), VertexId(1))],
            crate::graph::LoopPolicy::Allowed,
        )
        .unwrap();
        let so = Orientation::canonical(&sub);
        let sf = VectorFlow::new(1, [(EdgeId(0), vec![1.0])].into());
        let part = FlowPart {
            graph: sub,
            orientation: so,
            flow: sf,
        };
        assert!(matches!(
            compose_decomposition(&g, &o, &[part], 1),
            Err(VectorError::BadDecomposition(_))
        ));
    }

    #[test]
    fn composition_rejects_an_unverified_part() {
        let g = cycle_graph(3).unwrap();
        let o = Orientation::canonical(&g);
        // Values of norm 2 are not unit vectors, so the part fails its
        // own verification even though coverage is exact.
        let values: BTreeMap<EdgeId, Vec<f64>> =
            g.edges().iter().map(|e| (e.id, vec![2.0])).collect();
        let part = FlowPart {
            graph: g.clone(),
            orientation: o.clone(),
            flow: VectorFlow::new(1, values),
        };
        match compose_decomposition(&g, &o, &[part], 1) {
            Err(VectorError::BadDecomposition(msg)) => {
                assert!(msg.contains("unverified part"), "{msg}");
            }
            other => panic!("expected unverified-part error, got {other:?}"),
        }
    }

    #[test]
    fn single_cycle_composes_to_itself() {
        let g = cycle_graph(5).unwrap();
        let o = Orientation::canonical(&g);
        let values: BTreeMap<EdgeId, Vec<f64>> =
            g.edges().iter().map(|e| (e.id, vec![1.0])).collect();
        let part = FlowPart {
            graph: g.clone(),
            orientation: o.clone(),
            flow: VectorFlow::new(1, values.clone()),
        };
        let f = compose_decomposition(&g, &o, &[part], 1).unwrap();
        assert_eq!(f.dim, 1);
        for e in g.edges() {
            assert_eq!(f.value(e.id).unwrap(), &values[&e.id][..]);
        }
    }

    #[test]
    fn injection_of_two_tetrahedra_conserves_flow() {
        let (g, og, fg) = k4_tetrahedral_flow();
        let (h, oh, fh) = k4_tetrahedral_flow();
        let (gh, info, o, f) =
            injection_flow_transfer(&g, &og, &fg, VertexId(0), &h, &oh, &fh, VertexId(0), None)
                .unwrap();
        assert_eq!(gh.num_vertices(), 6);
        assert_eq!(gh.num_edges(), 9);
        assert!(gh.is_cubic());
        let rep = verify_vector_flow(&gh, &o, &f, &Tolerances::default()).unwrap();
        assert!(rep.max_kcl_residual <= 1e-12, "{}", rep.max_kcl_residual);
        assert!(rep.max_norm_deviation <= 1e-12);
        // Each bridge carries, outward from its g-side endpoint, the
        // negated outward site value of the removed edge.
        for b in &info.bridges {
            let bridge_val = f.outward_value(&o, b.id, b.g_end).unwrap();
            let removed_val = fg.outward_value(&og, b.g_source, VertexId(0)).unwrap();
            for k in 0..3 {
                assert!((bridge_val[k] + removed_val[k]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn blow_up_agrees_with_injecting_the_model() {
        let (g, og, fg) = k4_tetrahedral_flow();
        let site = VertexId(2);
        let (b_graph, _b_info, b_o, b_f) =
            blow_up_flow_transfer(&g, &og, &fg, site).unwrap();
        let (h, oh, fh) = k4_tetrahedral_flow();
        let (i_graph, i_info, i_o, i_f) =
            injection_flow_transfer(&g, &og, &fg, site, &h, &oh, &fh, VertexId(0), None)
                .unwrap();
        assert!(crate::graph::are_isomorphic(&b_graph, &i_graph));
        for rep in [
            verify_vector_flow(&b_graph, &b_o, &b_f, &Tolerances::default()).unwrap(),
            verify_vector_flow(&i_graph, &i_o, &i_f, &Tolerances::default()).unwrap(),
        ] {
            assert!(rep.max_kcl_residual <= 1e-12);
            assert!(rep.max_norm_deviation <= 1e-12);
        }
        // Edges of g away from the site keep their values in both
        // surgeries.
        for e in g.edges() {
            if e.u != site && e.v != site {
                assert_eq!(b_f.value(e.id).unwrap(), fg.value(e.id).unwrap());
                assert_eq!(i_f.value(e.id).unwrap(), fg.value(e.id).unwrap());
            }
        }
        // The three triangle values of the blow-up equal the three
        // rotated model values the injection puts on the surviving K4
        // triangle, as sets.
        let mut tri: Vec<Vec<f64>> = _b_info
            .triangle_edges
            .iter()
            .map(|&t| b_f.value(t).unwrap().to_vec())
            .collect();
        let mut inj: Vec<Vec<f64>> = i_info
            .edge_map
            .values()
            .map(|&n| i_f.value(n).unwrap().to_vec())
            .collect();
        let key = |v: &Vec<f64>| {
            (
                (v[0] * 1e12).round() as i64,
                (v[1] * 1e12).round() as i64,
                (v[2] * 1e12).round() as i64,
            )
        };
        tri.sort_by_key(key);
        inj.sort_by_key(key);
        for (a, b) in tri.iter().zip(&inj) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn transfer_requires_cubic_sites() {
        let g = cycle_graph(4).unwrap();
        let o = Orientation::canonical(&g);
        let values = g.edges().iter().map(|e| (e.id, vec![1.0, 0.0, 0.0])).collect();
        let f = VectorFlow::new(3, values);
        assert!(matches!(
            blow_up_flow_transfer(&g, &o, &f, VertexId(0)),
            Err(VectorError::Graph(_))
        ));
        let (h, oh, fh) = k4_tetrahedral_flow();
        assert!(matches!(
            injection_flow_transfer(&g, &o, &f, VertexId(0), &h, &oh, &fh, VertexId(0), None),
            Err(VectorError::Graph(_))
        ));
    }

    #[test]
    fn transfer_rejects_unverified_input_flows() {
        let (g, og, mut fg) = k4_tetrahedral_flow();
        // Break conservation at one vertex.
        fg.values.insert(EdgeId(0), vec![0.3, 0.4, 0.5]);
        let (h, oh, fh) = k4_tetrahedral_flow();
        assert!(matches!(
            injection_flow_transfer(&g, &og, &fg, VertexId(0), &h, &oh, &fh, VertexId(0), None),
            Err(VectorError::Invalid(_))
        ));
        assert!(matches!(
            blow_up_flow_transfer(&g, &og, &fg, VertexId(0)),
            Err(VectorError::Invalid(_))
        ));
    }
}
