//! Synthesis of a nowhere-zero Klein four-group flow from a sphere
//! flow of low balanced rank.

use std::collections::BTreeMap;

use crate::graph::{EdgeId, Multigraph, Orientation};
use crate::group::{verify_circulation, CyclicProduct, GroupFlow};
use crate::util::Tolerances;
use crate::vector::{index_flow_values, verify_vector_flow, VectorFlow};

use super::{
    balanced_matrix, covering_pair, mod2_rowspace, odd_coordinate_free, rank_q, AlgebraError,
    OddCoordinateStatus,
};

/// A nowhere-zero flow over `Z_2 × Z_2`, synthesized from a sphere
/// flow, together with the covering pair that produced it.
///
/// Bit `i` of `x` and `y` refers to value class `i` of the source flow;
/// class `i` receives the group element `(x_i, y_i)`, nonzero because
/// the pair's supports cover every class.  Every element of
/// `Z_2 × Z_2` is its own inverse, so the assignment is orientation-free
/// and conservation can be checked against any orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinFlowCertificate {
    /// First covering vector over the value classes.
    pub x: u64,
    /// Second covering vector.
    pub y: u64,
    /// Group value per class: `(x_i, y_i)`.
    pub class_values: Vec<(u8, u8)>,
    /// Group value per edge.
    pub values: BTreeMap<EdgeId, (u8, u8)>,
}

impl KleinFlowCertificate {
    /// The certificate as a flow over `Z_2 × Z_2`, for verification or
    /// export.
    pub fn to_group_flow(&self) -> GroupFlow {
        let group = CyclicProduct::klein();
        let values = self
            .values
            .iter()
            .map(|(&e, &(a, b))| {
                let elem = group
                    .element(&[a as u64, b as u64])
                    .expect("bits are reduced residues");
                (e, elem)
            })
            .collect();
        GroupFlow::new(group, values)
    }
}

/// Synthesize a nowhere-zero `Z_2 × Z_2` flow from a verified sphere
/// flow whose balanced matrix has rational rank at most 2 and an
/// odd-coordinate-free row span.
///
/// Pipeline: cluster the flow's values into sign classes, build the
/// balanced matrix, check the rank and odd-coordinate preconditions,
/// take the orthogonal complement of the mod-2 row space (dimension at
/// least `b − 2`), pick a covering pair `(x, y)` in it, and assign
/// class `i` the element `(x_i, y_i)`.  Conservation of the result is
/// verified exactly before returning; the intermediate guarantees
/// (complement dimension, projection surjectivity, final conservation)
/// are re-checked at runtime and reported as
/// [`AlgebraError::InternalContradiction`] if they ever fail, since the
/// preconditions provably imply them.
pub fn synthesize_4flow(
    g: &Multigraph,
    o: &Orientation,
    f: &VectorFlow,
) -> Result<KleinFlowCertificate, AlgebraError> {
    let tol = Tolerances::default();
    let report = verify_vector_flow(g, o, f, &tol)?;
    if !report.passes(&tol) {
        return Err(AlgebraError::Invalid(format!(
            "flow does not verify: balance residual {:.3e}, norm deviation {:.3e}, {} zero edge(s)",
            report.max_kcl_residual,
            report.max_norm_deviation,
            report.zero_edges.len()
        )));
    }
    let index = index_flow_values(f, tol.clustering)?;
    let b = index.num_classes();
    let matrix = balanced_matrix(g, o, &index)?;

    let rank = rank_q(&matrix);
    if rank > 2 {
        return Err(AlgebraError::RankTooHigh { rank });
    }
    if let OddCoordinateStatus::Violated { witness } = odd_coordinate_free(&matrix) {
        return Err(AlgebraError::NotOddFree { witness });
    }

    let s_prime = mod2_rowspace(&matrix);
    let w = s_prime.orthogonal_complement();
    if w.dim() + 2 < b {
        return Err(AlgebraError::InternalContradiction(format!(
            "complement dimension {} fell below {} − 2 although the mod-2 rank is bounded by the rational rank {rank}",
            w.dim(),
            b
        )));
    }
    let covered = w.basis().iter().fold(0u64, |a, r| a | r);
    let full = if b == 64 { u64::MAX } else { (1u64 << b) - 1 };
    if covered != full {
        let j = (!covered & full).trailing_zeros();
        return Err(AlgebraError::InternalContradiction(format!(
            "value class {j} is zero across the complement although the row span is odd-coordinate-free"
        )));
    }

    let (x, y) = covering_pair(&w)?;
    let class_values: Vec<(u8, u8)> = (0..b)
        .map(|i| (((x >> i) & 1) as u8, ((y >> i) & 1) as u8))
        .collect();
    debug_assert!(class_values.iter().all(|&v| v != (0, 0)));
    let values: BTreeMap<EdgeId, (u8, u8)> = index
        .assignment
        .iter()
        .map(|(&e, &(class, _))| (e, class_values[class]))
        .collect();

    let cert = KleinFlowCertificate {
        x,
        y,
        class_values,
        values,
    };
    let check = verify_circulation(g, o, &cert.to_group_flow())?;
    if !check.is_nowhere_zero_flow() {
        return Err(AlgebraError::InternalContradiction(format!(
            "synthesized assignment fails verification: {} conservation violation(s), {} zero edge(s)",
            check.kcl_violations.len(),
            check.zeros.len()
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cube_graph, petersen};
    use crate::group::solve_flow_exhaustive;
    use crate::immersion::{immersion_to_flow, quasi_petersen_immersion};
    use crate::util::Budget;
    use crate::vector::s1_flow_r3;

    fn planar_flow(g: &Multigraph) -> (Orientation, VectorFlow) {
        let (o, f2) = s1_flow_r3(g).unwrap();
        (o.clone(), f2.embed_in_dimension(3).unwrap())
    }

    #[test]
    fn bipartite_k33_yields_a_verified_certificate() {
        let g = complete_bipartite(3, 3).unwrap();
        let (o, f) = planar_flow(&g);
        let cert = synthesize_4flow(&g, &o, &f).unwrap();
        // Three classes, all assigned nonzero elements.
        assert_eq!(cert.class_values.len(), 3);
        assert!(cert.values.values().all(|&v| v != (0, 0)));
        let report = verify_circulation(&g, &o, &cert.to_group_flow()).unwrap();
        assert!(report.is_nowhere_zero_flow());
        // Cross-check: an exhaustive cyclic-of-order-4 solve succeeds.
        let z4 = CyclicProduct::cyclic(4).unwrap();
        let out = solve_flow_exhaustive(&g, &o, &z4, &Budget::unlimited()).unwrap();
        assert!(matches!(out, crate::group::SolveOutcome::Found(_)));
    }

    #[test]
    fn cube_graph_yields_a_verified_certificate() {
        let g = cube_graph();
        let (o, f) = planar_flow(&g);
        let cert = synthesize_4flow(&g, &o, &f).unwrap();
        let report = verify_circulation(&g, &o, &cert.to_group_flow()).unwrap();
        assert!(report.is_nowhere_zero_flow());
    }

    #[test]
    fn petersen_flow_fails_a_precondition() {
        let (g, o, imm) = quasi_petersen_immersion(1, 2, 5).unwrap();
        let f = immersion_to_flow(&g, &o, &imm, &Tolerances::default()).unwrap();
        let err = synthesize_4flow(&g, &o, &f).unwrap_err();
        assert!(
            matches!(
                err,
                AlgebraError::RankTooHigh { .. } | AlgebraError::NotOddFree { .. }
            ),
            "unexpected error: {err}"
        );
        // Consistent with exhaustive nonexistence over the order-4
        // cyclic group.
        assert!(are_isomorphic_petersen(&g));
        let z4 = CyclicProduct::cyclic(4).unwrap();
        let p10 = petersen();
        let out =
            solve_flow_exhaustive(&p10, &Orientation::canonical(&p10), &z4, &Budget::unlimited())
                .unwrap();
        assert!(matches!(out, crate::group::SolveOutcome::ProvenNone));
    }

    fn are_isomorphic_petersen(g: &Multigraph) -> bool {
        crate::graph::are_isomorphic(g, &petersen())
    }

    #[test]
    fn rank_of_petersen_flow_is_consistent_with_no_4flow() {
        let (g, o, imm) = quasi_petersen_immersion(1, 2, 5).unwrap();
        let f = immersion_to_flow(&g, &o, &imm, &Tolerances::default()).unwrap();
        let index = index_flow_values(&f, Tolerances::default().clustering).unwrap();
        let m = balanced_matrix(&g, &o, &index).unwrap();
        let rank = rank_q(&m);
        let odd = odd_coordinate_free(&m);
        assert!(
            rank >= 3 || matches!(odd, OddCoordinateStatus::Violated { .. }),
            "rank {rank}, odd status {odd:?} would synthesize a flow the graph cannot have"
        );
    }
}
