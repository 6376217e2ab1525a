//! Finite abelian groups (products of cyclic groups) and flows valued in
//! them.
//!
//! A *nowhere-zero flow* assigns a non-identity group element to every
//! edge of an oriented multigraph so that at each vertex the sum over
//! outgoing edges equals the sum over incoming edges.  Whether such a
//! flow exists depends only on the order of the group, not its structure;
//! the exhaustive solver in [`solve`] makes that testable on small
//! graphs.

mod flow;
mod solve;

pub use flow::{
    lift_flow, reverse_edge_normalize, verify_circulation, verify_cut_balance,
    verify_nowhere_zero, CirculationReport, FlowError, GroupFlow,
};
pub use solve::{solve_flow_exhaustive, z3_flow_bipartite_cubic, SolveOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("modulus {0} is not allowed (need m >= 2 and product <= 2^20)")]
    BadModulus(u64),
    #[error("residue tuple {got:?} does not fit moduli {moduli:?}")]
    BadResidues { got: Vec<u64>, moduli: Vec<u64> },
    #[error("element index {0} out of range")]
    BadIndex(u32),
}

/// A finite abelian group `Z_{m1} x ... x Z_{mk}`.
///
/// Elements are handles ([`GroupElem`]) ordered lexicographically by their
/// residue tuples; all arithmetic goes through the group.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CyclicProduct {
    moduli: Vec<u64>,
}

/// An element of a [`CyclicProduct`], encoded as its lexicographic rank.
/// Only meaningful together with the group that produced it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElem(pub(crate) u32);

impl CyclicProduct {
    /// At most 2^20 elements, enough for every desk-scale search here.
    pub const MAX_ORDER: u64 = 1 << 20;

    pub fn new(moduli: &[u64]) -> Result<Self, GroupError> {
        if moduli.is_empty() {
            return Err(GroupError::BadModulus(1));
        }
        let mut order: u64 = 1;
        for &m in moduli {
            if m < 2 {
                return Err(GroupError::BadModulus(m));
            }
            order = order.checked_mul(m).ok_or(GroupError::BadModulus(m))?;
            if order > Self::MAX_ORDER {
                return Err(GroupError::BadModulus(m));
            }
        }
        Ok(CyclicProduct {
            moduli: moduli.to_vec(),
        })
    }

    /// The cyclic group `Z_k`.
    pub fn cyclic(k: u64) -> Result<Self, GroupError> {
        Self::new(&[k])
    }

    /// The Klein four-group `Z_2 x Z_2`.
    pub fn klein() -> Self {
        Self::new(&[2, 2]).expect("4 <= MAX_ORDER")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u32 {
        self.moduli.iter().product::<u64>() as u32
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(0)
    }

    pub fn is_zero(&self, a: GroupElem) -> bool {
        a.0 == 0
    }

    /// Decode an element into its residue tuple.
    pub fn residues(&self, a: GroupElem) -> Vec<u64> {
        let mut idx = a.0 as u64;
        let mut out = vec![0u64; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            out[i] = idx % self.moduli[i];
            idx /= self.moduli[i];
        }
        out
    }

    /// Encode a residue tuple.
    pub fn element(&self, residues: &[u64]) -> Result<GroupElem, GroupError> {
        if residues.len() != self.moduli.len() {
            return Err(GroupError::BadResidues {
                got: residues.to_vec(),
                moduli: self.moduli.clone(),
            });
        }
        let mut idx: u64 = 0;
        for (&r, &m) in residues.iter().zip(&self.moduli) {
            if r >= m {
                return Err(GroupError::BadResidues {
                    got: residues.to_vec(),
                    moduli: self.moduli.clone(),
                });
            }
            idx = idx * m + r;
        }
        Ok(GroupElem(idx as u32))
    }

    pub fn add(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        let (mut ia, mut ib) = (a.0 as u64, b.0 as u64);
        let mut idx = 0u64;
        let mut stride = 1u64;
        for &m in self.moduli.iter().rev() {
            let ra = ia % m;
            let rb = ib % m;
            idx += ((ra + rb) % m) * stride;
            stride *= m;
            ia /= m;
            ib /= m;
        }
        GroupElem(idx as u32)
    }

    pub fn neg(&self, a: GroupElem) -> GroupElem {
        let mut ia = a.0 as u64;
        let mut idx = 0u64;
        let mut stride = 1u64;
        for &m in self.moduli.iter().rev() {
            let ra = ia % m;
            idx += ((m - ra) % m) * stride;
            stride *= m;
            ia /= m;
        }
        GroupElem(idx as u32)
    }

    pub fn sub(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        self.add(a, self.neg(b))
    }

    /// All elements in lexicographic residue order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        (0..self.order()).map(GroupElem)
    }

    /// All non-identity elements, lexicographic.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = GroupElem> {
        (1..self.order()).map(GroupElem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_encode_round_trip() {
        let g = CyclicProduct::new(&[2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        for e in g.elements() {
            let r = g.residues(e);
            assert_eq!(g.element(&r).unwrap(), e);
        }
        // Lexicographic: (0,0) < (0,1) < (0,2) < (1,0) < ...
        assert_eq!(g.residues(GroupElem(0)), vec![0, 0]);
        assert_eq!(g.residues(GroupElem(2)), vec![0, 2]);
        assert_eq!(g.residues(GroupElem(3)), vec![1, 0]);
    }

    #[test]
    fn arithmetic_is_componentwise() {
        let g = CyclicProduct::new(&[2, 3]).unwrap();
        let a = g.element(&[1, 2]).unwrap();
        let b = g.element(&[1, 1]).unwrap();
        assert_eq!(g.residues(g.add(a, b)), vec![0, 0]);
        assert_eq!(g.residues(g.neg(a)), vec![1, 1]);
        assert_eq!(g.sub(a, a), g.zero());
    }

    #[test]
    fn klein_group_has_exponent_two() {
        let g = CyclicProduct::klein();
        for e in g.elements() {
            assert_eq!(g.add(e, e), g.zero());
            assert_eq!(g.neg(e), e);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CyclicProduct::new(&[0]).is_err());
        assert!(CyclicProduct::new(&[1]).is_err());
        assert!(CyclicProduct::new(&[]).is_err());
        assert!(CyclicProduct::new(&[1 << 21]).is_err());
        let g = CyclicProduct::cyclic(4).unwrap();
        assert!(g.element(&[4]).is_err());
        assert!(g.element(&[0, 0]).is_err());
    }
}
