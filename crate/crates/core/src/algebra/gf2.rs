//! Subspaces of `Z_2^b` as bit-vector row spaces: reduced echelon
//! bases, orthogonal complements under the standard dot product, the
//! covering-pair search, and the odd-support count.

use super::{AlgebraError, BalancedMatrix};

/// A subspace of `Z_2^b` (`b ≤ 64`), stored as a reduced row-echelon
/// basis of bit masks: bit `j` of a mask is coordinate `j`, every row's
/// lowest set bit is its pivot, pivots are distinct, and no pivot bit
/// appears in any other row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2Subspace {
    ambient: usize,
    basis: Vec<u64>,
}

impl GF2Subspace {
    /// Reduce the given spanning vectors to a basis.
    pub fn from_rows(ambient: usize, rows: impl IntoIterator<Item = u64>) -> Self {
        assert!(ambient <= 64, "ambient dimension capped at 64");
        let mask = ambient_mask(ambient);
        let mut s = GF2Subspace {
            ambient,
            basis: Vec::new(),
        };
        for r in rows {
            s.insert(r & mask);
        }
        s
    }

    /// The zero subspace.
    pub fn zero(ambient: usize) -> Self {
        Self::from_rows(ambient, [])
    }

    /// The whole space.
    pub fn full(ambient: usize) -> Self {
        Self::from_rows(ambient, (0..ambient).map(|j| 1u64 << j))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The reduced echelon basis, in increasing pivot order.
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    fn insert(&mut self, mut v: u64) {
        for &row in &self.basis {
            if v & (row & row.wrapping_neg()) != 0 {
                v ^= row;
            }
        }
        if v == 0 {
            return;
        }
        let pivot = v & v.wrapping_neg();
        for row in &mut self.basis {
            if *row & pivot != 0 {
                *row ^= v;
            }
        }
        self.basis.push(v);
        self.basis.sort_by_key(|r| r.trailing_zeros());
    }

    /// Whether `v` lies in the subspace.
    pub fn contains(&self, mut v: u64) -> bool {
        if v & !ambient_mask(self.ambient) != 0 {
            return false;
        }
        for &row in &self.basis {
            if v & (row & row.wrapping_neg()) != 0 {
                v ^= row;
            }
        }
        v == 0
    }

    /// All elements, ascending.  Supported up to dimension 20.
    pub fn elements(&self) -> Vec<u64> {
        assert!(
            self.dim() <= 20,
            "refusing to enumerate a subspace of dimension {}",
            self.dim()
        );
        let mut all = Vec::with_capacity(1 << self.dim());
        for combo in 0u64..(1 << self.dim()) {
            let mut v = 0u64;
            for (i, &row) in self.basis.iter().enumerate() {
                if combo & (1 << i) != 0 {
                    v ^= row;
                }
            }
            all.push(v);
        }
        all.sort_unstable();
        all
    }

    /// The orthogonal complement under the standard mod-2 dot product.
    /// Dimensions add up to the ambient dimension.
    pub fn orthogonal_complement(&self) -> GF2Subspace {
        let pivots: u64 = self
            .basis
            .iter()
            .map(|r| r & r.wrapping_neg())
            .fold(0, |a, p| a | p);
        let mut rows = Vec::new();
        for f in 0..self.ambient {
            let fbit = 1u64 << f;
            if pivots & fbit != 0 {
                continue;
            }
            let mut v = fbit;
            for &row in &self.basis {
                if row & fbit != 0 {
                    v |= row & row.wrapping_neg();
                }
            }
            rows.push(v);
        }
        let c = GF2Subspace::from_rows(self.ambient, rows);
        debug_assert_eq!(c.dim() + self.dim(), self.ambient);
        debug_assert!(c
            .basis
            .iter()
            .all(|&v| self.basis.iter().all(|&r| (v & r).count_ones() % 2 == 0)));
        c
    }
}

fn ambient_mask(ambient: usize) -> u64 {
    if ambient == 0 {
        0
    } else if ambient == 64 {
        u64::MAX
    } else {
        (1u64 << ambient) - 1
    }
}

/// Express `target` as a combination of the given masks, returning the
/// chosen subset as a bit mask over row indices (bit `i` set means rows
/// `i` participates), or `None` when `target` is outside their span.
pub(super) fn solve_combination(masks: &[u64], target: u64) -> Option<u64> {
    // Row-reduce while tracking combinations.
    let mut rows: Vec<(u64, u64)> = Vec::new();
    for (i, &m) in masks.iter().enumerate() {
        let mut v = m;
        let mut combo = 1u64 << i;
        for &(row, rc) in &rows {
            if v & (row & row.wrapping_neg()) != 0 {
                v ^= row;
                combo ^= rc;
            }
        }
        if v != 0 {
            rows.push((v, combo));
            rows.sort_by_key(|(r, _)| r.trailing_zeros());
        }
    }
    let mut v = target;
    let mut combo = 0u64;
    for &(row, rc) in &rows {
        if v & (row & row.wrapping_neg()) != 0 {
            v ^= row;
            combo ^= rc;
        }
    }
    (v == 0).then_some(combo)
}

/// The mod-2 row space of a balanced matrix.
pub fn mod2_rowspace(m: &BalancedMatrix) -> GF2Subspace {
    assert!(
        m.num_classes <= 64,
        "mod-2 row space supports at most 64 value classes"
    );
    let rows = m.rows.values().map(|r| {
        r.iter()
            .enumerate()
            .fold(0u64, |acc, (j, &x)| acc | ((x.rem_euclid(2) as u64) << j))
    });
    GF2Subspace::from_rows(m.num_classes, rows)
}

/// Count the elements of the subspace with odd support (odd number of
/// ones).  Always 0 or exactly half the subspace.
pub fn num_odd_support(v: &GF2Subspace) -> u64 {
    v.elements()
        .iter()
        .filter(|x| x.count_ones() % 2 == 1)
        .count() as u64
}

/// Find two subspace elements whose supports jointly cover every
/// coordinate.
///
/// Requires dimension at least `ambient − 2` and no coordinate at which
/// the whole subspace vanishes (no zero basis column).  Up to dimension
/// 20 the subspace is enumerated and the lexicographically smallest
/// pair `(x, y)` is returned; beyond that the pair is built from the
/// (at most two) parity constraints cutting out the subspace.
pub fn covering_pair(w: &GF2Subspace) -> Result<(u64, u64), AlgebraError> {
    let b = w.ambient();
    let full = ambient_mask(b);
    if w.dim() + 2 < b {
        return Err(AlgebraError::DimensionDeficit {
            dim: w.dim(),
            ambient: b,
        });
    }
    let covered = w.basis().iter().fold(0u64, |a, r| a | r);
    if covered != full {
        let j = (!covered & full).trailing_zeros() as usize;
        return Err(AlgebraError::ZeroColumn(j));
    }
    if b == 0 {
        return Ok((0, 0));
    }

    if w.dim() <= 20 {
        let elems = w.elements();
        for &x in &elems {
            for &y in &elems {
                if x | y == full {
                    return Ok((x, y));
                }
            }
        }
        return Err(AlgebraError::InternalContradiction(
            "no covering pair in a subspace meeting the covering preconditions".into(),
        ));
    }

    // Large subspace: it is cut out by at most two parity constraints
    // (the orthogonal complement has dimension ≤ 2).  Build x as the
    // all-ones vector minus at most one bit per constraint signature to
    // fix x's parities, then cover the removed bits with a y completed
    // by a small padding search.
    let compl = w.orthogonal_complement();
    let s1 = compl.basis().first().copied().unwrap_or(0);
    let s2 = compl.basis().get(1).copied().unwrap_or(0);
    let in_w = |v: u64| (v & s1).count_ones() % 2 == 0 && (v & s2).count_ones() % 2 == 0;

    // Coordinate classes by constraint signature (skip 00, it is free).
    let class: [u64; 3] = [
        !s1 & s2 & full, // 01
        s1 & !s2 & full, // 10
        s1 & s2 & full,  // 11
    ];
    let lowest = |m: u64| -> Option<u64> {
        (m != 0).then(|| m & m.wrapping_neg())
    };
    // Removal patterns: one optional bit per class.
    for pattern in 0u8..8 {
        let mut removed = 0u64;
        let mut feasible = true;
        for (i, &cm) in class.iter().enumerate() {
            if pattern & (1 << i) != 0 {
                match lowest(cm) {
                    Some(bit) => removed |= bit,
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
        }
        if !feasible {
            continue;
        }
        let x = full & !removed;
        if !in_w(x) {
            continue;
        }
        // Pad y = removed ∪ T with up to one spare bit per class so y
        // lands in the subspace.
        let spare: Vec<u64> = class
            .iter()
            .filter_map(|&cm| lowest(cm & !removed))
            .collect();
        for t in 0u8..(1 << spare.len()) {
            let mut y = removed;
            for (i, &bit) in spare.iter().enumerate() {
                if t & (1 << i) != 0 {
                    y |= bit;
                }
            }
            if in_w(y) {
                debug_assert_eq!(x | y, full);
                return Ok((x, y));
            }
        }
    }
    Err(AlgebraError::InternalContradiction(
        "covering-pair completion search failed although the preconditions were verified".into(),
    ))
}
