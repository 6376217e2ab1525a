//! Exact algebraic analysis of a sphere flow's balance structure.
//!
//! A verified unit-vector flow uses finitely many values up to sign
//! (its value classes).  At each vertex the classes combine with small
//! integer coefficients to zero; collecting those coefficient rows gives
//! the flow's *balanced matrix*, an integer matrix whose row space over
//! `Q` and over `Z_2` controls whether the underlying graph admits a
//! nowhere-zero flow over the Klein four-group:
//!
//! * [`rank_q`] — exact rational rank by fraction-free elimination;
//! * [`odd_coordinate_free`] — whether any integer vector of the row
//!   span has exactly one odd coordinate, decided on the saturated row
//!   lattice via diagonalization;
//! * [`mod2_rowspace`] / [`GF2Subspace`] — the mod-2 row space and its
//!   orthogonal complement, with [`covering_pair`] picking two
//!   complement vectors whose supports cover every coordinate;
//! * [`synthesize_4flow`] — the full pipeline from a rank-≤-2,
//!   odd-coordinate-free flow to a verified nowhere-zero flow over
//!   `Z_2 × Z_2`.
//!
//! Everything here is exact integer or bit-vector arithmetic; floating
//! point enters only when reading the value classes off a flow.

mod gf2;
mod synth;

pub use gf2::{covering_pair, mod2_rowspace, num_odd_support, GF2Subspace};
pub use synth::{synthesize_4flow, KleinFlowCertificate};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, Multigraph, Orientation, VertexId};
use crate::group::{FlowError, GroupError};
use crate::vector::{FlowValueIndex, VectorError};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Vector(#[from] VectorError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("rational rank {rank} exceeds 2")]
    RankTooHigh { rank: usize },
    #[error("row span contains an integer vector with exactly one odd coordinate: {witness:?}")]
    NotOddFree { witness: Vec<i64> },
    #[error("subspace dimension {dim} is below ambient − 2 = {}", ambient.saturating_sub(2))]
    DimensionDeficit { dim: usize, ambient: usize },
    #[error("every subspace element is zero at coordinate {0}")]
    ZeroColumn(usize),
    #[error("{0}")]
    TooLarge(String),
    #[error("internal contradiction: {0} — this should be impossible when the preconditions hold; please report")]
    InternalContradiction(String),
    #[error("{0}")]
    Invalid(String),
}

/// The integer matrix of per-vertex balance coefficients of a flow,
/// expressed through its value classes: entry `(v, i)` counts the
/// incidences of class `i` at vertex `v`, signed by orientation and the
/// class's sign flip.  Rows combine the class representatives to the
/// vertex's (near-zero) balance sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedMatrix {
    /// Number of value classes `b` (the row width).
    pub num_classes: usize,
    /// One coefficient row per vertex.
    pub rows: BTreeMap<VertexId, Vec<i64>>,
}

impl BalancedMatrix {
    /// Assemble a matrix directly from rows (vertices are numbered in
    /// order).  Every row must have length `num_classes`.
    pub fn from_rows(num_classes: usize, rows: Vec<Vec<i64>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == num_classes));
        BalancedMatrix {
            num_classes,
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| (VertexId(i as u32), r))
                .collect(),
        }
    }

    /// The rows in vertex order, without their keys.
    pub fn row_list(&self) -> Vec<&[i64]> {
        self.rows.values().map(|r| r.as_slice()).collect()
    }
}

/// Build the balanced matrix of a flow from its value-class index.
///
/// Loops contribute nothing (their two signed incidences cancel); every
/// other incidence adds `±1` to its class's coefficient, `+` when the
/// edge leaves the vertex and its value is the class representative,
/// with either reversal flipping the sign.
pub fn balanced_matrix(
    g: &Multigraph,
    o: &Orientation,
    index: &FlowValueIndex,
) -> Result<BalancedMatrix, AlgebraError> {
    o.matches(g)?;
    let b = index.num_classes();
    for e in g.edges() {
        match index.assignment.get(&e.id) {
            None => return Err(VectorError::MissingEdge(e.id).into()),
            Some(&(class, _)) if class >= b => {
                return Err(AlgebraError::Invalid(format!(
                    "edge {} is assigned to class {class} of {b}",
                    e.id
                )))
            }
            _ => {}
        }
    }
    for &e in index.assignment.keys() {
        if g.edge(e).is_err() {
            return Err(VectorError::ExtraEdge(e).into());
        }
    }
    let mut rows = BTreeMap::new();
    for &v in g.vertices() {
        let mut eps = vec![0i64; b];
        for e in g.incident_edges(v) {
            if g.edge(e)?.is_loop() {
                continue;
            }
            let sign = if o.init(e)? == v { 1 } else { -1 };
            let (class, flipped) = index.assignment[&e];
            eps[class] += if flipped { -sign } else { sign };
        }
        rows.insert(v, eps);
    }
    Ok(BalancedMatrix {
        num_classes: b,
        rows,
    })
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("exact integer arithmetic overflowed 128 bits; the matrix is beyond desk scale")
}

/// Exact rank of the matrix over the rationals, by fraction-free
/// (integer-only) Gaussian elimination.  No floating point is involved;
/// intermediate values are minors of the input and must fit in 128 bits
/// (amply true for balance matrices of desk-scale graphs).
pub fn rank_q(m: &BalancedMatrix) -> usize {
    let a: Vec<Vec<i128>> = m
        .rows
        .values()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    fraction_free_rank(a)
}

fn fraction_free_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = checked(
                    checked(a[rank][c].checked_mul(a[i][j]))
                        .checked_sub(checked(a[i][c].checked_mul(a[rank][j]))),
                );
                // Exact by the Sylvester determinant identity.
                a[i][j] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    rank
}

/// Outcome of the odd-coordinate test on an integer row span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OddCoordinateStatus {
    /// No integer vector of the rational row span has exactly one odd
    /// coordinate.
    Free,
    /// An explicit integer vector of the span with exactly one odd
    /// coordinate.
    Violated { witness: Vec<i64> },
}

/// Integer row and column reduction to diagonal form, tracking the
/// inverse of the accumulated column operations.  After diagonalization
/// the first `rank` rows of that inverse form a basis of the
/// *saturation* of the input's row lattice — the set of all integer
/// vectors in the rational row span.
struct Diagonalizer {
    a: Vec<Vec<i128>>,
    winv: Vec<Vec<i128>>,
    cols: usize,
}

impl Diagonalizer {
    fn new(rows: Vec<Vec<i128>>, cols: usize) -> Self {
        let winv = (0..cols)
            .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
            .collect();
        Diagonalizer {
            a: rows,
            winv,
            cols,
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        self.winv.swap(i, j);
    }

    /// `col[to] += k * col[from]`; mirrored on the inverse as
    /// `winv_row[from] -= k * winv_row[to]`.
    fn add_col(&mut self, to: usize, from: usize, k: i128) {
        for row in &mut self.a {
            row[to] = checked(row[to].checked_add(checked(k.checked_mul(row[from]))));
        }
        for x in 0..self.cols {
            let sub = checked(k.checked_mul(self.winv[to][x]));
            self.winv[from][x] = checked(self.winv[from][x].checked_sub(sub));
        }
    }

    /// Diagonalize and return the rank.
    fn run(&mut self) -> usize {
        let m = self.a.len();
        let b = self.cols;
        let mut t = 0usize;
        while t < m.min(b) {
            // Smallest-magnitude pivot in the remaining block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..b {
                    if self.a[i][j] != 0
                        && pivot.map_or(true, |(pi, pj)| {
                            self.a[i][j].abs() < self.a[pi][pj].abs()
                        })
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            self.a.swap(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t with row operations (Euclidean steps).
                for i in t + 1..m {
                    while self.a[i][t] != 0 {
                        let q = self.a[i][t].div_euclid(self.a[t][t]);
                        if q != 0 {
                            for j in t..b {
                                let sub = checked(q.checked_mul(self.a[t][j]));
                                self.a[i][j] = checked(self.a[i][j].checked_sub(sub));
                            }
                        }
                        if self.a[i][t] != 0 {
                            self.a.swap(i, t);
                        }
                    }
                }
                // Clear row t with column operations.
                let mut reopened = false;
                for j in t + 1..b {
                    while self.a[t][j] != 0 {
                        let q = self.a[t][j].div_euclid(self.a[t][t]);
                        if q != 0 {
                            self.add_col(j, t, -q);
                        }
                        if self.a[t][j] != 0 {
                            self.swap_cols(t, j);
                            reopened = true;
                        }
                    }
                }
                // A column swap may have pulled nonzero entries back
                // into column t; re-clear until stable.
                if !reopened {
                    break;
                }
            }
            t += 1;
        }
        t
    }
}

/// Basis of the saturation of the integer row lattice: all integer
/// vectors of the rational row span.
fn saturation_basis(rows: Vec<Vec<i128>>, cols: usize) -> Vec<Vec<i128>> {
    let mut d = Diagonalizer::new(rows, cols);
    let rank = d.run();
    d.winv.truncate(rank);
    d.winv
}

/// Decide whether the rational row span of the matrix contains an
/// integer vector with exactly one odd coordinate.
///
/// The set of integer vectors in the span is the saturation of the row
/// lattice; a vector with exactly one odd coordinate exists in it if
/// and only if some standard basis vector lies in the saturation's
/// image mod 2.  When one does, an explicit integer witness is
/// reconstructed from the mod-2 solution.
pub fn odd_coordinate_free(m: &BalancedMatrix) -> OddCoordinateStatus {
    let b = m.num_classes;
    assert!(
        b <= 64,
        "odd-coordinate test supports at most 64 value classes"
    );
    if b == 0 {
        return OddCoordinateStatus::Free;
    }
    let rows: Vec<Vec<i128>> = m
        .rows
        .values()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let sat = saturation_basis(rows, b);

    // Reduce the saturation basis mod 2 and look for a standard basis
    // vector, remembering which basis rows combine to each reduced row.
    let masks: Vec<u64> = sat
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0u64, |acc, (j, &x)| acc | (((x & 1) as u64) << j))
        })
        .collect();
    for j in 0..b {
        let target = 1u64 << j;
        if let Some(combo) = gf2::solve_combination(&masks, target) {
            let mut witness = vec![0i128; b];
            for (i, row) in sat.iter().enumerate() {
                if combo & (1u64 << i) != 0 {
                    for (w, &x) in witness.iter_mut().zip(row) {
                        *w = checked(w.checked_add(x));
                    }
                }
            }
            let witness: Vec<i64> = witness
                .into_iter()
                .map(|x| i64::try_from(x).expect("witness entry fits in 64 bits"))
                .collect();
            debug_assert_eq!(
                witness.iter().filter(|&&x| x % 2 != 0).count(),
                1,
                "witness must have exactly one odd coordinate"
            );
            return OddCoordinateStatus::Violated { witness };
        }
    }
    OddCoordinateStatus::Free
}
