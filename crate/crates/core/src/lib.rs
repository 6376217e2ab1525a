//! Unit-vector flows, nowhere-zero group flows, and equiangular sphere
//! immersions on finite multigraphs.
//!
//! A *flow* on an oriented multigraph assigns a value to every edge so that
//! at each vertex the values on outgoing edges balance the values on
//! incoming edges.  This crate works with two value domains:
//!
//! * elements of a finite abelian group (products of cyclic groups), where
//!   a *nowhere-zero* flow avoids the identity on every edge, and
//! * unit vectors in `R^{d+1}` (points of the sphere `S^d`), where balance
//!   is vector addition and every value must have norm 1.
//!
//! On cubic graphs, unit-vector flows in `R^3` correspond to immersions of
//! the graph on the unit sphere by directed great-circle arcs that leave
//! each vertex at pairwise angles of `2π/3`; the [`immersion`] module
//! implements both directions of that correspondence.  The [`algebra`]
//! module analyses the values of a sphere flow (rank and parity of the
//! lattice spanned by per-vertex balance vectors) and, when the flow uses
//! few enough directions, synthesises a nowhere-zero flow over
//! `Z_2 × Z_2`.

pub mod algebra;
pub mod graph;
pub mod group;
pub mod immersion;
pub mod jsonio;
pub mod util;
pub mod vector;

pub use graph::{EdgeId, Multigraph, Orientation, VertexId};
pub use group::{CyclicProduct, GroupElem, GroupFlow};
pub use immersion::{DirectedArc, Immersion};
pub use util::{Budget, Tolerances};
pub use vector::VectorFlow;
