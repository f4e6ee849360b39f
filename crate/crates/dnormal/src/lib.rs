//! Double-normal pair graphs of finite point sets.
//!
//! A pair {p, q} of a finite set V in R^d is double-normal when V lies in
//! the closed slab bounded by the hyperplanes through p and q perpendicular
//! to pq, and strict when the rest of V avoids both hyperplanes. This crate
//! classifies pairs by brute force (floating or exact-integer arithmetic),
//! builds point sets whose strict double-normal graph contains a complete
//! multipartite graph (regular-simplex and random-subset seeds lifted onto
//! circular arcs), verifies the quantitative bounds behind the upper-bound
//! argument, and prunes near-collinear classes by diameter windows.

pub mod bounds;
pub mod construct;
pub mod geom;
pub mod io;
pub mod pairs;
pub mod prune;
pub mod suites;

pub use geom::{angle, inner, Cmp, GeomError, Point, Tolerance, ToleranceMode, UnitVector};
pub use pairs::{
    classify_pair, count_summary, diameter_pairs, double_normal_graph,
    double_normal_graph_pruned, verify_complete_multipartite, PairClass, PairError, PairGraph,
    PointSet,
};
