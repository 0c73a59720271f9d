//! mapforge: a laboratory for random planar structures.
//!
//! Rooted combinatorial maps, plane and labelled trees, the closure
//! bijection from labelled trees to pointed quadrangulations, the angular
//! quadrangulation/map correspondence, core/block/brick decompositions,
//! and exact truncated power series with fixed-point system solvers for
//! the associated generating functions.

pub mod bijection;
pub mod decomp;
pub mod graph;
pub mod map;
pub mod tree;
pub mod rng;
pub mod series;
