//! Exact truncated power series, fixed-point system solvers, the
//! generating-function systems of the planar-structure decompositions,
//! and coefficient-asymptotics estimation.

pub mod asym;
pub mod bounds;
pub mod maps_gf;
pub mod networks;
pub mod ps;
pub mod system;
pub mod table;
pub mod upoly;

pub use ps::{PowerSeries, Q, SeriesError};
pub use system::{solve_scalar, solve_vector, Expr, SystemSpec};
