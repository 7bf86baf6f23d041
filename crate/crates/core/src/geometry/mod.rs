//! Exact rational geometry: linear algebra, hulls, polytopes and integrals.

mod hull;
pub mod integrals;
pub mod linalg;
pub mod polytope;

pub use linalg::{RMat, RVec, Solution};
pub use polytope::{BoundaryCell, Facet, Halfspace, Polytope};
