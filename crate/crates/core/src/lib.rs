//! Exact-arithmetic Minkowski valuations on convex polytopes.
//!
//! Bodies are [`Polytope`]s with rational vertices or [`SupportBody`] oracles
//! (moment and projection bodies, Minkowski combinations). Everything is
//! computed over [`Rational`]; floating point only appears in the Monte-Carlo
//! cross-check and in labelled report output.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod rational;
pub mod valuation;

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use geometry::{Facet, Halfspace, Polytope, RMat, RVec, Solution};
pub use rational::{format_rational, frac, int, parse_rational, Rational, RationalSum};
pub use valuation::{
    Family, Operator, OperatorDescriptor, SupportBody, SupportPoint, ValuationSpec, Variance,
};
