//! Minkowski valuation operators evaluated through exact support oracles.

pub mod bounds;
pub mod operators;
pub mod spec;
pub mod support;

pub use bounds::{symmetric_volume_bounds, volume_bounds, VolumeBounds};
pub use operators::{
    centroid_body_eval, difference_body, m_star, moment_body_eval, moment_body_star_eval,
    projection_body_eval, Operator, OperatorDescriptor, Variance,
};
pub use spec::{Family, ValuationSpec};
pub use support::{BodyKind, SupportBody, SupportPoint};
