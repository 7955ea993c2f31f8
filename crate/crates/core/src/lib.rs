//! Chart-local numerics for conformal, projective and Weyl structures.
//!
//! The toolkit decides whether a torsion-free connection is compatible with
//! the light cones of an indefinite metric, and if so recovers the Weyl
//! one-form `φ` whose Weyl connection shares its geodesics.
//!
//! - [`expr`]: coordinate expressions with exact differentiation
//! - [`tensor`]: small dense tensors and symmetric matrices at a point
//! - [`geometry`]: metrics, one-forms, Levi-Civita / Weyl / EPS connections
//! - [`compat`]: null-cone sampling, normal-form decomposition, weylization
//! - [`geodesic`]: RK4 geodesics, null-norm drift, pre-geodesic residual
//! - [`synth`]: random smooth fields for property tests

mod canon;
pub mod compat;
pub mod error;
pub mod expr;
pub mod geodesic;
pub mod geometry;
pub mod synth;
pub mod tensor;

pub use error::{Error, Result};
pub use expr::{Chart, ScalarExpr};
pub use geometry::{Connection, ConnectionField, ConnectionSpec, MetricSpec, OneFormSpec};
pub use tensor::{PointTensor, SymMatrix};
