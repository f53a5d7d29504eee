//! Semiclassical tunneling from an inhomogeneous quantum wire through a
//! static triangular barrier.
//!
//! The crate computes the complex action under the barrier, tracks the
//! interfering branches of the characteristic label, locates the caustic
//! points where branches reconnect, and finds the inhomogeneity width at
//! which the tunneling exponent vanishes (Euclidean resonance). An
//! imaginary-time trajectory calculation provides an independent check of
//! the exponent.
//!
//! Every numerical routine is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! stated tolerances assume.

// `!(a < b)` style comparisons deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod axis;
pub mod branches;
pub mod caustics;
pub mod error;
pub mod hj;
pub mod model;
pub mod num;
pub mod quad;
pub mod roots;
pub mod trajectory;

pub use error::{Error, Result};
pub use num::{Cx, Real};

pub type Profile = model::InhomogeneityProfile<f64>;
pub type Model = model::ModelParams<f64>;
pub type Physical = model::PhysicalParams<f64>;
pub type Complex64 = Cx<f64>;
pub type ActionPoint = hj::ActionPoint<f64>;
pub type AxisBranch = axis::AxisBranch<f64>;
pub type ResonanceResult = axis::ResonanceResult<f64>;
pub type TrajectoryResult = trajectory::TrajectoryResult<f64>;
pub type CausticPoint = caustics::CausticPoint<f64>;
