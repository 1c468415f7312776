//! Exact and probabilistic machinery around the Kochen-Specker style
//! argument for spin-1 particles.
//!
//! * [`exactgeom`] builds ray configurations in `Z[√2]` with no floating point.
//! * [`coloring`] decides 101-colorability and emits checkable refutations.
//! * [`quantum`] evaluates spin-1 measurement probabilities and error bounds.
//! * [`janus`] simulates frame-dependent outcome-filling models.
//!
//! The exact side is generic over the integer type backing [`Quad2`]
//! (`i64`, `i128` or [`num_bigint::BigInt`]); the numeric side is generic over
//! the float type (`f32` or `f64`). The aliases below fix the common choices.

pub mod coloring;
pub mod exactgeom;
pub mod janus;
pub mod quantum;
pub mod rng;
pub mod scalar;

pub use exactgeom::{OrthGraph, Quad2, Ray, RaySet};
pub use scalar::{ExactInt, Real};

/// `a + b√2` with 64-bit coefficients; enough for every built-in configuration.
pub type Quad2I64 = exactgeom::Quad2<i64>;
/// `a + b√2` with 128-bit coefficients.
pub type Quad2I128 = exactgeom::Quad2<i128>;
/// `a + b√2` with arbitrary-precision coefficients.
pub type Quad2Big = exactgeom::Quad2<num_bigint::BigInt>;
pub type RayI64 = exactgeom::Ray<i64>;
pub type RayBig = exactgeom::Ray<num_bigint::BigInt>;
pub type RaySetI64 = exactgeom::RaySet<i64>;

pub type UnitVec64 = quantum::UnitVec<f64>;
pub type UnitVec32 = quantum::UnitVec<f32>;
pub type Projector64 = quantum::Projector3<f64>;
pub type Projector32 = quantum::Projector3<f32>;
pub type TwinJointDist64 = quantum::TwinJointDist<f64>;
