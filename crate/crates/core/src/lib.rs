//! Simulation core for quasistatic perfectly plastic thin plates with a
//! periodic two-phase microstructure.
//!
//! The crate provides:
//!
//! * fixed-size symmetric tensor kinematics with the thin-plate strain
//!   rescaling ([`tensor`]),
//! * periodic phase maps on the unit cell and their interfaces ([`micro`]),
//! * per-phase elastic/plastic material laws ([`material`]),
//!
//! All numerics are generic over the scalar type via [`scalar::Real`];
//! the crate root re-exports `f64` aliases of the main types.

pub mod error;
pub mod material;
pub mod mesh;
pub mod micro;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` vector in the plane.
pub type Vec2 = tensor::Vec2<f64>;
/// `f64` vector in space.
pub type Vec3 = tensor::Vec3<f64>;
/// `f64` symmetric 2×2 tensor.
pub type Sym2 = tensor::Sym2<f64>;
/// `f64` symmetric 3×3 tensor.
pub type Sym3 = tensor::Sym3<f64>;
/// `f64` material law.
pub type PhaseMaterial = material::PhaseMaterial<f64>;
