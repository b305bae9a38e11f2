//! Blended quasicontinuum force-based coupling on a periodic 1D chain.
//!
//! The numerical core is generic over [`Scalar`] (`f32`, `f64`); the aliases
//! below fix it to `f64`, which is what the experiment drivers use.

pub mod blending;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod operators;
pub mod potential;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Field = lattice::PeriodicField<f64>;
pub type Operator = operators::BandedPeriodicOperator<f64>;
pub type MorseF64 = potential::Morse<f64>;
pub type MorseParamsF64 = potential::MorseParams<f64>;
