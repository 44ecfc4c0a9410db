//! Exactly solvable Schrödinger wells with a uniformly moving barrier.
//!
//! The square well with one wall at rest and the other moving at constant
//! speed is obtained from the static box by a point transformation. First
//! order and confluent second order supersymmetric transformations then give
//! a moving trigonometric Pöschl–Teller well and a one-parameter family of
//! moving confluent wells, each with closed-form solutions.
//!
//! Alongside the closed forms the crate carries the numeric machinery used to
//! check them independently: finite-difference intertwiners, Schrödinger
//! residuals, quadrature and a Crank–Nicolson propagator.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod families;
pub mod numeric;
pub mod point_transform;
pub mod propagate;
pub mod static_box;
pub mod susy;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use types::{
    Amplitude, Branch, ConfluentConfig, ExtendedReal, Potential, SampledField, SpaceTimePoint, Wave, WellConfig,
};
