//! Bounded and pattern-equivariant mass transport on Fibonacci and chair
//! substitution tilings, with exact arithmetic in ℚ[φ].

pub mod casebook;
pub mod cochain;
pub mod error;
pub mod format;
pub mod geometry;
pub mod scalar;
pub mod transport;

pub use error::{Error, Result};
pub use scalar::Scalar;
