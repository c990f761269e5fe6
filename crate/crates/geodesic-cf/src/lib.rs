//! Exact continued fractions, Minkowski geodesic continued fractions and cutting
//! sequences of geodesics on the modular surface.

pub mod automata;
pub mod cf;
pub mod cutting;
pub mod error;
pub mod exactnum;
pub mod mgcf;
pub mod shiftspace;
pub mod tessellation;

pub use error::{Error, Result};
