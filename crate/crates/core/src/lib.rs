//! Contour machinery for the one-dimensional Ising model with couplings
//! `J(r) = r^{-α}`, `1 < α ≤ 2`.

pub mod bounds;
pub mod contours;
pub mod covers;
pub mod energy;
pub mod enumerate;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod montecarlo;
pub mod verify;

pub use error::{Error, Result};
