//! Symbolic invariants of contact sub-pseudo-Riemannian structures.
//!
//! A structure is given by an orthonormal frame of expression-valued vector
//! fields on a coordinate chart.  From it the crate derives the normalized
//! contact form, the Reeb field, structural functions, the invariants `h` and
//! `κ`, extended metrics, Levi-Civita and Weyl connections and their
//! curvature, and checks Einstein-Weyl equations and isometries.

// index loops mirror the tensor formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod builtins;
pub mod calculus;
pub mod connection;
pub mod curvature;
pub mod einstein_weyl;
pub mod error;
pub mod isometry;
pub mod random;
pub mod structure;
pub mod symexpr;

pub use error::{Error, Result};
