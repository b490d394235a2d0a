//! Flux of Killing fields through the ends of constant mean curvature one
//! (Bryant) surfaces in hyperbolic space.
//!
//! The crate builds ends from their holomorphic data as truncated generalized
//! power series, computes their flux triples by residues, and cross-checks
//! every residue formula against direct quadrature of the flux integral.
//!
//! Points of hyperbolic space use the upper half-space model `(ζ, w)`, and an
//! isometry `P` acts on the boundary by `ζ ↦ (δζ + γ)/(βζ + α)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balance;
pub mod bryant;
pub mod cli;
pub mod ends;
pub mod error;
pub mod flux;
pub mod geometry;
pub mod json;
pub mod killing;
pub mod mesh;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
