//! Spherical and zonal polyharmonics on unions of rotated balls.
//!
//! Points of the rotated sets are `e^{i phi} a` with `a` real; the library
//! evaluates zonal polyharmonics three ways, the Poisson kernel of the
//! rotated ball (closed form and series), the Cauchy-Hua kernel of the Lie
//! ball, and solves the polyharmonic Dirichlet problem by quadrature.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gegenbauer;
pub mod geometry;
pub mod kernels;
pub mod polyalg;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{ComplexVector, LieGeometry, RotatedVector};

/// Library version, recorded in result metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
