//! Moments of weighted point systems, equilibrium and central configuration
//! equations, barycentric nullspace bases, and distance-geometry constraints.
//!
//! The crate works over dual-mode scalars: exact rationals for determinantal
//! identities and `f64` for numerical solving. The main entry points are:
//!
//! - [`moments`]: total weight, first and second moments, barycenters, and
//!   the Huygens-Leibniz-Koenig identity residuals;
//! - [`nullspace`]: the augmented configuration matrix, codimension, cores,
//!   Dziobek trees, explicit kernel bases, membership identities, and the
//!   Pluecker relation;
//! - [`equilibrium`]: interaction coefficients, induced weight systems,
//!   equilibrium verification, inverse interactions, and the symmetric
//!   factorization `F = W S W^T`;
//! - [`central`]: central configurations, the S-matrix, and the four
//!   verification families (Albouy-Chenciner, Dias, minor, extended Leibniz);
//! - [`distgeom`]: relative configuration and Cayley-Menger matrices, kernel
//!   bridges, co-sphericity, and mutual-distance constraint sets;
//! - [`solver`]: damped Gauss-Newton search for central configurations on
//!   the Albouy-Chenciner residuals.

// index-aligned loops over small matrices read better than iterator chains here
#![allow(clippy::needless_range_loop)]

pub mod central;
pub mod config;
pub mod distgeom;
pub mod equilibrium;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod nullspace;
pub mod residual;
pub mod scalar;
pub mod solver;

pub use config::Configuration;
pub use error::{Error, Result};
pub use linalg::Mat;
pub use moments::{WeightVector, WeightedSystem};
pub use residual::{Residual, ResidualGrid};
pub use scalar::{Mode, Scalar};

/// Default relative tolerance for float-mode comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
