//! Electrostatics of two nearly touching perfectly conducting spheres.
//!
//! The crate computes the exact bispherical-coordinate series for the
//! singular function `h` and for the potential in a uniform external
//! field, the image-charge form of `h`, and the closed-form blow-up
//! terms (concentration factor, `Q_k` coefficients, boundary profile of
//! the normal derivative, superfocusing region).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod error;
pub mod exact;
pub mod field;
pub mod geometry;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use field::AxialField;
pub use geometry::{BisphericalPoint, CartesianPoint, ImageFamily, SphereConfig, SuperfocusRegion};

/// Library version embedded in every harness output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
