//! Cone-ordered generalized optimization on a local sphere.
//!
//! The crate implements the full analysis chain for vector-style optimization
//! problems posed on a geodesically convex patch of the unit 2-sphere, where
//! the order relation is induced by a pointed convex cone living in a tangent
//! plane and moved around by parallel transport:
//!
//! * [`sphere`] — closed-form geometry of S²: distance, geodesics,
//!   exponential/logarithm maps, parallel transport, deterministic patch
//!   sampling.
//! * [`cone`] — sector cones in tangent planes, polar (dual) cones,
//!   transported cones and the induced strict order.
//! * [`scalar`] — the two scalarizing primitives: the oriented distance
//!   function of half-lines, orthants and sectors, and the Gerstewitz
//!   functional for the nonnegative orthant.
//! * [`problem`] — problem instances (objective and constraint families),
//!   the image map into `T M × Rˡ`, the good set `H`, the extended image,
//!   and brute-force efficiency decisions on deterministic grids.
//! * [`separation`] — linear and nonlinear weak separation functions,
//!   constructive separator search, sufficient-optimality certificates,
//!   generalized Lagrangians, saddle-point checks, the dual problem and the
//!   image duality gap.
//! * [`scalarization`] — the sets `G(y)`/`G_p(y)`, the scalar quasi-minimum
//!   problem and the end-to-end solve-and-certify procedure.
//!
//! Everything is a pure function of immutable value types; all numeric work
//! is 64-bit binary floating point. The crate is `no_std`-compatible
//! (`default-features = false, features = ["libm"]`); allocation is used for
//! sample clouds and parameter grids.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("sgop-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod cone;
pub mod error;
mod math;
pub mod problem;
pub mod scalar;
pub mod scalarization;
pub mod separation;
pub mod sphere;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
