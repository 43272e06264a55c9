//! Deterministic synthesis of MIMO channel matrices for line-of-sight and
//! single-reflection links over an infinite smooth planar surface.
//!
//! The exact channel entries come from a cylindrical-wave spectral integral
//! evaluated along a semi-elliptical contour in the complex
//! transverse-wavenumber plane ([`quadrature`]); two closed-form
//! constructions (the spherical-wave direct path and the mirror image) serve
//! as independent oracles, and a reflectivity-weighted image gives the
//! ray-tracing approximation ([`channel`]). On top sit eigenvalue, capacity
//! and spacing analysis ([`mimo`]) and the aperture sweep comparing the exact
//! and paraxial routes ([`raytrace`]).
//!
//! All computations are pure and reentrant; matrix builds parallelize over
//! antenna pairs and stay bitwise deterministic for a fixed configuration.

pub mod channel;
pub mod error;
pub mod geometry;
mod legendre;
pub mod materials;
pub mod mimo;
pub mod quadrature;
pub mod raytrace;
pub mod spectrum;

pub use error::{Error, Result};
