//! Exact construction and verification of SU(n+1) Toda solutions built from
//! rational normal curves.
//!
//! Every real-analytic quantity is a rational function in `z` and `w = z̄`
//! with Gaussian-rational coefficients, so identities are decided exactly;
//! floating point appears only when fields are sampled on a grid.

pub mod bipoly;
pub mod curve;
pub mod linalg;
pub mod toda;
pub mod frames;
pub mod verify;
pub mod samples;
