//! Exact arithmetic in `(z, w)` over the Gaussian rationals, where `w` stands
//! for `z̄`.
//!
//! [`BiPoly`] and [`BiRat`] are the polynomial and rational-function layers;
//! [`GaugedRat`] extends them by half-integer powers of a fixed holomorphic
//! gauge base and its conjugate.

mod coeff;
mod gauged;
mod gcd;
mod identity;
mod lazy;
mod modular;
mod numeric;
mod poly;
mod rat;

pub use coeff::GaussCoeff;
pub use gauged::{GaugedRat, Half};
pub use gcd::{gcd, gcd_with_cofactors};
pub use identity::{vanishes, Product};
pub use lazy::LazyRat;
pub use numeric::{roots_z, CompiledGauged, CompiledPoly, CompiledRat};
pub use poly::{BiPoly, Mono};
pub use rat::BiRat;

pub(crate) use coeff::rat_to_f64;

use num_complex::Complex64;
use thiserror::Error;

/// The two derivations: `∂/∂z` and `∂/∂z̄` (acting on `w`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    Zbar,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed coefficient `{0}`")]
    Coefficient(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("pole at z = {0}")]
    PoleAtPoint(Complex64),
}

/// Relative size below which a denominator value counts as a pole.
pub const POLE_THRESHOLD: f64 = 1e-12;
