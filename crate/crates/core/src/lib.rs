//! Product and convolution estimates in weighted Fourier–Lebesgue,
//! modulation and Wiener amalgam spaces: exact admissibility checks over
//! rational exponents, and sampled operators for checking the estimates
//! numerically.
//!
//! Functions live on a centred periodic lattice ([`grid`]); the Fourier
//! side uses the unitary transform, so convolution and product theorems
//! hold exactly on the lattice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod bilinear;
pub mod cli;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod microlocal;
pub mod norms;

pub use error::{Error, Result};
