//! Exact and asymptotic statistics of random domino tilings of the Aztec
//! diamond, computed through determinantal point processes.
//!
//! Modules, bottom-up:
//! - [`numerics`]: contour quadrature, Gauss–Legendre grids, determinants.
//! - [`tiling`]: diamonds, dominoes, enumeration, shuffling sampler, paths
//!   and particle extraction.
//! - [`krawtchouk`]: Krawtchouk weights, polynomials, kernels and the
//!   Hermite limit.
//! - [`extended_kernel`]: the extended Krawtchouk kernel, correlations and
//!   gap probabilities.
//! - [`airy`]: Airy functions, the extended Airy kernel, Airy process
//!   distributions and Tracy–Widom F2.
//! - [`center`]: full-plane dimer kernel and center-of-diamond statistics.

pub mod airy;
pub mod center;
mod dd;
pub mod error;
pub mod extended_kernel;
pub mod krawtchouk;
pub mod numerics;
pub mod tiling;

pub use error::{Error, Result};
