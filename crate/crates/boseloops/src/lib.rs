//! Ideal Bose gas in harmonic traps.
//!
//! The crate evaluates grand-canonical thermodynamics and the one-body reduced
//! density matrix of non-interacting bosons in isotropic and strongly
//! anisotropic (quasi-1D and quasi-2D) harmonic traps, through the
//! loop (permutation-cycle) representation `Σ_l z^l G(lβ)` of the Bose–Einstein
//! operator function, and checks the open-trap limits `κ ↓ 0` of these
//! quantities numerically.
//!
//! Modules:
//! - [`specfun`]: polylogarithm, exponential integral, thermal wavelength,
//!   normalized Hermite functions;
//! - [`kernels`]: trap models, heat and Mehler kernels, traces, kernel bounds;
//! - [`thermo`]: particle number, grand potential, chemical-potential inversion,
//!   critical numbers, occupations and generalized-BEC band sums;
//! - [`rdm`]: reduced density matrix (loop and eigenfunction forms), loop
//!   decompositions, open-trap limits and δ-scaled density profiles;
//! - [`aniso`]: quasi-1D/quasi-2D regimes and mesoscopic-loop contributions;
//! - [`cli`]: configuration, result tables and the `boseloops` subcommands.

// Argument checks are written as `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aniso;
pub mod cli;
pub mod error;
pub mod extended;
pub mod kernels;
pub mod logspace;
pub mod quad;
pub mod rdm;
pub mod series;
pub mod specfun;
pub mod thermo;

pub use error::{Error, Result};
pub use logspace::LogValue;
pub use series::SeriesControl;
