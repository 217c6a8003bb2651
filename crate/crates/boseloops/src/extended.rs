//! Extended reals: finite values or tagged divergences.
//!
//! Open-trap limits are infinite in several regimes (the critical number in
//! one dimension, the condensed two- and three-dimensional reduced density
//! matrix). Such results are carried as a [`DivergenceLaw`] describing how
//! the finite-κ quantity grows, never as a floating-point infinity.

use serde::{Deserialize, Serialize};

/// How a quantity diverges as the trap opens (`κ ↓ 0`) or as a parameter
/// reaches a singular point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum DivergenceLaw {
    /// Infinite without a finite-κ growth law (e.g. `ν_c = +∞` for `d = 1`).
    Unbounded {
        /// Human-readable reason.
        reason: String,
    },
    /// Grows like `coefficient · ln(1/κ)`.
    Logarithmic {
        /// Prefactor of `ln(1/κ)`.
        coefficient: f64,
    },
    /// Grows like `coefficient · κ^{−exponent}`.
    PowerLaw {
        /// Prefactor.
        coefficient: f64,
        /// Positive exponent of `1/κ`.
        exponent: f64,
    },
    /// Grows like `exp(rate / κ²)` (natural log of the value ≈ `rate/κ²`).
    Exponential {
        /// Coefficient of `1/κ²` in the logarithm.
        rate: f64,
    },
}

/// A finite real or a tagged divergence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtendedReal {
    /// Ordinary finite value.
    Finite(f64),
    /// Divergent value with its growth law.
    Divergent(DivergenceLaw),
}

impl ExtendedReal {
    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            ExtendedReal::Divergent(_) => None,
        }
    }

    /// `true` for divergent values.
    pub fn is_divergent(&self) -> bool {
        matches!(self, ExtendedReal::Divergent(_))
    }

    /// Short textual tag used in tables: the number, or `divergent:<law>`.
    pub fn tag(&self) -> String {
        match self {
            ExtendedReal::Finite(v) => format!("{v:.16e}"),
            ExtendedReal::Divergent(DivergenceLaw::Unbounded { .. }) => "divergent:unbounded".into(),
            ExtendedReal::Divergent(DivergenceLaw::Logarithmic { coefficient }) => {
                format!("divergent:log(1/kappa)*{coefficient:.16e}")
            }
            ExtendedReal::Divergent(DivergenceLaw::PowerLaw { coefficient, exponent }) => {
                format!("divergent:kappa^-{exponent}*{coefficient:.16e}")
            }
            ExtendedReal::Divergent(DivergenceLaw::Exponential { rate }) => {
                format!("divergent:exp({rate:.16e}/kappa^2)")
            }
        }
    }
}
