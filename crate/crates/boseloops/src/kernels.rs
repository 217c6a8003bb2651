//! Trap models, heat and Mehler kernels, semigroup traces and kernel bounds.
//!
//! A trap is a product of one-dimensional oscillators with frequencies
//! `ω_j κ_j`. The anisotropic models keep `κ_j` as logarithms because the
//! quasi-1D longitudinal component `κ₁ = κ·exp(−κ_c²/κ²)` underflows double
//! precision at moderate `κ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{ln_expm1, ln_one_minus_exp_neg, ln_tanh_half, log_add_exp};
use crate::specfun::PhysicalConstants;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Trap geometry; anisotropic models fix `ω₂ = ω₃ = ω⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TrapGeometry {
    /// `d`-dimensional isotropic trap with frequency `ω₀κ` on every axis.
    Isotropic {
        /// Dimension, 1 to 3.
        d: usize,
        /// Scaling parameter κ.
        kappa: f64,
    },
    /// Quasi-one-dimensional trap: `κ₁ = κ e^{−κ_c²/κ²}`, `κ⊥ = κ`.
    #[serde(rename = "quasi1d")]
    Quasi1D {
        /// Scaling parameter κ.
        kappa: f64,
        /// Anisotropy parameter κ_c.
        kappa_c: f64,
        /// Longitudinal frequency ω₁.
        omega1: f64,
        /// Transverse frequency ω⊥.
        omega_perp: f64,
    },
    /// Quasi-two-dimensional trap: `κ₁ = κ`, `κ⊥ = κ e^{−√(κ_c/κ)}`.
    #[serde(rename = "quasi2d")]
    Quasi2D {
        /// Scaling parameter κ.
        kappa: f64,
        /// Anisotropy parameter κ_c.
        kappa_c: f64,
        /// Longitudinal frequency ω₁.
        omega1: f64,
        /// Transverse frequency ω⊥.
        omega_perp: f64,
    },
}

/// One oscillator axis: angular frequency `ω_j` and `ln κ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    /// Angular frequency ω_j (before κ-scaling).
    pub omega: f64,
    /// Natural logarithm of the scaling component κ_j.
    pub ln_kappa: f64,
}

impl Axis {
    /// `κ_j` (may underflow to zero for quasi-1D traps).
    pub fn kappa(&self) -> f64 {
        self.ln_kappa.exp()
    }

    /// `ln(mω_jκ_j/ħ)`, the inverse squared oscillator length.
    pub fn ln_q(&self, c: &PhysicalConstants) -> f64 {
        (c.mass * self.omega / c.hbar).ln() + self.ln_kappa
    }

    /// `ln(ħω_jκ_j t)`.
    pub fn ln_energy_time(&self, t: f64, c: &PhysicalConstants) -> f64 {
        (c.hbar * self.omega * t).ln() + self.ln_kappa
    }
}

/// A trap model together with its physical constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapModel {
    /// Geometry and scaling parameters.
    #[serde(flatten)]
    pub geometry: TrapGeometry,
    /// Physical constants (ħ, m, ω₀). For anisotropic traps `ω₀` is derived
    /// from `ω₁, ω⊥` and the stored value is ignored.
    #[serde(default)]
    pub consts: PhysicalConstants,
}

impl TrapModel {
    /// Isotropic `d`-dimensional trap in natural units.
    pub fn isotropic(d: usize, kappa: f64) -> Result<Self> {
        Self::new(TrapGeometry::Isotropic { d, kappa }, PhysicalConstants::default())
    }

    /// Quasi-1D trap in natural units.
    pub fn quasi_1d(kappa: f64, kappa_c: f64, omega1: f64, omega_perp: f64) -> Result<Self> {
        Self::new(
            TrapGeometry::Quasi1D {
                kappa,
                kappa_c,
                omega1,
                omega_perp,
            },
            PhysicalConstants::default(),
        )
    }

    /// Quasi-2D trap in natural units.
    pub fn quasi_2d(kappa: f64, kappa_c: f64, omega1: f64, omega_perp: f64) -> Result<Self> {
        Self::new(
            TrapGeometry::Quasi2D {
                kappa,
                kappa_c,
                omega1,
                omega_perp,
            },
            PhysicalConstants::default(),
        )
    }

    /// Validated constructor.
    pub fn new(geometry: TrapGeometry, consts: PhysicalConstants) -> Result<Self> {
        let t = TrapModel { geometry, consts };
        t.validate()?;
        Ok(t)
    }

    /// Checks all invariants of the model.
    pub fn validate(&self) -> Result<()> {
        self.consts.validate()?;
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self.geometry {
            TrapGeometry::Isotropic { d, kappa } => {
                if !(1..=3).contains(&d) {
                    return Err(Error::domain(format!("dimension must be 1, 2 or 3, got {d}")));
                }
                pos("kappa", kappa)
            }
            TrapGeometry::Quasi1D {
                kappa,
                kappa_c,
                omega1,
                omega_perp,
            }
            | TrapGeometry::Quasi2D {
                kappa,
                kappa_c,
                omega1,
                omega_perp,
            } => {
                pos("kappa", kappa)?;
                pos("kappa_c", kappa_c)?;
                pos("omega1", omega1)?;
                pos("omega_perp", omega_perp)
            }
        }
    }

    /// Same model with a different κ.
    pub fn with_kappa(&self, new_kappa: f64) -> Result<Self> {
        let mut g = self.geometry;
        match &mut g {
            TrapGeometry::Isotropic { kappa, .. }
            | TrapGeometry::Quasi1D { kappa, .. }
            | TrapGeometry::Quasi2D { kappa, .. } => *kappa = new_kappa,
        }
        Self::new(g, self.consts)
    }

    /// Same model with different physical constants.
    pub fn with_consts(&self, consts: PhysicalConstants) -> Result<Self> {
        Self::new(self.geometry, consts)
    }

    /// Spatial dimension.
    pub fn dim(&self) -> usize {
        match self.geometry {
            TrapGeometry::Isotropic { d, .. } => d,
            _ => 3,
        }
    }

    /// Nominal scaling parameter κ.
    pub fn kappa(&self) -> f64 {
        match self.geometry {
            TrapGeometry::Isotropic { kappa, .. }
            | TrapGeometry::Quasi1D { kappa, .. }
            | TrapGeometry::Quasi2D { kappa, .. } => kappa,
        }
    }

    /// `true` for the isotropic model.
    pub fn is_isotropic(&self) -> bool {
        matches!(self.geometry, TrapGeometry::Isotropic { .. })
    }

    /// `(ln κ₁, ln κ⊥)` for anisotropic traps; `(ln κ, ln κ)` for isotropic ones.
    pub fn ln_kappa_components(&self) -> (f64, f64) {
        match self.geometry {
            TrapGeometry::Isotropic { kappa, .. } => (kappa.ln(), kappa.ln()),
            TrapGeometry::Quasi1D { kappa, kappa_c, .. } => {
                (kappa.ln() - kappa_c * kappa_c / (kappa * kappa), kappa.ln())
            }
            TrapGeometry::Quasi2D { kappa, kappa_c, .. } => (kappa.ln(), kappa.ln() - (kappa_c / kappa).sqrt()),
        }
    }

    /// `(κ₁, κ⊥)`; see [`TrapModel::ln_kappa_components`].
    pub fn kappa_components(&self) -> (f64, f64) {
        let (a, b) = self.ln_kappa_components();
        (a.exp(), b.exp())
    }

    /// The oscillator axes of the trap.
    pub fn axes(&self) -> Vec<Axis> {
        let (l1, lp) = self.ln_kappa_components();
        match self.geometry {
            TrapGeometry::Isotropic { d, .. } => vec![
                Axis {
                    omega: self.consts.omega0,
                    ln_kappa: l1,
                };
                d
            ],
            TrapGeometry::Quasi1D { omega1, omega_perp, .. } | TrapGeometry::Quasi2D { omega1, omega_perp, .. } => {
                vec![
                    Axis {
                        omega: omega1,
                        ln_kappa: l1,
                    },
                    Axis {
                        omega: omega_perp,
                        ln_kappa: lp,
                    },
                    Axis {
                        omega: omega_perp,
                        ln_kappa: lp,
                    },
                ]
            }
        }
    }

    /// `ln |κ|^d = Σ_j ln κ_j`, the logarithm of the rescaling factor of ν.
    pub fn ln_kappa_volume(&self) -> f64 {
        self.axes().iter().map(|a| a.ln_kappa).sum()
    }

    /// Reference frequency ω₀ (`(ω₁ω⊥²)^{1/3}` for anisotropic traps).
    pub fn omega0(&self) -> f64 {
        match self.geometry {
            TrapGeometry::Isotropic { .. } => self.consts.omega0,
            TrapGeometry::Quasi1D { omega1, omega_perp, .. } | TrapGeometry::Quasi2D { omega1, omega_perp, .. } => {
                (omega1 * omega_perp * omega_perp).cbrt()
            }
        }
    }

    /// Constants with ω₀ replaced by the trap's reference frequency.
    pub fn effective_consts(&self) -> PhysicalConstants {
        PhysicalConstants {
            omega0: self.omega0(),
            ..self.consts
        }
    }

    /// Ground-state energy `E₀ = Σ_j ħω_jκ_j/2`.
    pub fn ground_energy(&self) -> f64 {
        self.axes()
            .iter()
            .map(|a| 0.5 * self.consts.hbar * a.omega * a.kappa())
            .sum()
    }

    /// Eigenvalue `E^{(s)} = Σ_j ħω_jκ_j (s_j + 1/2)`.
    pub fn eigenvalue(&self, s: &[usize]) -> Result<f64> {
        let axes = self.axes();
        check_dim(axes.len(), s.len())?;
        Ok(axes
            .iter()
            .zip(s)
            .map(|(a, &sj)| self.consts.hbar * a.omega * a.kappa() * (sj as f64 + 0.5))
            .sum())
    }

    /// Excitation energy `E^{(s)} − E₀ = Σ_j ħω_jκ_j s_j`.
    pub fn excitation_energy(&self, s: &[usize]) -> Result<f64> {
        let axes = self.axes();
        check_dim(axes.len(), s.len())?;
        Ok(axes
            .iter()
            .zip(s)
            .map(|(a, &sj)| self.consts.hbar * a.omega * a.kappa() * sj as f64)
            .sum())
    }

    /// Normalized ground-state wave function `Ψ₀(x) = Π_j ψ_0^{(j)}(x_j)`.
    pub fn ground_state(&self, x: &[f64]) -> Result<f64> {
        let axes = self.axes();
        check_dim(axes.len(), x.len())?;
        let ln: f64 = axes
            .iter()
            .zip(x)
            .map(|(a, &xj)| {
                let lq = a.ln_q(&self.consts);
                0.25 * (lq - LN_PI) - 0.5 * lq.exp() * xj * xj
            })
            .sum();
        Ok(ln.exp())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("time argument must be positive, got {t}")))
    }
}

/// Free heat kernel `√(m/(2πħ²t)) exp(−m(x−y)²/(2ħ²t))`.
pub fn heat_kernel_1d(x: f64, y: f64, t: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_time(t)?;
    let h2 = consts.hbar * consts.hbar;
    let d = x - y;
    Ok((consts.mass / (2.0 * std::f64::consts::PI * h2 * t)).sqrt() * (-consts.mass * d * d / (2.0 * h2 * t)).exp())
}

/// Mehler kernel of the oscillator with frequency `ωκ` (`omega_kappa`), in
/// log-domain internally.
pub fn mehler_kernel_1d(x: f64, y: f64, t: f64, omega_kappa: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_time(t)?;
    if !(omega_kappa > 0.0) {
        return Err(Error::domain(format!(
            "omega_kappa must be positive, got {omega_kappa}"
        )));
    }
    let ln_q = (consts.mass * omega_kappa / consts.hbar).ln();
    let ln_x = (consts.hbar * omega_kappa * t).ln();
    Ok(ln_mehler(x, y, ln_q, ln_x).exp())
}

/// `ln` of the Mehler kernel from `ln q = ln(mωκ/ħ)` and `ln X = ln(ħωκt)`.
fn ln_mehler(x: f64, y: f64, ln_q: f64, ln_x: f64) -> f64 {
    ln_oscillator_factor(x, y, ln_q, ln_x) - 0.5 * ln_x.exp()
}

/// `ln` of `e^{X/2} G(x, y; t)` per axis, i.e. the oscillator kernel with the
/// zero-point factor removed:
/// `√(q/π) (1−e^{−2X})^{−1/2} exp(−(q/4)[(x+y)² tanh(X/2) + (x−y)² coth(X/2)])`.
pub fn ln_oscillator_factor(x: f64, y: f64, ln_q: f64, ln_x: f64) -> f64 {
    let xp = x + y;
    let xm = x - y;
    let lt = ln_tanh_half(ln_x);
    let mut expo = 0.0;
    if xp != 0.0 {
        expo += xp * xp * (ln_q + lt).exp();
    }
    if xm != 0.0 {
        expo += xm * xm * (ln_q - lt).exp();
    }
    0.5 * (ln_q - LN_PI) - 0.5 * ln_one_minus_exp_neg(ln_x + std::f64::consts::LN_2) - 0.25 * expo
}

/// `ln` of the ground-state dyad `ψ₀(x)ψ₀(y) = √(q/π) e^{−q(x²+y²)/2}`, the
/// `X → ∞` limit of [`ln_oscillator_factor`].
pub fn ln_ground_dyad(x: f64, y: f64, ln_q: f64) -> f64 {
    0.5 * (ln_q - LN_PI) - 0.5 * ln_q.exp() * (x * x + y * y)
}

/// `ln` of the oscillator factor divided by its ground-state limit:
/// `−½ln(1−e^{−2X}) + (q/2)(x+y)²/(e^X+1) − (q/2)(x−y)²/(e^X−1)`.
pub fn ln_oscillator_excess(x: f64, y: f64, ln_q: f64, ln_x: f64) -> f64 {
    let xp = x + y;
    let xm = x - y;
    let big_x = ln_x.exp();
    let mut v = -0.5 * ln_one_minus_exp_neg(ln_x + std::f64::consts::LN_2);
    if xp != 0.0 {
        v += 0.5 * xp * xp * (ln_q - log_add_exp(big_x, 0.0)).exp();
    }
    if xm != 0.0 {
        v -= 0.5 * xm * xm * (ln_q - ln_expm1(ln_x)).exp();
    }
    v
}

/// Product kernel `G(x, y; t) = Π_j G_j(x_j, y_j; t)` of the trap.
pub fn kernel_d(x: &[f64], y: &[f64], t: f64, trap: &TrapModel) -> Result<f64> {
    check_time(t)?;
    let axes = trap.axes();
    check_dim(axes.len(), x.len())?;
    check_dim(axes.len(), y.len())?;
    let c = &trap.consts;
    let mut ln = 0.0;
    for (j, a) in axes.iter().enumerate() {
        ln += ln_mehler(x[j], y[j], a.ln_q(c), a.ln_energy_time(t, c));
    }
    Ok(ln.exp())
}

/// `ln Tr e^{−tH} = −Σ_j ln(2 sinh(ħω_jκ_j t/2))`.
pub fn ln_semigroup_trace(t: f64, trap: &TrapModel) -> Result<f64> {
    check_time(t)?;
    let c = &trap.consts;
    Ok(trap
        .axes()
        .iter()
        .map(|a| {
            let ln_x = a.ln_energy_time(t, c);
            let half = 0.5 * ln_x.exp();
            // 2 sinh(X/2) = e^{X/2}(1 − e^{−X})
            -(half + ln_one_minus_exp_neg(ln_x))
        })
        .sum())
}

/// Trace of the semigroup, `Π_j (2 sinh(ħω_jκ_j t/2))^{−1}`.
pub fn semigroup_trace(t: f64, trap: &TrapModel) -> Result<f64> {
    Ok(ln_semigroup_trace(t, trap)?.exp())
}

/// The same trace written as `e^{−E₀t} Π_j (1 − e^{−ħω_jκ_j t})^{−1}`.
pub fn semigroup_trace_ground_form(t: f64, trap: &TrapModel) -> Result<f64> {
    check_time(t)?;
    let c = &trap.consts;
    let prod: f64 = trap
        .axes()
        .iter()
        .map(|a| 1.0 / -(-(c.hbar * a.omega * a.kappa() * t)).exp_m1())
        .product();
    Ok((-trap.ground_energy() * t).exp() * prod)
}

/// Upper bound `m^{d/2}(2πħ²t)^{−d/2}` on the `d`-dimensional heat kernel.
pub fn heat_bound(t: f64, d: usize, consts: &PhysicalConstants) -> Result<f64> {
    check_time(t)?;
    Ok((consts.mass / (2.0 * std::f64::consts::PI * consts.hbar * consts.hbar * t)).powf(d as f64 / 2.0))
}

/// Bound `Π_j √(mω_jκ_j/(πħ)) · e^{−E₀t} / Π_j (1−e^{−2ħω_jκ_j t})^{1/2}` on the
/// trap kernel (for isotropic traps `(mω₀κ/πħ)^{d/2} e^{−E₀t}/(1−e^{−2ħω₀κt})^{d/2}`).
pub fn oscillator_bound(t: f64, trap: &TrapModel) -> Result<f64> {
    check_time(t)?;
    let c = &trap.consts;
    let ln: f64 = trap
        .axes()
        .iter()
        .map(|a| {
            let ln_x = a.ln_energy_time(t, c);
            0.5 * (a.ln_q(c) - LN_PI) - 0.5 * ln_one_minus_exp_neg(ln_x + std::f64::consts::LN_2)
        })
        .sum();
    Ok((ln - trap.ground_energy() * t).exp())
}

/// Elementary inequalities among hyperbolic and exponential functions.
///
/// Each function returns `(lower, value, upper)` so callers can assert
/// `lower ≤ value ≤ upper` (strictly where documented).
pub mod inequalities {
    /// `1 ≤ cosh x ≤ e^x` for `x ≥ 0`.
    pub fn cosh_bounds(x: f64) -> (f64, f64, f64) {
        (1.0, x.cosh(), x.exp())
    }

    /// `x ≤ sinh x ≤ e^x/2` for `x ≥ 0`.
    pub fn sinh_bounds(x: f64) -> (f64, f64, f64) {
        (x, x.sinh(), 0.5 * x.exp())
    }

    /// `0 ≤ tanh x ≤ 1` for `x ≥ 0`.
    pub fn tanh_bounds(x: f64) -> (f64, f64, f64) {
        (0.0, x.tanh(), 1.0)
    }

    /// `1/x ≤ coth x ≤ (1+x)/x` for `x > 0`.
    pub fn coth_bounds(x: f64) -> (f64, f64, f64) {
        (1.0 / x, 1.0 / x.tanh(), (1.0 + x) / x)
    }

    /// `x/(1+x) < 1 − e^{−x} < x` for `x > 0`.
    pub fn one_minus_exp_bounds(x: f64) -> (f64, f64, f64) {
        (x / (1.0 + x), -(-x).exp_m1(), x)
    }

    /// `x ≤ e^x − 1 ≤ x e^x` for `x ≥ 0`.
    pub fn expm1_bounds(x: f64) -> (f64, f64, f64) {
        (x, x.exp_m1(), x * x.exp())
    }

    /// `x^p e^{−qx} ≤ (2p/(e q))^p e^{−qx/2}` for `x ≥ 0`, `p, q > 0`
    /// (returned with lower bound `0`).
    pub fn power_exponential_bound(x: f64, p: f64, q: f64) -> (f64, f64, f64) {
        let value = x.powf(p) * (-q * x).exp();
        let upper = (2.0 * p / (std::f64::consts::E * q)).powf(p) * (-q * x / 2.0).exp();
        (0.0, value, upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mehler_reduces_to_closed_form() {
        let c = PhysicalConstants::default();
        // direct formula
        let (x, y, t, w): (f64, f64, f64, f64) = (0.3, -0.7, 0.9, 1.3);
        let s = (w * t).sinh();
        let direct = (w / (2.0 * std::f64::consts::PI * s)).sqrt()
            * (-(w / 4.0) * ((x + y).powi(2) * (w * t / 2.0).tanh() + (x - y).powi(2) / (w * t / 2.0).tanh())).exp();
        let v = mehler_kernel_1d(x, y, t, w, &c).unwrap();
        assert!((v - direct).abs() < 1e-14 * direct);
    }

    #[test]
    fn excess_is_difference_of_logs() {
        let lq = 0.3f64.ln();
        for &lx in &[-5.0, -1.0, 0.0, 1.5, 3.0] {
            let a = ln_oscillator_factor(0.4, -1.1, lq, lx) - ln_ground_dyad(0.4, -1.1, lq);
            let b = ln_oscillator_excess(0.4, -1.1, lq, lx);
            assert!((a - b).abs() < 1e-12, "{lx}: {a} {b}");
        }
    }
}
