//! Quasi-one- and quasi-two-dimensional traps.
//!
//! In the quasi-1D trap the longitudinal stiffness `κ₁ = κe^{−κ_c²/κ²}`
//! vanishes much faster than the transverse one, which opens a window
//! `ν_c < ν ≤ ν_m` of generalized condensation into a band of longitudinal
//! levels; the corresponding mesoscopic loop sum grows like `e^{c/κ²}` and is
//! handled in log form. In the quasi-2D trap the transverse stiffness
//! `κ⊥ = κe^{−√(κ_c/κ)}` is the small one and mesoscopic loops leave a finite
//! additional term in the non-condensate density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{check_dim, TrapGeometry, TrapModel};
use crate::logspace::LogValue;
use crate::rdm::{loop_cutoffs, noncondensate_at, open_trap_series, rdm_range, DEFAULT_CHI};
use crate::series::SeriesControl;
use crate::specfun::{de_broglie, zeta};
use crate::thermo::{nu_critical_trap, nu_m, solve_mu, CanonicalTarget, GrandCanonicalPoint, CRITICAL_WINDOW};

/// Regime tag of an anisotropic trap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnisotropicTag {
    /// `ν < ν_c`.
    Subcritical,
    /// Quasi-1D, `ν_c < ν < ν_m`: generalized condensation only.
    GbecOnly,
    /// Quasi-1D, `ν ≥ ν_m`: generalized and ordinary condensation coexist.
    Coexistence,
    /// Quasi-2D, `ν > ν_c`: ordinary condensation, no generalized one.
    Supercritical,
}

/// Regime of an anisotropic state with its reduced number `η = ν/ν_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnisotropicRegime {
    /// Regime tag.
    pub tag: AnisotropicTag,
    /// `η = ν/ν_c(β)`.
    pub eta: f64,
}

fn require_aniso(trap: &TrapModel) -> Result<()> {
    if trap.is_isotropic() {
        Err(Error::Model("operation requires a quasi-1D or quasi-2D trap".into()))
    } else {
        Ok(())
    }
}

fn require_q1d(trap: &TrapModel) -> Result<()> {
    match trap.geometry {
        TrapGeometry::Quasi1D { .. } => Ok(()),
        _ => Err(Error::Model("operation requires a quasi-1D trap".into())),
    }
}

fn require_q2d(trap: &TrapModel) -> Result<()> {
    match trap.geometry {
        TrapGeometry::Quasi2D { .. } => Ok(()),
        _ => Err(Error::Model("operation requires a quasi-2D trap".into())),
    }
}

fn nuc_of(beta: f64, trap: &TrapModel) -> Result<f64> {
    nu_critical_trap(beta, trap)?
        .finite()
        .ok_or_else(|| Error::Model("anisotropic traps are three-dimensional".into()))
}

/// Classifies `(β, ν)`; states within `10⁻⁶ ν_c` of `ν_c` or `ν_m` are
/// rejected with [`Error::Regime`].
pub fn classify(target: &CanonicalTarget, trap: &TrapModel) -> Result<AnisotropicRegime> {
    require_aniso(trap)?;
    let t = CanonicalTarget::new(target.beta, target.nu)?;
    let nuc = nuc_of(t.beta, trap)?;
    let eta = t.nu / nuc;
    let window = CRITICAL_WINDOW * nuc;
    if (t.nu - nuc).abs() < window {
        return Err(Error::Regime(format!(
            "ν = {} lies on the critical boundary ν_c = {nuc}",
            t.nu
        )));
    }
    let tag = if t.nu < nuc {
        AnisotropicTag::Subcritical
    } else {
        match trap.geometry {
            TrapGeometry::Quasi1D { .. } => {
                let num = nu_m(t.beta, trap)?;
                if (t.nu - num).abs() < window {
                    return Err(Error::Regime(format!("ν = {} lies on the boundary ν_m = {num}", t.nu)));
                }
                if t.nu < num {
                    AnisotropicTag::GbecOnly
                } else {
                    AnisotropicTag::Coexistence
                }
            }
            _ => AnisotropicTag::Supercritical,
        }
    };
    Ok(AnisotropicRegime { tag, eta })
}

/// Leading-order size of the quasi-1D mesoscopic loop sum,
/// `prefactor · e^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MesoPrediction {
    /// `g₃(1)(η−1)/(2(ħω⊥κβ)²)` for `ν ≤ ν_m`, `ω_c²/(2ω⊥²κ²)` above.
    pub exponent: f64,
    /// `ln[(1/λ_β)·mω⊥κ⊥/(√π ħ)]`.
    pub ln_prefactor_wavelength: f64,
    /// `ln[κ⊥/√(2π²β)]`, the same amplitude written in natural units.
    pub ln_prefactor_natural: f64,
}

impl MesoPrediction {
    /// Predicted `ln` of the mesoscopic sum (wavelength form of the prefactor).
    pub fn ln_value(&self) -> f64 {
        self.ln_prefactor_wavelength + self.exponent
    }
}

/// Predicted growth of the quasi-1D mesoscopic loop sum (`ν > ν_c`).
pub fn meso_q1d_prediction(target: &CanonicalTarget, trap: &TrapModel) -> Result<MesoPrediction> {
    require_q1d(trap)?;
    let t = CanonicalTarget::new(target.beta, target.nu)?;
    let (kappa, kappa_c, omega_perp) = match trap.geometry {
        TrapGeometry::Quasi1D {
            kappa,
            kappa_c,
            omega_perp,
            ..
        } => (kappa, kappa_c, omega_perp),
        _ => unreachable!(),
    };
    let nuc = nuc_of(t.beta, trap)?;
    if t.nu <= nuc {
        return Err(Error::Regime("mesoscopic growth is defined above ν_c".into()));
    }
    let c = &trap.consts;
    let exponent = if t.nu <= nu_m(t.beta, trap)? {
        let eta = t.nu / nuc;
        zeta(3.0)? * (eta - 1.0) / (2.0 * (c.hbar * omega_perp * kappa * t.beta).powi(2))
    } else {
        kappa_c * kappa_c / (2.0 * kappa * kappa)
    };
    let (_, ln_kp) = trap.ln_kappa_components();
    let lam = de_broglie(t.beta, c)?;
    let ln_w = (c.mass * omega_perp / (std::f64::consts::PI.sqrt() * c.hbar * lam)).ln() + ln_kp;
    let ln_n = ln_kp - (2.0 * std::f64::consts::PI.powi(2) * t.beta).sqrt().ln();
    Ok(MesoPrediction {
        exponent,
        ln_prefactor_wavelength: ln_w,
        ln_prefactor_natural: ln_n,
    })
}

/// Quasi-1D mesoscopic loop sum over `⌊κ^{−σ}⌋ < l ≤ ⌊e^{κ_c²/κ²}⌋` at a
/// grand-canonical point, in log form.
pub fn meso_q1d_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<LogValue> {
    require_q1d(&pt.trap)?;
    let (ln_n, ln_m) = loop_cutoffs(&pt.trap, ctl, DEFAULT_CHI)?;
    let first = if ln_n < 36.0 {
        (ln_n.exp().round() + 1.0).ln()
    } else {
        ln_n
    };
    Ok(rdm_range(x, y, pt, first, ln_m, ctl)?.0)
}

/// Quasi-1D mesoscopic loop sum with `μ̄` solved from `ν`.
pub fn meso_q1d(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<LogValue> {
    require_q1d(trap)?;
    check_dim(3, x.len())?;
    check_dim(3, y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    meso_q1d_at(x, y, &sol.point, ctl)
}

/// Quasi-2D mesoscopic contribution and its split at `χ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdditionalTerm {
    /// Ground-subtracted mesoscopic sum over `N < l ≤ M̃(χ=2)`.
    pub meso: f64,
    /// Ground-subtracted sum over `N < l ≤ M̃(χ=1)`.
    pub first_part: f64,
    /// Ground-subtracted sum over `M̃(χ=1) < l ≤ M̃(χ=2)`.
    pub second_part: f64,
    /// Raw (unsubtracted) mesoscopic sum over `N < l ≤ M̃(χ=2)`.
    pub meso_raw: f64,
    /// Closed form `2√(mω_c/(πħ))/λ_β²`, `ω_c = ω₁κ_c`.
    pub predicted_limit: f64,
}

/// Additional-term constant `2√(mω_c/(πħ))/λ_β²` of the quasi-2D trap.
pub fn additional_q2d_prediction(beta: f64, trap: &TrapModel) -> Result<f64> {
    require_q2d(trap)?;
    let (kappa_c, omega1) = match trap.geometry {
        TrapGeometry::Quasi2D { kappa_c, omega1, .. } => (kappa_c, omega1),
        _ => unreachable!(),
    };
    let c = &trap.consts;
    let lam = de_broglie(beta, c)?;
    Ok(2.0 * (c.mass * omega1 * kappa_c / (std::f64::consts::PI * c.hbar)).sqrt() / (lam * lam))
}

/// Quasi-2D mesoscopic sums at a grand-canonical point.
pub fn additional_q2d_at(
    x: &[f64],
    y: &[f64],
    pt: &GrandCanonicalPoint,
    ctl: &SeriesControl,
) -> Result<AdditionalTerm> {
    require_q2d(&pt.trap)?;
    let (ln_n, ln_m2) = loop_cutoffs(&pt.trap, ctl, DEFAULT_CHI)?;
    let (_, ln_m1) = loop_cutoffs(&pt.trap, ctl, 1.0)?;
    let next = |v: f64| if v < 36.0 { (v.exp().round() + 1.0).ln() } else { v };
    let (raw, meso) = rdm_range(x, y, pt, next(ln_n), ln_m2, ctl)?;
    let (_, a) = rdm_range(x, y, pt, next(ln_n), ln_m1, ctl)?;
    let (_, b) = rdm_range(x, y, pt, next(ln_m1), ln_m2, ctl)?;
    Ok(AdditionalTerm {
        meso: meso.value(),
        first_part: a.value(),
        second_part: b.value(),
        meso_raw: raw.value(),
        predicted_limit: additional_q2d_prediction(pt.beta, &pt.trap)?,
    })
}

/// Quasi-2D mesoscopic sums with `μ̄` solved from `ν`.
pub fn additional_q2d(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<AdditionalTerm> {
    require_q2d(trap)?;
    check_dim(3, x.len())?;
    check_dim(3, y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    additional_q2d_at(x, y, &sol.point, ctl)
}

/// Ground-state-subtracted RDM of an anisotropic trap.
pub fn noncondensate_aniso(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<f64> {
    require_aniso(trap)?;
    check_dim(3, x.len())?;
    check_dim(3, y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    noncondensate_at(x, y, &sol.point, ctl)
}

/// Closed-form supercritical quasi-2D non-condensate limit
/// `2√(mω_c/(πħ))/λ_β² + λ_β^{−3} Σ_l l^{−3/2} e^{−π|x−y|²/(λ_β² l)}`.
pub fn noncondensate_q2d_limit(x: &[f64], y: &[f64], beta: f64, trap: &TrapModel, ctl: &SeriesControl) -> Result<f64> {
    require_q2d(trap)?;
    check_dim(3, x.len())?;
    check_dim(3, y.len())?;
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(additional_q2d_prediction(beta, trap)? + open_trap_series(r2, beta, 0.0, 3, &trap.consts, ctl)?)
}
