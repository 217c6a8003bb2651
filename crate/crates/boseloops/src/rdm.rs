//! Reduced density matrix of the trapped gas.
//!
//! The RDM is evaluated in its loop form
//! `ρ(x, y) = Σ_l e^{lβμ̄} G(x, y; lβ)` with the Mehler kernel written as the
//! ground-state dyad times a correction that tends to one for long loops, so
//! the macroscopic loops are summed as a closed geometric series in
//! `e^{−βΔ}`. The eigenfunction form is provided as an independent oracle.
//! The module also offers the loop decomposition into short, mesoscopic and
//! macroscopic cycles, the open-trap limits and δ-scaled local densities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{DivergenceLaw, ExtendedReal};
use crate::kernels::{check_dim, ln_ground_dyad, ln_oscillator_excess, ln_oscillator_factor, TrapGeometry, TrapModel};
use crate::logspace::{ln_expm1, LogValue};
use crate::quad;
use crate::series::{sum_loops, LoopTerm, SeriesControl, Tail};
use crate::specfun::{bose_exp, de_broglie, hermite_functions, PhysicalConstants};
use crate::thermo::{
    mu_open_trap, nu_critical, regime, solve_mu, CanonicalTarget, GrandCanonicalPoint, Regime, TruncatedSum,
    CRITICAL_WINDOW,
};

/// Per-axis data of a loop summand: `(x_j, y_j, ln q_j, ln a_j)` with
/// `a_j = βħω_jκ_j`.
#[derive(Debug, Clone, Copy)]
struct AxisPoint {
    x: f64,
    y: f64,
    ln_q: f64,
    ln_a: f64,
}

fn axis_points(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint) -> Result<Vec<AxisPoint>> {
    let axes = pt.trap.axes();
    check_dim(axes.len(), x.len())?;
    check_dim(axes.len(), y.len())?;
    let c = &pt.trap.consts;
    Ok(axes
        .iter()
        .enumerate()
        .map(|(j, a)| AxisPoint {
            x: x[j],
            y: y[j],
            ln_q: a.ln_q(c),
            ln_a: a.ln_energy_time(pt.beta, c),
        })
        .collect())
}

/// First loop index beyond which every axis factor equals its ground dyad to
/// double precision.
fn dyad_onset(points: &[AxisPoint]) -> f64 {
    points
        .iter()
        .map(|p| {
            let spread = p.ln_q.exp() * ((p.x + p.y).powi(2) + (p.x - p.y).powi(2));
            (40.0 + spread.ln_1p()).ln() - p.ln_a
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Loop summand `e^{−lβΔ} Π_j e^{X_j/2} G_j(x_j, y_j; lβ)`.
struct RdmTerm {
    ln_c: f64,
    points: Vec<AxisPoint>,
    ln_dyad: f64,
}

impl RdmTerm {
    fn new(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint) -> Result<Self> {
        let points = axis_points(x, y, pt)?;
        let ln_dyad = points.iter().map(|p| ln_ground_dyad(p.x, p.y, p.ln_q)).sum();
        Ok(RdmTerm {
            ln_c: pt.ln_beta_gap(),
            points,
            ln_dyad,
        })
    }
}

impl LoopTerm for RdmTerm {
    fn ln_term(&self, u: f64) -> (f64, f64) {
        let mut v = -(self.ln_c + u).exp();
        for p in &self.points {
            v += ln_oscillator_factor(p.x, p.y, p.ln_q, p.ln_a + u);
        }
        (v, 1.0)
    }

    fn tail(&self) -> Tail {
        Tail::Geometric {
            u_start: dyad_onset(&self.points),
            ln_amp: self.ln_dyad,
            sign: 1.0,
            ln_rate: self.ln_c,
        }
    }
}

/// Ground-state-subtracted summand `e^{−lβΔ}[Π_j e^{X_j/2}G_j − Π_j ψ₀ψ₀]`.
struct NoncondTerm {
    inner: RdmTerm,
}

impl LoopTerm for NoncondTerm {
    fn ln_term(&self, u: f64) -> (f64, f64) {
        let mut delta = 0.0;
        for p in &self.inner.points {
            delta += ln_oscillator_excess(p.x, p.y, p.ln_q, p.ln_a + u);
        }
        if delta == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        let ln_m = if delta > 30.0 {
            delta + (-(-delta).exp()).ln_1p()
        } else {
            delta.exp_m1().abs().ln()
        };
        (-(self.inner.ln_c + u).exp() + self.inner.ln_dyad + ln_m, delta.signum())
    }

    fn tail(&self) -> Tail {
        Tail::Vanishing {
            u_start: dyad_onset(&self.inner.points),
        }
    }
}

/// Loop-form RDM `ρ(x, y)` at a grand-canonical point.
pub fn rdm_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    Ok(rdm_log_at(x, y, pt, ctl)?.value())
}

/// Loop-form RDM as a [`LogValue`] (useful when the condensate makes it overflow).
pub fn rdm_log_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<LogValue> {
    sum_loops(&RdmTerm::new(x, y, pt)?, 0.0, f64::INFINITY, ctl)
}

/// Loop-form RDM `ρ_{∞,κ}(x, y; β, ν)` with `μ̄` solved from `ν`.
pub fn rdm_loops(x: &[f64], y: &[f64], target: &CanonicalTarget, trap: &TrapModel, ctl: &SeriesControl) -> Result<f64> {
    check_dim(trap.dim(), x.len())?;
    check_dim(trap.dim(), y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    rdm_at(x, y, &sol.point, ctl)
}

/// Rescaled RDM `|κ|^{d/2} ρ(x, y)`.
pub fn rdm_rescaled(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_dim(trap.dim(), x.len())?;
    check_dim(trap.dim(), y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    rdm_rescaled_at(x, y, &sol.point, ctl)
}

/// Rescaled RDM at a grand-canonical point.
pub fn rdm_rescaled_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    Ok(rdm_log_at(x, y, pt, ctl)?
        .scale_ln(0.5 * pt.trap.ln_kappa_volume())
        .value())
}

/// Ground-state contribution `Ψ₀(x)Ψ₀(y)/(e^{βΔ} − 1)`.
pub fn ground_term_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint) -> Result<f64> {
    let t = RdmTerm::new(x, y, pt)?;
    Ok((t.ln_dyad - ln_expm1(t.ln_c)).exp())
}

/// Non-condensate RDM `ρ(x, y) − Ψ₀(x)Ψ₀(y)/(e^{βΔ} − 1)` at a
/// grand-canonical point, summed term by term without cancellation.
pub fn noncondensate_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    let term = NoncondTerm {
        inner: RdmTerm::new(x, y, pt)?,
    };
    Ok(sum_loops(&term, 0.0, f64::INFINITY, ctl)?.value())
}

/// Non-condensate RDM with `μ̄` solved from `ν`.
pub fn noncondensate(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_dim(trap.dim(), x.len())?;
    check_dim(trap.dim(), y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    noncondensate_at(x, y, &sol.point, ctl)
}

/// Eigenfunction-sum RDM `Σ_s Ψ_s(x)Ψ_s(y)/(e^{β(E_s−μ)} − 1)` with every
/// quantum number `s_j ≤ s_max`, and a bound on the neglected states.
pub fn rdm_eigen_at(x: &[f64], y: &[f64], pt: &GrandCanonicalPoint, s_max: usize) -> Result<TruncatedSum> {
    let points = axis_points(x, y, pt)?;
    let d = points.len();
    if s_max == 0 {
        return Err(Error::domain("s_max must be positive"));
    }
    if (s_max as f64 + 1.0).powi(d as i32) > 2e8 {
        return Err(Error::domain("eigenfunction sum too large; lower s_max"));
    }
    // Per-axis products ψ_s(x_j)ψ_s(y_j) and level spacings a_j.
    let prods: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let q = p.ln_q.exp();
            let fx = hermite_functions(s_max, p.x, q);
            let fy = hermite_functions(s_max, p.y, q);
            fx.iter().zip(&fy).map(|(a, b)| a * b).collect()
        })
        .collect();
    let a: Vec<f64> = points.iter().map(|p| p.ln_a.exp()).collect();
    let c = pt.ln_beta_gap().exp();
    let mut sum = 0.0;
    let mut idx = vec![0usize; d];
    loop {
        let mut e = c;
        let mut w = 1.0;
        for j in 0..d {
            e += a[j] * idx[j] as f64;
            w *= prods[j][idx[j]];
        }
        sum += w / e.exp_m1();
        // odometer
        let mut j = 0;
        while j < d {
            idx[j] += 1;
            if idx[j] <= s_max {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == d {
            break;
        }
    }
    // |ψ_s(x)| ≤ (q/π)^{1/4}; states outside the box have some s_j > s_max.
    let amp: f64 = points
        .iter()
        .map(|p| (p.ln_q.exp() / std::f64::consts::PI).sqrt())
        .product();
    let amin = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let y0 = c + amin * (s_max + 1) as f64;
    let geo = 1.0 / -(-amin).exp_m1();
    let tail = amp * d as f64 * (-y0).exp() / -(-y0).exp_m1() * geo.powi(d as i32);
    Ok(TruncatedSum {
        value: sum,
        tail_bound: tail,
    })
}

/// Eigenfunction-sum RDM with `μ̄` solved from `ν`; fails with
/// [`Error::TruncationWarning`] when the tail bound exceeds `ctl.abs_tol`.
pub fn rdm_eigen(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    s_max: usize,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_dim(trap.dim(), x.len())?;
    check_dim(trap.dim(), y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    let r = rdm_eigen_at(x, y, &sol.point, s_max)?;
    if r.tail_bound > ctl.abs_tol {
        return Err(Error::TruncationWarning {
            value: r.value,
            tail_bound: r.tail_bound,
        });
    }
    Ok(r.value)
}

/// Partition of the RDM loop series into short, mesoscopic and macroscopic
/// cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopDecomposition {
    /// Last short loop `N = ⌊κ^{−σ}⌋`.
    pub short_cutoff: u64,
    /// Last mesoscopic loop `M`; `None` when it exceeds `2^62` (effectively infinite).
    pub macro_cutoff: Option<u64>,
    /// `ln M`.
    pub ln_macro_cutoff: f64,
    /// Σ over `1 ≤ l ≤ N`.
    pub short_sum: f64,
    /// Σ over `N < l ≤ M` (zero when `M = N`).
    pub meso_sum: f64,
    /// Σ over `l > M`.
    pub macro_sum: f64,
    /// `short_sum + meso_sum + macro_sum`.
    pub total: f64,
    /// The mesoscopic sum in log form (it may exceed the double range).
    pub meso_log: LogValue,
    /// Ground-state term `Ψ₀(x)Ψ₀(y)/(e^{βΔ} − 1)`.
    pub ground_term: f64,
    /// Short sum with the ground-state dyad subtracted from every loop.
    pub short_noncondensate: f64,
    /// Mesoscopic sum with the ground-state dyad subtracted.
    pub meso_noncondensate: f64,
    /// Macroscopic sum with the ground-state dyad subtracted.
    pub macro_noncondensate: f64,
}

/// `ln ⌊e^{v}⌋`, exact while the floor is an exactly representable integer.
fn ln_floor(ln_v: f64) -> f64 {
    if ln_v < 36.0 {
        ln_v.exp().floor().max(1.0).ln()
    } else {
        ln_v
    }
}

fn ln_next(ln_v: f64) -> f64 {
    if ln_v < 36.0 {
        (ln_v.exp().round() + 1.0).ln()
    } else {
        ln_v
    }
}

fn cutoff_int(ln_v: f64) -> Option<u64> {
    if ln_v < 62.0 * std::f64::consts::LN_2 {
        Some(ln_v.exp().round() as u64)
    } else {
        None
    }
}

/// Default χ of the quasi-2D mesoscopic cutoff.
pub const DEFAULT_CHI: f64 = 2.0;

/// `(ln N, ln M)` for the trap at `σ` (and `σ₂`, χ for quasi-2D traps).
pub fn loop_cutoffs(trap: &TrapModel, ctl: &SeriesControl, chi: f64) -> Result<(f64, f64)> {
    let kappa = trap.kappa();
    if !(ctl.sigma > 0.0) {
        return Err(Error::domain("sigma must be positive"));
    }
    let ln_n = ln_floor(-ctl.sigma * kappa.ln());
    let ln_m = match trap.geometry {
        TrapGeometry::Isotropic { .. } => ln_n,
        TrapGeometry::Quasi1D { kappa_c, .. } => ln_floor(kappa_c * kappa_c / (kappa * kappa)),
        TrapGeometry::Quasi2D { kappa_c, .. } => {
            if !(chi > 0.0) {
                return Err(Error::domain("chi must be positive"));
            }
            let s2 = ctl.sigma2.unwrap_or(0.0);
            if s2 < 0.0 {
                return Err(Error::domain("sigma2 must be nonnegative"));
            }
            ln_floor(-s2 * kappa.ln() + chi * (kappa_c / kappa).sqrt())
        }
    };
    Ok((ln_n, ln_m.max(ln_n)))
}

/// Sum of the RDM loops in the inclusive index range `[e^{ln_first}, e^{ln_last}]`,
/// raw and ground-subtracted.
pub(crate) fn rdm_range(
    x: &[f64],
    y: &[f64],
    pt: &GrandCanonicalPoint,
    ln_first: f64,
    ln_last: f64,
    ctl: &SeriesControl,
) -> Result<(LogValue, LogValue)> {
    let raw = sum_loops(&RdmTerm::new(x, y, pt)?, ln_first, ln_last, ctl)?;
    let sub = sum_loops(
        &NoncondTerm {
            inner: RdmTerm::new(x, y, pt)?,
        },
        ln_first,
        ln_last,
        ctl,
    )?;
    Ok((raw, sub))
}

/// Loop decomposition at a grand-canonical point with an explicit χ.
pub fn loop_decompose_at(
    x: &[f64],
    y: &[f64],
    pt: &GrandCanonicalPoint,
    ctl: &SeriesControl,
    chi: f64,
) -> Result<LoopDecomposition> {
    ctl.validate()?;
    let (ln_n, ln_m) = loop_cutoffs(&pt.trap, ctl, chi)?;
    let (short, short_nc) = rdm_range(x, y, pt, 0.0, ln_n, ctl)?;
    let (meso, meso_nc) = if ln_m > ln_n {
        rdm_range(x, y, pt, ln_next(ln_n), ln_m, ctl)?
    } else {
        (LogValue::ZERO, LogValue::ZERO)
    };
    let (mac, mac_nc) = rdm_range(x, y, pt, ln_next(ln_m), f64::INFINITY, ctl)?;
    let (s, m, a) = (short.value(), meso.value(), mac.value());
    Ok(LoopDecomposition {
        short_cutoff: cutoff_int(ln_n).unwrap_or(u64::MAX),
        macro_cutoff: cutoff_int(ln_m),
        ln_macro_cutoff: ln_m,
        short_sum: s,
        meso_sum: m,
        macro_sum: a,
        total: s + m + a,
        meso_log: meso,
        ground_term: ground_term_at(x, y, pt)?,
        short_noncondensate: short_nc.value(),
        meso_noncondensate: meso_nc.value(),
        macro_noncondensate: mac_nc.value(),
    })
}

/// Loop decomposition with `μ̄` solved from `ν` (χ = 2 for quasi-2D traps).
pub fn loop_decompose(
    x: &[f64],
    y: &[f64],
    target: &CanonicalTarget,
    trap: &TrapModel,
    ctl: &SeriesControl,
) -> Result<LoopDecomposition> {
    check_dim(trap.dim(), x.len())?;
    check_dim(trap.dim(), y.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    loop_decompose_at(x, y, &sol.point, ctl, DEFAULT_CHI)
}

/// Open-trap summand `l^{−d/2} e^{−lb} e^{−s/l}`.
struct OpenTerm {
    half_d: f64,
    b: f64,
    s: f64,
}

impl LoopTerm for OpenTerm {
    fn ln_term(&self, u: f64) -> (f64, f64) {
        (-self.half_d * u - self.b * u.exp() - self.s * (-u).exp(), 1.0)
    }

    fn tail(&self) -> Tail {
        let u = if self.b > 0.0 { (800.0 / self.b).ln() } else { 120.0 };
        Tail::Vanishing {
            u_start: u.clamp(0.0, 120.0).max((1.0 + self.s).ln()),
        }
    }
}

/// `λ_β^{−d} Σ_l l^{−d/2} e^{lβμ} e^{−π|x−y|²/(λ_β² l)}` for `μ ≤ 0`.
pub fn open_trap_series(
    r2: f64,
    beta: f64,
    mu: f64,
    d: usize,
    consts: &PhysicalConstants,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(mu <= 0.0) {
        return Err(Error::domain("open-trap chemical potential must be nonpositive"));
    }
    let lam = de_broglie(beta, consts)?;
    let term = OpenTerm {
        half_d: 0.5 * d as f64,
        b: -beta * mu,
        s: std::f64::consts::PI * r2 / (lam * lam),
    };
    if term.b == 0.0 && d <= 2 {
        return Err(Error::domain("open-trap series diverges at μ = 0 for d ≤ 2"));
    }
    Ok(sum_loops(&term, 0.0, f64::INFINITY, ctl)?.value() / lam.powi(d as i32))
}

/// Condensate value `2^{d/2}(ħω₀β)^{d/2} λ_β^{−d} (ν − ν_c)` of the rescaled RDM.
pub fn condensate_limit(beta: f64, nu: f64, d: usize, consts: &PhysicalConstants) -> Result<f64> {
    let nuc = nu_critical(beta, d, consts)?
        .finite()
        .ok_or_else(|| Error::Regime("no condensate in one dimension".into()))?;
    let lam = de_broglie(beta, consts)?;
    let h = consts.hbar * consts.omega0 * beta;
    Ok((2.0 * h).powf(0.5 * d as f64) / lam.powi(d as i32) * (nu - nuc).max(0.0))
}

fn dist2(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Open-trap RDM `lim_{κ↓0} ρ(x, y)`: finite below criticality (and at it for
/// `d = 3`), otherwise a divergence descriptor.
pub fn open_trap_rdm(
    x: &[f64],
    y: &[f64],
    beta: f64,
    nu: f64,
    d: usize,
    consts: &PhysicalConstants,
    ctl: &SeriesControl,
) -> Result<ExtendedReal> {
    if !(1..=3).contains(&d) {
        return Err(Error::domain(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    check_dim(d, x.len())?;
    check_dim(d, y.len())?;
    let target = CanonicalTarget::new(beta, nu)?;
    let r2 = dist2(x, y);
    let lam = de_broglie(beta, consts)?;
    match nu_critical(beta, d, consts)?.finite() {
        None => {
            let mu = mu_open_trap(beta, nu, d, consts)?;
            Ok(ExtendedReal::Finite(open_trap_series(r2, beta, mu, d, consts, ctl)?))
        }
        Some(nuc) => {
            let critical = (target.nu - nuc).abs() < CRITICAL_WINDOW * nuc;
            if nu < nuc && !critical {
                let mu = mu_open_trap(beta, nu, d, consts)?;
                return Ok(ExtendedReal::Finite(open_trap_series(r2, beta, mu, d, consts, ctl)?));
            }
            if d == 2 {
                return Ok(ExtendedReal::Divergent(DivergenceLaw::Logarithmic {
                    coefficient: 1.0 / (lam * lam),
                }));
            }
            if critical {
                return Ok(ExtendedReal::Finite(open_trap_series(r2, beta, 0.0, d, consts, ctl)?));
            }
            Ok(ExtendedReal::Divergent(DivergenceLaw::PowerLaw {
                coefficient: condensate_limit(beta, nu, d, consts)?,
                exponent: 0.5 * d as f64,
            }))
        }
    }
}

/// Leading growth `λ_β^{−2} ln(1/(ħω₀κβ))` of the two-dimensional
/// non-condensate density at and above criticality.
pub fn log_law_prediction(kappa: f64, beta: f64, consts: &PhysicalConstants) -> Result<f64> {
    let lam = de_broglie(beta, consts)?;
    Ok((1.0 / (consts.hbar * consts.omega0 * kappa * beta)).ln() / (lam * lam))
}

/// Semiclassical local density `λ_β^{−d} g_{d/2}(e^{β(μ − V(x))})`,
/// `V(x) = mω₀²|x|²/2`.
pub fn semiclassical_density(x: &[f64], beta: f64, mu: f64, d: usize, consts: &PhysicalConstants) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::domain(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    check_dim(d, x.len())?;
    let v = 0.5 * consts.mass * consts.omega0 * consts.omega0 * x.iter().map(|a| a * a).sum::<f64>();
    let a = beta * (v - mu);
    if !(a > 0.0) {
        return Err(Error::domain("semiclassical density requires μ < V(x)"));
    }
    let lam = de_broglie(beta, consts)?;
    Ok(bose_exp(0.5 * d as f64, a)? / lam.powi(d as i32))
}

/// Open-trap δ-scaled local density (`rescaled = false`) or rescaled density
/// (`rescaled = true`) at `x ≠ 0` for an isotropic trap.
pub fn theorem2_limit(
    x: &[f64],
    delta: f64,
    beta: f64,
    nu: f64,
    d: usize,
    consts: &PhysicalConstants,
    rescaled: bool,
) -> Result<ExtendedReal> {
    check_delta(delta)?;
    check_dim(d, x.len())?;
    let target = CanonicalTarget::new(beta, nu)?;
    let lam = de_broglie(beta, consts)?;
    let ld = lam.powi(d as i32);
    let x2: f64 = x.iter().map(|a| a * a).sum();
    let v = 0.5 * beta * consts.mass * consts.omega0 * consts.omega0 * x2;
    let half = 0.5 * d as f64;
    let nuc = nu_critical(beta, d, consts)?.finite();
    let sub = match nuc {
        None => true,
        Some(c) => nu < c && (nu - c).abs() >= CRITICAL_WINDOW * c,
    };
    if sub {
        if rescaled {
            return Ok(ExtendedReal::Finite(0.0));
        }
        let a = -beta * mu_open_trap(beta, target.nu, d, consts)?;
        let a = if delta == 1.0 { a + v } else { a };
        return Ok(ExtendedReal::Finite(bose_exp(half, a)? / ld));
    }
    let cond = condensate_limit(beta, nu, d, consts)?;
    let profile = if delta < 0.5 {
        cond
    } else if delta == 0.5 {
        cond * (-consts.mass * consts.omega0 * x2 / consts.hbar).exp()
    } else {
        0.0
    };
    if rescaled {
        return Ok(ExtendedReal::Finite(profile));
    }
    if delta == 1.0 {
        return Ok(ExtendedReal::Finite(bose_exp(half, v)? / ld));
    }
    if d == 2 {
        return Ok(ExtendedReal::Divergent(DivergenceLaw::Unbounded {
            reason: "two-dimensional non-condensate density diverges for δ < 1".into(),
        }));
    }
    if delta <= 0.5 && profile > 0.0 {
        return Ok(ExtendedReal::Divergent(DivergenceLaw::PowerLaw {
            coefficient: profile,
            exponent: half,
        }));
    }
    Ok(ExtendedReal::Finite(bose_exp(half, 0.0)? / ld))
}

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::domain(format!("delta must lie in [0, 1], got {delta}")))
    }
}

/// Local density `ρ(xκ^{−δ}, xκ^{−δ})` (or `|κ|^{d/2}` times it) at a
/// grand-canonical point of an isotropic trap.
pub fn local_density_at(
    x: &[f64],
    delta: f64,
    pt: &GrandCanonicalPoint,
    rescaled: bool,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_delta(delta)?;
    if !pt.trap.is_isotropic() {
        return Err(Error::Model(
            "δ-scaled densities are defined for isotropic traps".into(),
        ));
    }
    check_dim(pt.trap.dim(), x.len())?;
    if delta > 0.0 && x.iter().all(|&a| a == 0.0) {
        return Err(Error::Origin);
    }
    let s = pt.trap.kappa().powf(-delta);
    let xs: Vec<f64> = x.iter().map(|a| a * s).collect();
    if rescaled {
        rdm_rescaled_at(&xs, &xs, pt, ctl)
    } else {
        rdm_at(&xs, &xs, pt, ctl)
    }
}

/// Local density at the trap's κ with `μ̄` solved from `ν`.
pub fn local_density_scaled(
    x: &[f64],
    delta: f64,
    target: &CanonicalTarget,
    trap: &TrapModel,
    rescaled: bool,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_delta(delta)?;
    check_dim(trap.dim(), x.len())?;
    if delta > 0.0 && x.iter().all(|&a| a == 0.0) {
        return Err(Error::Origin);
    }
    let sol = solve_mu(target, trap, ctl)?;
    local_density_at(x, delta, &sol.point, rescaled, ctl)
}

/// Small parameter in which a κ-ladder sequence is extrapolated linearly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallParameter {
    /// Corrections linear in κ.
    Kappa,
    /// Corrections linear in √κ.
    SqrtKappa,
}

impl SmallParameter {
    fn of(&self, kappa: f64) -> f64 {
        match self {
            SmallParameter::Kappa => kappa,
            SmallParameter::SqrtKappa => kappa.sqrt(),
        }
    }
}

/// Two-point Richardson extrapolation to `κ = 0` of values taken at the two
/// smallest κ of a ladder.
pub fn richardson(k1: f64, v1: f64, k2: f64, v2: f64, p: SmallParameter) -> Result<f64> {
    let (s1, s2) = (p.of(k1), p.of(k2));
    if s1 == s2 {
        return Err(Error::domain("extrapolation needs two distinct κ"));
    }
    Ok((v2 * s1 - v1 * s2) / (s1 - s2))
}

/// Least-squares line `y = slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("linear fit needs at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("linear fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Regime tag of a density profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileRegime {
    /// `ν < ν_c`.
    Subcritical,
    /// `ν ≈ ν_c`.
    Critical,
    /// `ν > ν_c`.
    Supercritical,
}

impl From<Regime> for ProfileRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Subcritical => ProfileRegime::Subcritical,
            Regime::Critical => ProfileRegime::Critical,
            Regime::Supercritical | Regime::Coexistence => ProfileRegime::Supercritical,
        }
    }
}

/// A δ-scaled density profile on a grid of nonzero points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    /// Scaling exponent δ.
    pub delta: f64,
    /// Trap κ at which the profile was evaluated.
    pub kappa: f64,
    /// Grid points.
    pub grid: Vec<Vec<f64>>,
    /// Densities at the grid points.
    pub values: Vec<f64>,
    /// `true` for `r = |κ|^{d/2}ρ`.
    pub rescaled: bool,
    /// Regime of `(β, ν)`.
    pub regime: ProfileRegime,
}

/// Evaluates a δ-scaled profile; grid points are processed in parallel and
/// assembled in input order.
pub fn density_profile(
    grid: &[Vec<f64>],
    delta: f64,
    target: &CanonicalTarget,
    trap: &TrapModel,
    rescaled: bool,
    ctl: &SeriesControl,
) -> Result<DensityProfile> {
    check_delta(delta)?;
    if grid.is_empty() {
        return Err(Error::domain("profile grid is empty"));
    }
    for p in grid {
        check_dim(trap.dim(), p.len())?;
        if delta > 0.0 && p.iter().all(|&a| a == 0.0) {
            return Err(Error::Origin);
        }
    }
    let sol = solve_mu(target, trap, ctl)?;
    let values = grid
        .par_iter()
        .map(|p| local_density_at(p, delta, &sol.point, rescaled, ctl))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DensityProfile {
        delta,
        kappa: trap.kappa(),
        grid: grid.to_vec(),
        values,
        rescaled,
        regime: regime(target, trap)?.into(),
    })
}

/// Mean square radii of the thermal (δ = 1) and condensate (δ = 1/2) profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarometricRadii {
    /// `⟨x_j²⟩` of `λ_β^{−d} g_{d/2}(e^{−βmω₀²|x|²/2})`.
    pub r2_thermal: f64,
    /// `⟨x_j²⟩` of the Gaussian condensate profile `e^{−mω₀|x|²/ħ}`.
    pub r2_condensate: f64,
    /// `r2_thermal / r2_condensate` from the quadratures.
    pub ratio: f64,
    /// Closed form `2ζ(d+1)/(ħω₀β ζ(d))`.
    pub ratio_closed_form: f64,
    /// The same closed form with an additional factor `1/β`, as it is
    /// sometimes quoted; equal to `ratio_closed_form` only at `β = 1`.
    pub ratio_with_extra_beta: f64,
}

/// Radial moment ratio `(1/d) ∫ r^{d+1} f / ∫ r^{d−1} f` on `[0, R]`.
fn radial_second_moment<F: Fn(f64) -> f64>(f: F, d: usize, r_max: f64) -> Result<f64> {
    let num = quad::integrate(|r| r.powi(d as i32 + 1) * f(r), 0.0, r_max, 1e-14, 1e-12, 16)?;
    let den = quad::integrate(|r| r.powi(d as i32 - 1) * f(r), 0.0, r_max, 1e-14, 1e-12, 16)?;
    Ok(num.value / den.value / d as f64)
}

/// Barometric radii of the open-trap thermal cloud and condensate
/// (`d ∈ {2, 3}`, `ν > ν_c`).
pub fn barometric_radii(target: &CanonicalTarget, d: usize, consts: &PhysicalConstants) -> Result<BarometricRadii> {
    if !(2..=3).contains(&d) {
        return Err(Error::domain("barometric radii need d = 2 or 3"));
    }
    let beta = target.beta;
    let nuc = nu_critical(beta, d, consts)?.finite().unwrap_or(f64::INFINITY);
    if !(target.nu > nuc * (1.0 + CRITICAL_WINDOW)) {
        return Err(Error::Regime("barometric radii need ν > ν_c".into()));
    }
    let a = 0.5 * beta * consts.mass * consts.omega0 * consts.omega0;
    let half = 0.5 * d as f64;
    let thermal = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            bose_exp(half, a * r * r).unwrap_or(f64::NAN)
        }
    };
    let r2_thermal = radial_second_moment(thermal, d, (60.0 / a).sqrt())?;
    let b = consts.mass * consts.omega0 / consts.hbar;
    let r2_condensate = radial_second_moment(|r| (-b * r * r).exp(), d, (60.0 / b).sqrt())?;
    let z1 = crate::specfun::zeta(d as f64 + 1.0)?;
    let z0 = crate::specfun::zeta(d as f64)?;
    let closed = 2.0 * z1 / (consts.hbar * consts.omega0 * beta * z0);
    Ok(BarometricRadii {
        r2_thermal,
        r2_condensate,
        ratio: r2_thermal / r2_condensate,
        ratio_closed_form: closed,
        ratio_with_extra_beta: closed / beta,
    })
}
