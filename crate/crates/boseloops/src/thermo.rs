//! Grand-canonical thermodynamics of the trapped ideal Bose gas.
//!
//! The central quantity is the rescaled particle number
//! `ν(β, μ) = |κ|^d Σ_l z^l Tr e^{−lβH}`, evaluated in loop form by the
//! [`series`](crate::series) engine with the gap `Δ = E₀ − μ` as state
//! variable. The chemical potential `μ̄(β, ν)` is obtained by inverting this
//! relation in log-gap coordinates, which resolves gaps down to `e^{−10⁴}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{DivergenceLaw, ExtendedReal};
use crate::kernels::{check_dim, TrapGeometry, TrapModel};
use crate::logspace::{ln_expm1, ln_one_minus_exp_neg, log_add_exp, LogValue};
use crate::series::{sum_loops, LoopTerm, SeriesControl, Tail};
use crate::specfun::{bose_exp, zeta, PhysicalConstants};

/// Relative half-width of the window around `ν_c` and `ν_m` treated as critical.
pub const CRITICAL_WINDOW: f64 = 1e-6;

/// A grand-canonical state `(β, μ)` in a given trap, with `μ < E₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrandCanonicalPoint {
    /// Inverse temperature β.
    pub beta: f64,
    /// Chemical potential μ (equals `E₀` in floating point when the gap underflows).
    pub mu: f64,
    /// The trap.
    pub trap: TrapModel,
    ln_gap: f64,
}

impl GrandCanonicalPoint {
    /// State from `(β, μ)`; requires `μ < E₀`.
    pub fn new(beta: f64, mu: f64, trap: TrapModel) -> Result<Self> {
        check_beta(beta)?;
        let e0 = trap.ground_energy();
        if !(mu < e0) {
            return Err(Error::domain(format!(
                "chemical potential {mu} must lie below E0 = {e0}"
            )));
        }
        Ok(GrandCanonicalPoint {
            beta,
            mu,
            trap,
            ln_gap: (e0 - mu).ln(),
        })
    }

    /// State from `(β, ln Δ)` with `Δ = E₀ − μ > 0`, exact for gaps far below
    /// the resolution of `μ` itself.
    pub fn from_ln_gap(beta: f64, ln_gap: f64, trap: TrapModel) -> Result<Self> {
        check_beta(beta)?;
        if !ln_gap.is_finite() {
            return Err(Error::domain("log-gap must be finite"));
        }
        Ok(GrandCanonicalPoint {
            beta,
            mu: trap.ground_energy() - ln_gap.exp(),
            trap,
            ln_gap,
        })
    }

    /// `ln(E₀ − μ)`.
    pub fn ln_gap(&self) -> f64 {
        self.ln_gap
    }

    /// `E₀ − μ` (may underflow to zero).
    pub fn gap(&self) -> f64 {
        self.ln_gap.exp()
    }

    /// `ln(β(E₀ − μ))`.
    pub fn ln_beta_gap(&self) -> f64 {
        self.beta.ln() + self.ln_gap
    }

    /// Fugacity `z = e^{βμ}`.
    pub fn fugacity(&self) -> f64 {
        (self.beta * self.mu).exp()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("beta must be positive and finite, got {beta}")))
    }
}

/// Canonical-like control parameters `(β, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTarget {
    /// Inverse temperature β.
    pub beta: f64,
    /// Rescaled particle number ν.
    pub nu: f64,
}

impl CanonicalTarget {
    /// Validated constructor.
    pub fn new(beta: f64, nu: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::domain(format!("nu must be positive, got {nu}")));
        }
        Ok(CanonicalTarget { beta, nu })
    }
}

/// Loop summand of the trace series:
/// `h(l) = e^{−lβΔ} Π_j w_j / (1 − e^{−lβħω_jκ_j}) · l^{−p}`,
/// with `w_j = κ_j` for the rescaled particle number and `w_j = 1` for the
/// grand potential (`p = 1`).
struct TraceTerm {
    ln_c: f64,
    ln_a: Vec<f64>,
    ln_weight: f64,
    harmonic: bool,
}

impl TraceTerm {
    fn new(pt: &GrandCanonicalPoint, rescaled: bool, harmonic: bool) -> Self {
        let c = &pt.trap.consts;
        let axes = pt.trap.axes();
        TraceTerm {
            ln_c: pt.ln_beta_gap(),
            ln_a: axes.iter().map(|a| a.ln_energy_time(pt.beta, c)).collect(),
            ln_weight: if rescaled { pt.trap.ln_kappa_volume() } else { 0.0 },
            harmonic,
        }
    }
}

impl LoopTerm for TraceTerm {
    fn ln_term(&self, u: f64) -> (f64, f64) {
        let mut v = self.ln_weight - (self.ln_c + u).exp();
        for &la in &self.ln_a {
            v -= ln_one_minus_exp_neg(la + u);
        }
        if self.harmonic {
            v -= u;
        }
        (v, 1.0)
    }

    fn tail(&self) -> Tail {
        let min_a = self.ln_a.iter().cloned().fold(f64::INFINITY, f64::min);
        let u_start = 40f64.ln() - min_a;
        if self.harmonic {
            Tail::Vanishing {
                u_start: (800f64.ln() - self.ln_c).max(u_start.min(800f64.ln() - self.ln_c)),
            }
        } else {
            Tail::Geometric {
                u_start,
                ln_amp: self.ln_weight,
                sign: 1.0,
                ln_rate: self.ln_c,
            }
        }
    }
}

/// `ln ν(β, μ)` in loop form.
pub fn ln_nu_rescaled(pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    let s = sum_loops(&TraceTerm::new(pt, true, false), 0.0, f64::INFINITY, ctl)?;
    Ok(s.ln())
}

/// Rescaled particle number `ν = |κ|^d Σ_l z^l Tr e^{−lβH}`.
pub fn nu_rescaled(pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    Ok(ln_nu_rescaled(pt, ctl)?.exp())
}

/// Unrescaled mean particle number `ν/|κ|^d`.
pub fn particle_number(pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    Ok((ln_nu_rescaled(pt, ctl)? - pt.trap.ln_kappa_volume()).exp())
}

/// Grand potential `Ω = −(1/β) Σ_l (z^l/l) Tr e^{−lβH}` (not rescaled).
pub fn grand_potential(pt: &GrandCanonicalPoint, ctl: &SeriesControl) -> Result<f64> {
    let s = sum_loops(&TraceTerm::new(pt, false, true), 0.0, f64::INFINITY, ctl)?;
    Ok(-s.value() / pt.beta)
}

/// Result of an eigenvalue-sum evaluation with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    /// The truncated sum.
    pub value: f64,
    /// Upper bound on the neglected remainder.
    pub tail_bound: f64,
}

/// `ν` as the eigenvalue sum `|κ|^d Σ_s 1/(e^{β(E_s−μ)} − 1)`, truncated at
/// quantum numbers `≤ level_max` (total level for isotropic traps, per group
/// for anisotropic ones). Independent of the loop machinery.
pub fn nu_eigen_sum(pt: &GrandCanonicalPoint, level_max: usize) -> Result<TruncatedSum> {
    let trap = &pt.trap;
    let c = &trap.consts;
    let b = pt.beta;
    let bgap = pt.ln_beta_gap().exp();
    let scale = trap.ln_kappa_volume().exp();
    let occ = |y: f64| 1.0 / y.exp_m1();
    match trap.geometry {
        TrapGeometry::Isotropic { d, kappa } => {
            let a = b * c.hbar * c.omega0 * kappa;
            let mut sum = 0.0;
            for n in 0..=level_max {
                sum += degeneracy(n, d) * occ(bgap + a * n as f64);
            }
            let y = bgap + a * (level_max + 1) as f64;
            let r = (-a).exp();
            let tail = degeneracy(level_max + 1, d + 1) * (-y).exp() / (-(-y).exp_m1()) / (1.0 - r).powi(d as i32);
            Ok(TruncatedSum {
                value: scale * sum,
                tail_bound: scale * tail,
            })
        }
        TrapGeometry::Quasi1D { omega1, omega_perp, .. } | TrapGeometry::Quasi2D { omega1, omega_perp, .. } => {
            let (k1, kp) = trap.kappa_components();
            let a1 = b * c.hbar * omega1 * k1;
            let ap = b * c.hbar * omega_perp * kp;
            let mut sum = 0.0;
            for s1 in 0..=level_max {
                for np in 0..=level_max {
                    sum += (np + 1) as f64 * occ(bgap + a1 * s1 as f64 + ap * np as f64);
                }
            }
            let amin = a1.min(ap);
            let y = bgap + amin * (level_max + 1) as f64;
            let r = (-amin).exp();
            let tail = 3.0 * degeneracy(level_max + 1, 4) * (-y).exp() / (-(-y).exp_m1()) / (1.0 - r).powi(3);
            Ok(TruncatedSum {
                value: scale * sum,
                tail_bound: scale * tail,
            })
        }
    }
}

/// Number of ways to write `n` as an ordered sum of `d` nonnegative integers.
pub fn degeneracy(n: usize, d: usize) -> f64 {
    // C(n + d − 1, d − 1)
    let mut v = 1.0;
    for k in 1..d {
        v *= (n + k) as f64 / k as f64;
    }
    v
}

/// Open-trap rescaled particle number `g_d(e^{βμ}) / (ħω₀β)^d` for `μ < 0`.
pub fn nu_open_trap(beta: f64, mu: f64, d: usize, consts: &PhysicalConstants) -> Result<f64> {
    check_beta(beta)?;
    check_d(d)?;
    if !(mu < 0.0) {
        return Err(Error::domain(format!(
            "open-trap chemical potential must be negative, got {mu}"
        )));
    }
    Ok(bose_exp(d as f64, -beta * mu)? / (consts.hbar * consts.omega0 * beta).powi(d as i32))
}

fn check_d(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::domain(format!("dimension must be 1, 2 or 3, got {d}")))
    }
}

/// Critical open-trap number `ν_c(β)`: `+∞` for `d = 1`, `ζ(d)/(ħω₀β)^d` otherwise.
pub fn nu_critical(beta: f64, d: usize, consts: &PhysicalConstants) -> Result<ExtendedReal> {
    check_beta(beta)?;
    check_d(d)?;
    if d == 1 {
        return Ok(ExtendedReal::Divergent(DivergenceLaw::Unbounded {
            reason: "no open-trap condensation in one dimension".into(),
        }));
    }
    Ok(ExtendedReal::Finite(
        zeta(d as f64)? / (consts.hbar * consts.omega0 * beta).powi(d as i32),
    ))
}

/// `ν_c(β)` of a trap (three-dimensional with the trap's ω₀ for anisotropic models).
pub fn nu_critical_trap(beta: f64, trap: &TrapModel) -> Result<ExtendedReal> {
    nu_critical(beta, trap.dim(), &trap.effective_consts())
}

/// Second critical number of the quasi-1D trap, `ν_c(β) + ω_c²/(ħβω₀³)` with `ω_c = ω⊥κ_c`.
pub fn nu_m(beta: f64, trap: &TrapModel) -> Result<f64> {
    check_beta(beta)?;
    match trap.geometry {
        TrapGeometry::Quasi1D {
            kappa_c, omega_perp, ..
        } => {
            let w0 = trap.omega0();
            let wc = omega_perp * kappa_c;
            let nuc = nu_critical_trap(beta, trap)?.finite().unwrap_or(f64::INFINITY);
            Ok(nuc + wc * wc / (trap.consts.hbar * beta * w0.powi(3)))
        }
        _ => Err(Error::Model("nu_m is defined for the quasi-1D trap only".into())),
    }
}

/// Open-trap chemical potential `μ̄_{∞,0} < 0` solving `ν = g_d(e^{βμ})/(ħω₀β)^d`,
/// for `ν < ν_c(β)`.
pub fn mu_open_trap(beta: f64, nu: f64, d: usize, consts: &PhysicalConstants) -> Result<f64> {
    check_beta(beta)?;
    check_d(d)?;
    if let Some(nuc) = nu_critical(beta, d, consts)?.finite() {
        if nu >= nuc {
            return Err(Error::Regime(format!("ν = {nu} ≥ ν_c = {nuc}: no open-trap solution")));
        }
    }
    let target = nu * (consts.hbar * consts.omega0 * beta).powi(d as i32);
    // g_d(e^{−a}) is decreasing in a; bisect on ln a.
    let (mut lo, mut hi) = (-60.0f64, 8.0f64);
    let f = |la: f64| -> Result<f64> { Ok(bose_exp(d as f64, la.exp())? - target) };
    if f(hi)? > 0.0 {
        return Err(Error::Bracket("ν too small for the open-trap solver".into()));
    }
    if f(lo)? < 0.0 {
        return Err(Error::Bracket("ν too close to ν_c for the open-trap solver".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(-(0.5 * (lo + hi)).exp() / beta)
}

/// Solution of the chemical-potential inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuSolution {
    /// The grand-canonical state reproducing the target ν.
    pub point: GrandCanonicalPoint,
    /// `ν` at the solution.
    pub nu_achieved: f64,
    /// Number of solver iterations.
    pub iterations: usize,
}

impl MuSolution {
    /// `μ̄`.
    pub fn mu(&self) -> f64 {
        self.point.mu
    }

    /// `ln(E₀ − μ̄)`.
    pub fn ln_gap(&self) -> f64 {
        self.point.ln_gap()
    }
}

/// Solves `ν(β, μ̄) = ν` for `μ̄ < E₀` by safeguarded regula falsi (Illinois)
/// on `ln Δ`, `Δ = E₀ − μ̄`, starting from the bracket `[10⁻³⁰⁰E₀, E₀ + 50/β]`
/// and widening it in log space if needed.
pub fn solve_mu(target: &CanonicalTarget, trap: &TrapModel, ctl: &SeriesControl) -> Result<MuSolution> {
    ctl.validate()?;
    let target = CanonicalTarget::new(target.beta, target.nu)?;
    let beta = target.beta;
    let ln_nu = target.nu.ln();
    let e0 = trap.ground_energy();
    let f = |y: f64| -> Result<f64> {
        let pt = GrandCanonicalPoint::from_ln_gap(beta, y, *trap)?;
        Ok(ln_nu_rescaled(&pt, ctl)? - ln_nu)
    };
    let mut y_lo = e0.ln() - 300.0 * std::f64::consts::LN_10;
    let mut y_hi = (e0 + 50.0 / beta).ln();
    let mut f_lo = f(y_lo)?;
    let mut widen = 0;
    while f_lo < 0.0 {
        widen += 1;
        if widen > 20 {
            return Err(Error::Bracket(format!(
                "ν = {} cannot be reached by any gap",
                target.nu
            )));
        }
        y_hi = y_lo;
        y_lo -= 700.0;
        f_lo = f(y_lo)?;
    }
    let mut f_hi = f(y_hi)?;
    widen = 0;
    while f_hi > 0.0 {
        widen += 1;
        if widen > 60 {
            return Err(Error::Bracket(format!("ν = {} is too small to bracket", target.nu)));
        }
        y_lo = y_hi;
        f_lo = f_hi;
        y_hi += 2.0;
        f_hi = f(y_hi)?;
    }
    let tol = 0.5 * ctl.rel_tol;
    let mut side = 0i32;
    let mut best = (y_lo, f_lo);
    for it in 0..200 {
        let mut y = (y_lo * f_hi - y_hi * f_lo) / (f_hi - f_lo);
        if !(y > y_lo && y < y_hi) {
            y = 0.5 * (y_lo + y_hi);
        }
        let fy = f(y)?;
        if fy.abs() < best.1.abs() {
            best = (y, fy);
        }
        if fy.abs() <= tol || (y_hi - y_lo) <= 1e-15 * y.abs().max(1.0) {
            let point = GrandCanonicalPoint::from_ln_gap(beta, best.0, *trap)?;
            if best.1.abs() > ctl.rel_tol {
                return Err(Error::convergence(format!(
                    "solve_mu stalled with relative residual {:e}",
                    best.1
                )));
            }
            log::debug!(
                "solve_mu: ν = {} reached with ln(E₀ − μ̄) = {} after {} iterations",
                target.nu,
                best.0,
                it + 1
            );
            return Ok(MuSolution {
                point,
                nu_achieved: (ln_nu + best.1).exp(),
                iterations: it + 1,
            });
        }
        if fy > 0.0 {
            y_lo = y;
            f_lo = fy;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            y_hi = y;
            f_hi = fy;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::convergence("solve_mu reached the iteration cap"))
}

/// Energy offsets `β(E_s − μ)` in log form: `ln(βΔ + Σ_j βħω_jκ_j s_j)`.
fn ln_beta_excitation(pt: &GrandCanonicalPoint, s: &[usize]) -> Result<f64> {
    let axes = pt.trap.axes();
    check_dim(axes.len(), s.len())?;
    let c = &pt.trap.consts;
    let mut v = pt.ln_beta_gap();
    for (a, &sj) in axes.iter().zip(s) {
        if sj > 0 {
            v = log_add_exp(v, a.ln_energy_time(pt.beta, c) + (sj as f64).ln());
        }
    }
    Ok(v)
}

/// Rescaled occupation `|κ|^d/(e^{β(E_s−μ)} − 1)` of the eigenstate `s` at a
/// grand-canonical point.
pub fn occupation_at(pt: &GrandCanonicalPoint, s: &[usize]) -> Result<f64> {
    Ok((pt.trap.ln_kappa_volume() - ln_expm1(ln_beta_excitation(pt, s)?)).exp())
}

/// Rescaled occupation of eigenstate `s` at the chemical potential solving `ν`.
pub fn occupation(target: &CanonicalTarget, trap: &TrapModel, s: &[usize], ctl: &SeriesControl) -> Result<f64> {
    check_dim(trap.dim(), s.len())?;
    let sol = solve_mu(target, trap, ctl)?;
    occupation_at(&sol.point, s)
}

/// Occupation ladder `Σ_{n=n0}^{n1} C(n+g−1, g−1) / (e^{a n + c} − 1)` over one
/// group of `g` degenerate axes, as a loop series in `k = n + 1 − n0`.
struct LadderTerm {
    ln_a: f64,
    ln_c: f64,
    group: usize,
    offset: f64, // n = k − offset
}

impl LoopTerm for LadderTerm {
    fn ln_term(&self, u: f64) -> (f64, f64) {
        let k = u.exp();
        let n = k - self.offset;
        let ln_n = if self.offset == 0.0 {
            u
        } else if n <= 0.0 {
            f64::NEG_INFINITY
        } else if u > 30.0 {
            u + (-self.offset * (-u).exp()).ln_1p()
        } else {
            n.ln()
        };
        let ln_y = log_add_exp(self.ln_c, self.ln_a + ln_n);
        let ln_w = match self.group {
            1 => 0.0,
            2 => log_add_exp(ln_n, 0.0),
            g => degeneracy(n.round().max(0.0) as usize, g).ln(),
        };
        (ln_w - ln_expm1(ln_y), 1.0)
    }

    fn tail(&self) -> Tail {
        Tail::Vanishing {
            u_start: (800.0f64).ln() - self.ln_a,
        }
    }
}

/// Σ over eigenstates with `0 < Σ_j κ_j s_j ≤ ε` of the rescaled occupations
/// (the ground state is excluded).
pub fn gbec_band_sum_at(pt: &GrandCanonicalPoint, epsilon: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::domain(format!("band width must lie in (0, 1], got {epsilon}")));
    }
    let trap = &pt.trap;
    let c = &trap.consts;
    let ln_vol = trap.ln_kappa_volume();
    let ln_bgap = pt.ln_beta_gap();
    // Axis groups: (ln κ_g, ln a_g, size g).
    let groups: Vec<(f64, f64, usize)> = match trap.geometry {
        TrapGeometry::Isotropic { d, .. } => {
            let a = trap.axes()[0];
            vec![(a.ln_kappa, a.ln_energy_time(pt.beta, c), d)]
        }
        _ => {
            let ax = trap.axes();
            vec![
                (ax[0].ln_kappa, ax[0].ln_energy_time(pt.beta, c), 1),
                (ax[1].ln_kappa, ax[1].ln_energy_time(pt.beta, c), 2),
            ]
        }
    };
    let ln_eps = epsilon.ln();
    // Enumerate the group with the fewest levels inside the band.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&i, &j| groups[j].0.partial_cmp(&groups[i].0).unwrap());
    let (outer, inner) = (order[0], order.get(1).copied());
    let (lk_o, la_o, g_o) = groups[outer];
    let n_outer_max = (ln_eps - lk_o).exp().floor();
    if n_outer_max > ctl.max_terms as f64 {
        return Err(Error::convergence("g-BEC band has too many levels to enumerate"));
    }
    let mut acc = LogValue::ZERO;
    for n in 0..=(n_outer_max as u64) {
        let nf = n as f64;
        let ln_w = degeneracy(n as usize, g_o).ln();
        // β(E − μ) contribution of the outer group
        let ln_c_outer = if n == 0 {
            ln_bgap
        } else {
            log_add_exp(ln_bgap, la_o + nf.ln())
        };
        match inner {
            None => {
                if n > 0 {
                    acc = acc + LogValue::from_ln(ln_vol + ln_w - ln_expm1(ln_c_outer));
                }
            }
            Some(i) => {
                let (lk_i, la_i, g_i) = groups[i];
                let remaining = epsilon - nf * lk_o.exp();
                if remaining < 0.0 {
                    break;
                }
                let ln_n_inner_max = remaining.ln() - lk_i;
                let n0 = if n == 0 { 1.0 } else { 0.0 };
                // k = n_inner + 1 − n0 runs from 1 to n_inner_max + 1 − n0
                let k_last_ln = if ln_n_inner_max < 36.0 {
                    let m = ln_n_inner_max.exp().floor() + 1.0 - n0;
                    if m < 1.0 {
                        continue;
                    }
                    m.ln()
                } else {
                    ln_n_inner_max
                };
                let term = LadderTerm {
                    ln_a: la_i,
                    ln_c: ln_c_outer,
                    group: g_i,
                    offset: 1.0 - n0,
                };
                let s = sum_loops(&term, 0.0, k_last_ln, ctl)?;
                acc = acc + s.scale_ln(ln_vol + ln_w);
            }
        }
    }
    Ok(acc.value())
}

/// g-BEC band sum at the chemical potential solving `ν`.
pub fn gbec_band_sum(target: &CanonicalTarget, trap: &TrapModel, epsilon: f64, ctl: &SeriesControl) -> Result<f64> {
    let sol = solve_mu(target, trap, ctl)?;
    gbec_band_sum_at(&sol.point, epsilon, ctl)
}

/// Thermodynamic regime of a state relative to the critical numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `ν < ν_c`.
    Subcritical,
    /// `ν` within [`CRITICAL_WINDOW`] of `ν_c` or `ν_m`.
    Critical,
    /// `ν > ν_c` (and, for quasi-1D traps, `ν < ν_m`).
    Supercritical,
    /// Quasi-1D trap with `ν > ν_m`: generalized and ordinary BEC coexist.
    Coexistence,
}

/// Regime of `(β, ν)` in the given trap.
pub fn regime(target: &CanonicalTarget, trap: &TrapModel) -> Result<Regime> {
    let nuc = match nu_critical_trap(target.beta, trap)?.finite() {
        Some(v) => v,
        None => return Ok(Regime::Subcritical),
    };
    let near = |v: f64| (target.nu - v).abs() < CRITICAL_WINDOW * nuc;
    if near(nuc) {
        return Ok(Regime::Critical);
    }
    if target.nu < nuc {
        return Ok(Regime::Subcritical);
    }
    if let TrapGeometry::Quasi1D { .. } = trap.geometry {
        let num = nu_m(target.beta, trap)?;
        if near(num) {
            return Ok(Regime::Critical);
        }
        if target.nu > num {
            return Ok(Regime::Coexistence);
        }
    }
    Ok(Regime::Supercritical)
}

/// Leading-order prediction of `ln(E₀ − μ̄)` at the trap's κ.
///
/// Below criticality the gap tends to `−μ̄_{∞,0}`; above it, it is
/// `|κ|^d/(β(ν−ν_c))` (isotropic, quasi-2D), `β^{−1}e^{−ħω₁β(ν−ν_c)/κ²}`
/// (quasi-1D, `ν_c < ν ≤ ν_m`) or `κ₁κ⊥²/(β(ν−ν_m))` (quasi-1D, `ν > ν_m`).
pub fn ln_gap_asymptotic(target: &CanonicalTarget, trap: &TrapModel) -> Result<f64> {
    let beta = target.beta;
    let nu = target.nu;
    let reg = regime(target, trap)?;
    let consts = trap.effective_consts();
    match reg {
        Regime::Critical => Err(Error::Regime(
            "ν is at a critical value; the gap has no asymptotic rate there".into(),
        )),
        Regime::Subcritical => Ok((-mu_open_trap(beta, nu, trap.dim(), &consts)?).ln()),
        Regime::Supercritical | Regime::Coexistence => {
            let nuc = nu_critical_trap(beta, trap)?.finite().unwrap_or(f64::INFINITY);
            match trap.geometry {
                TrapGeometry::Isotropic { .. } | TrapGeometry::Quasi2D { .. } => {
                    Ok(trap.ln_kappa_volume() - (beta * (nu - nuc)).ln())
                }
                TrapGeometry::Quasi1D { omega1, kappa, .. } => {
                    if reg == Regime::Supercritical {
                        Ok(-beta.ln() - trap.consts.hbar * omega1 * beta * (nu - nuc) / (kappa * kappa))
                    } else {
                        let num = nu_m(beta, trap)?;
                        Ok(trap.ln_kappa_volume() - (beta * (nu - num)).ln())
                    }
                }
            }
        }
    }
}

/// Leading-order prediction of `μ̄` (see [`ln_gap_asymptotic`]).
pub fn mu_asymptotic(target: &CanonicalTarget, trap: &TrapModel) -> Result<f64> {
    Ok(trap.ground_energy() - ln_gap_asymptotic(target, trap)?.exp())
}
