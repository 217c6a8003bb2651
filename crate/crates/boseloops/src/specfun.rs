//! Special functions: Riemann zeta, Bose functions (polylogarithms of real
//! argument), the exponential integral, the thermal de Broglie wavelength and
//! normalized harmonic-oscillator eigenfunctions.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::series::SeriesControl;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Physical constants `ħ`, `m`, `ω₀`; the default is the natural unit system
/// `ħ = m = ω₀ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Particle mass.
    pub mass: f64,
    /// Reference angular frequency of the trap.
    pub omega0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            mass: 1.0,
            omega0: 1.0,
        }
    }
}

impl PhysicalConstants {
    /// Validated constructor: all constants must be positive and finite.
    pub fn new(hbar: f64, mass: f64, omega0: f64) -> Result<Self> {
        let c = PhysicalConstants { hbar, mass, omega0 };
        c.validate()?;
        Ok(c)
    }

    /// Checks positivity of all constants.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega0", self.omega0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Order `θ > 0` of a polylogarithm / Bose function `g_θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolylogOrder(f64);

impl PolylogOrder {
    /// Validated constructor.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("polylog order must be positive, got {theta}")));
        }
        Ok(PolylogOrder(theta))
    }

    /// The order θ.
    pub fn theta(&self) -> f64 {
        self.0
    }
}

const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Riemann zeta function for real `s ≠ 1`.
///
/// Euler–Maclaurin summation for `s ≥ 0`, the functional equation for `s < 0`.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 || !s.is_finite() {
        return Err(Error::domain(format!("zeta is singular or undefined at s = {s}")));
    }
    if s < 0.0 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let pi = std::f64::consts::PI;
        let half = s / 2.0;
        if half == half.round() {
            return Ok(0.0); // trivial zeros
        }
        return Ok(2f64.powf(s) * pi.powf(s - 1.0) * (pi * half).sin() * gamma(1.0 - s) * zeta(1.0 - s)?);
    }
    if s > 60.0 {
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
    }
    const N: usize = 16;
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|n| (n as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut fact = 2.0; // (2k)!
    let mut npow = nf.powf(-s - 1.0);
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let kk = (k + 1) as f64;
        if k > 0 {
            rising *= (s + 2.0 * kk - 3.0) * (s + 2.0 * kk - 2.0);
            fact *= (2.0 * kk - 1.0) * (2.0 * kk);
            npow /= nf * nf;
        }
        sum += b / fact * rising * npow;
    }
    Ok(sum)
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Polylogarithm `Li_θ(ξ) = Σ_{n≥1} ξⁿ/n^θ` for real `0 ≤ ξ ≤ 1`.
///
/// For `ξ ≤ 1/2` the defining series is summed with the geometric tail bound
/// `ξ^{N+1}/((N+1)^θ (1−ξ))`. Closer to `1` the expansion in `a = −ln ξ`,
/// `Li_θ(e^{−a}) = Γ(1−θ)a^{θ−1} + Σ_k ζ(θ−k)(−a)^k/k!` (with the harmonic-log
/// modification at integer θ), is used; at `ξ = 1` the value is `ζ(θ)`.
pub fn polylog(theta: PolylogOrder, xi: f64, ctl: &SeriesControl) -> Result<f64> {
    let t = theta.theta();
    if !(0.0..=1.0).contains(&xi) || xi.is_nan() {
        return Err(Error::domain(format!("polylog argument must lie in [0, 1], got {xi}")));
    }
    if xi == 0.0 {
        return Ok(0.0);
    }
    if xi == 1.0 {
        if t <= 1.0 {
            return Err(Error::domain(format!("Li_θ(1) diverges for θ = {t} ≤ 1")));
        }
        return zeta(t);
    }
    if xi <= 0.5 {
        let mut sum = 0.0;
        let mut pw = 1.0;
        let mut n: u64 = 1;
        loop {
            pw *= xi;
            let nf = n as f64;
            sum += pw / nf.powf(t);
            let bound = pw * xi / ((nf + 1.0).powf(t) * (1.0 - xi));
            if bound < ctl.abs_tol * 0.1 || bound < f64::EPSILON * 1e-2 * sum {
                return Ok(sum);
            }
            n += 1;
            if n > ctl.max_terms {
                return Err(Error::convergence("polylog series exceeded max_terms"));
            }
        }
    }
    polylog_log_series(t, -xi.ln(), ctl)
}

/// `Li_θ(e^{−a})` from the expansion around `a = 0` (valid for `a < 2π`).
fn polylog_log_series(t: f64, a: f64, ctl: &SeriesControl) -> Result<f64> {
    let int_order = is_integer(t);
    let n_int = t.round() as i64;
    let mut sum = 0.0;
    if !int_order {
        sum += gamma(1.0 - t) * a.powf(t - 1.0);
    }
    let mut pow_fact = 1.0; // (−a)^k / k!
    let mut small_run = 0;
    for k in 0..80_i64 {
        if k > 0 {
            pow_fact *= -a / k as f64;
        }
        let term = if int_order && k == n_int - 1 {
            let harmonic: f64 = (1..n_int).map(|j| 1.0 / j as f64).sum();
            pow_fact * (harmonic - a.ln())
        } else {
            pow_fact * zeta(t - k as f64)?
        };
        sum += term;
        if k > n_int.max(1) && term.abs() < (ctl.abs_tol * 1e-2).max(f64::EPSILON * 1e-3 * sum.abs()) {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::convergence("polylog logarithmic expansion did not converge"))
}

/// Bose function `g_θ(ξ)` with default series control (convenience wrapper).
pub fn bose(theta: f64, xi: f64) -> Result<f64> {
    polylog(PolylogOrder::new(theta)?, xi, &SeriesControl::default())
}

/// Bose function `g_θ(e^{−a})` for `a ≥ 0`, evaluated without forming `e^{−a}`
/// near `a = 0` (avoids the loss of accuracy of `ln ξ` close to `ξ = 1`).
pub fn bose_exp(theta: f64, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::domain(format!("bose_exp needs a ≥ 0, got {a}")));
    }
    if a == 0.0 {
        return bose(theta, 1.0);
    }
    if a < std::f64::consts::LN_2 {
        return polylog_log_series(theta, a, &SeriesControl::default());
    }
    bose(theta, (-a).exp())
}

/// Exponential integral `Γ(0, x) = ∫_x^∞ e^{−t}/t dt` for `x > 0`.
///
/// Uses `−γ − ln x + Σ (−1)^{k+1} x^k/(k·k!)` for `x < 1` and a Lentz continued
/// fraction otherwise.
pub fn gamma0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma0 needs x > 0, got {x}")));
    }
    if x < 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0; // x^k / k!
        for k in 1..200 {
            let kf = k as f64;
            term *= x / kf;
            let add = if k % 2 == 1 { term / kf } else { -term / kf };
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() + sum);
    }
    // E1(x) = e^{−x} / (x + 1 − 1²/(x + 3 − 2²/(x + 5 − …)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::convergence("gamma0 continued fraction did not converge"))
}

/// Thermal de Broglie wavelength `λ_β = √(2πħ²β/m)`.
pub fn de_broglie(beta: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    Ok((2.0 * std::f64::consts::PI * consts.hbar * consts.hbar * beta / consts.mass).sqrt())
}

/// Normalized eigenfunction `ψ_s(x)` of the one-dimensional oscillator with
/// frequency `ω₀κ` (the trap axis of a κ-scaled trap).
pub fn hermite_eigenfunction(s: usize, x: f64, kappa: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    let q = consts.mass * consts.omega0 * kappa / consts.hbar;
    Ok(hermite_function(s, x, q))
}

/// Normalized Hermite function with inverse squared length `q = mωκ/ħ`:
/// `ψ_s(x) = (2^s s!)^{−1/2} (q/π)^{1/4} e^{−qx²/2} H_s(√q x)`.
///
/// Evaluated by the three-term recurrence on normalized functions with
/// logarithmic rescaling, so large `s` and large `√q·x` neither overflow nor
/// lose the Gaussian factor.
pub fn hermite_function(s: usize, x: f64, q: f64) -> f64 {
    let (p, ln_scale) = hermite_scaled(s, x, q);
    p * ln_scale.exp()
}

fn hermite_scaled(s: usize, x: f64, q: f64) -> (f64, f64) {
    let xi = q.sqrt() * x;
    let mut ln_scale = 0.25 * (q / std::f64::consts::PI).ln() - 0.5 * xi * xi;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for n in 0..s {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev *= 1e-150;
            cur *= 1e-150;
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (cur, ln_scale)
}

/// All normalized Hermite functions `ψ_0 … ψ_{s_max}` at `x`.
pub fn hermite_functions(s_max: usize, x: f64, q: f64) -> Vec<f64> {
    let xi = q.sqrt() * x;
    let mut ln_scale = 0.25 * (q / std::f64::consts::PI).ln() - 0.5 * xi * xi;
    let mut out = Vec::with_capacity(s_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur * ln_scale.exp());
    for n in 0..s_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            prev *= 1e-150;
            cur *= 1e-150;
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
        out.push(cur * ln_scale.exp());
    }
    out
}
