//! Series control and the loop-sum engine.
//!
//! Every infinite sum in the crate has the shape `Σ_{l=L₀}^{L₁} h(l)` with a
//! smooth positive-index summand (a loop series in the cycle length `l`, or an
//! occupation ladder in a quantum number). The engine evaluates it in three
//! stages:
//!
//! 1. direct summation of the first few thousand terms;
//! 2. Euler–Maclaurin (midpoint form) for the remaining body, with the integral
//!    computed by adaptive Gauss–Kronrod quadrature in `u = ln l`, which keeps
//!    cycle lengths up to `exp(10³)` and beyond tractable;
//! 3. a closed-form geometric tail once the summand has reached its exact
//!    asymptote `A·e^{−c l}` (the ground-state dyad times the fugacity gap).
//!
//! All summands report `ln|h|` so that sums which over- or underflow double
//! precision are still evaluated; the result is a [`LogValue`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{ln_one_minus_exp_neg, LogAccumulator, LogValue};
use crate::quad;

/// Truncation and tolerance policy shared by all infinite sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesControl {
    /// Relative tolerance of sums and of the chemical-potential solver.
    pub rel_tol: f64,
    /// Absolute tolerance for special-function series.
    pub abs_tol: f64,
    /// Cap on explicitly enumerated terms.
    pub max_terms: u64,
    /// Short-loop cutoff exponent: `N = ⌊κ^{−σ}⌋`.
    pub sigma: f64,
    /// Second cutoff exponent for anisotropic three-way splits.
    pub sigma2: Option<f64>,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_terms: 10_000_000,
            sigma: 1.25,
            sigma2: None,
        }
    }
}

impl SeriesControl {
    /// Checks the invariants (positive tolerances, nonzero term budget).
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("series tolerances must be positive"));
        }
        if self.max_terms == 0 {
            return Err(Error::domain("max_terms must be positive"));
        }
        if !self.sigma.is_finite() {
            return Err(Error::domain("sigma must be finite"));
        }
        Ok(())
    }

    /// Same control with a different `σ`.
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }
}

/// Behaviour of a summand beyond the point where it reaches its asymptote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// For `ln l ≥ u_start` the summand equals `sign·exp(ln_amp − c·l)`
    /// to double precision, with `c = exp(ln_rate) > 0`.
    Geometric {
        /// `ln` of the first loop index in the asymptotic regime.
        u_start: f64,
        /// `ln A` of the amplitude.
        ln_amp: f64,
        /// Sign of the amplitude.
        sign: f64,
        /// `ln c` of the decay rate.
        ln_rate: f64,
    },
    /// For `ln l ≥ u_start` the summand is negligible.
    Vanishing {
        /// `ln` of the first negligible index.
        u_start: f64,
    },
}

impl Tail {
    fn u_start(&self) -> f64 {
        match *self {
            Tail::Geometric { u_start, .. } | Tail::Vanishing { u_start } => u_start,
        }
    }

    fn decay_length(&self) -> f64 {
        match *self {
            Tail::Geometric { ln_rate, .. } => (-ln_rate).exp(),
            Tail::Vanishing { .. } => 0.0,
        }
    }
}

/// A summand `h(l)` of a positive-index series, evaluated from `u = ln l`.
pub trait LoopTerm {
    /// Returns `(ln|h(l)|, sign h(l))` at `l = exp(u)`.
    fn ln_term(&self, u: f64) -> (f64, f64);
    /// Asymptotic behaviour of the summand.
    fn tail(&self) -> Tail;
}

/// Number of leading terms summed explicitly.
const DIRECT_TERMS: u64 = 2048;
/// Indices below `2^52` are treated as exact integers.
const LN_EXACT_INTEGER: f64 = 36.0;

fn ln_index(l: f64) -> f64 {
    l.ln()
}

/// `ln(e^u + d)` for a small offset `d` (`|d| ≤ 1/2`).
fn ln_shift(u: f64, d: f64) -> f64 {
    u + (d * (-u).exp()).ln_1p()
}

/// Sums `h(l)` for `l` from `exp(ln_first)` to `exp(ln_last)` inclusive.
///
/// `ln_last = +∞` requests the full infinite series. Indices are exact
/// integers while below `2^52`; beyond that the summation range is treated as
/// continuous (the Euler–Maclaurin integral covers it).
pub fn sum_loops<T: LoopTerm + ?Sized>(term: &T, ln_first: f64, ln_last: f64, ctl: &SeriesControl) -> Result<LogValue> {
    if ln_last < ln_first {
        return Ok(LogValue::ZERO);
    }
    let tail = term.tail();
    let ln_tail = tail.u_start().max(ln_first);
    let mut acc = LogAccumulator::new();

    // Integer bookkeeping for the exact-index part.
    let exact = |u: f64| u < LN_EXACT_INTEGER;
    let first_int = if exact(ln_first) {
        Some(ln_first.exp().round().max(1.0))
    } else {
        None
    };
    let last_int = if exact(ln_last) {
        Some(ln_last.exp().round())
    } else {
        None
    };
    let tail_int = if exact(ln_tail) {
        Some(ln_tail.exp().ceil())
    } else {
        None
    };

    // Stage 1: direct summation.
    let mut next_ln = ln_first; // ln of the first index not yet summed
    let mut finished = false;
    if let Some(first) = first_int {
        let mut stop = DIRECT_TERMS.min(ctl.max_terms) as f64 + first - 1.0;
        if let Some(l) = last_int {
            stop = stop.min(l);
        }
        if let Some(t) = tail_int {
            stop = stop.min(t - 1.0);
        }
        let decay = tail.decay_length();
        let mut l = first;
        let mut prev = f64::INFINITY;
        let mut decreasing = 0;
        while l <= stop {
            let (lt, s) = term.ln_term(ln_index(l));
            acc.add(lt, s);
            if lt < prev {
                decreasing += 1;
            } else {
                decreasing = 0;
            }
            prev = lt;
            let horizon = l.max(decay);
            if decreasing >= 3 && lt + horizon.ln() < acc.ln_abs() + (1e-17f64).ln() {
                finished = true;
                break;
            }
            l += 1.0;
        }
        next_ln = ln_index(l);
        if let Some(last) = last_int {
            if l > last {
                finished = true;
            }
        }
    }
    if finished {
        return Ok(acc.value());
    }

    // Stage 2: Euler–Maclaurin body from `next` to `min(last, tail − 1)`.
    let body_end_ln = if ln_last <= ln_tail {
        // ln(last + 1/2)
        if ln_last == f64::INFINITY {
            f64::INFINITY
        } else {
            ln_shift(ln_last, 0.5)
        }
    } else {
        // ln(tail − 1/2)
        match tail_int {
            Some(t) => (t - 0.5).ln(),
            None => ln_tail,
        }
    };
    let body_start_ln = ln_shift(next_ln, -0.5);
    if body_end_ln.is_infinite() {
        return Err(Error::convergence(
            "summand provides no finite asymptotic regime for an infinite series",
        ));
    }
    if body_end_ln > body_start_ln {
        let body = euler_maclaurin(term, body_start_ln, body_end_ln, acc.ln_abs(), ctl)?;
        acc.add(body.ln_abs, body.sign);
    }

    // Stage 3: closed-form geometric tail.
    if ln_last >= ln_tail {
        if let Tail::Geometric {
            ln_amp, sign, ln_rate, ..
        } = tail
        {
            let ln_start = match tail_int {
                Some(t) => t.max(first_int.unwrap_or(1.0)).ln(),
                None => ln_tail,
            };
            // Σ_{l=start}^{last} A e^{−cl} = A e^{−c·start} (1 − e^{−c(last−start+1)}) / (1 − e^{−c})
            let c_start = (ln_rate + ln_start).exp();
            let mut ln_t = ln_amp - c_start - ln_one_minus_exp_neg(ln_rate);
            if ln_last.is_finite() {
                let ln_count = if ln_last < LN_EXACT_INTEGER {
                    (ln_last.exp() - ln_start.exp() + 1.0).ln()
                } else {
                    ln_last + (-(ln_start - ln_last).exp()).ln_1p()
                };
                if ln_count.is_finite() {
                    ln_t += ln_one_minus_exp_neg(ln_rate + ln_count);
                }
            }
            acc.add(ln_t, sign);
        }
    }
    Ok(acc.value())
}

/// Σ_{l} h(l) over the index range whose midpoint-extended bounds are
/// `[exp(ua), exp(ub)]`, via Euler–Maclaurin with quadrature in `ln l`.
fn euler_maclaurin<T: LoopTerm + ?Sized>(
    term: &T,
    ua: f64,
    ub: f64,
    ln_scale_hint: f64,
    ctl: &SeriesControl,
) -> Result<LogValue> {
    // Scan to find the magnitude scale of the integrand l·h(l).
    let width = ub - ua;
    let steps = ((width / 0.25).ceil() as usize).clamp(8, 20_000);
    let du = width / steps as f64;
    let mut shift = f64::NEG_INFINITY;
    for i in 0..=steps {
        let u = ua + du * i as f64;
        let (lt, _) = term.ln_term(u);
        shift = shift.max(lt + u);
    }
    if shift == f64::NEG_INFINITY {
        return Ok(LogValue::ZERO);
    }
    let f = |u: f64| {
        let (lt, s) = term.ln_term(u);
        s * (lt + u - shift).exp()
    };
    // Rough size of the integral for the tolerance.
    let mut rough = 0.0;
    for i in 0..=steps {
        let u = ua + du * i as f64;
        rough += f(u).abs() * du;
    }
    let prior = (ln_scale_hint - shift).exp();
    let tol = ctl.rel_tol * 1e-3 * (rough + if prior.is_finite() { prior } else { 0.0 });
    let panels = ((width / 0.5).ceil() as usize).clamp(1, 8_000);
    let q = quad::integrate(f, ua, ub, tol.max(f64::MIN_POSITIVE), 0.0, panels)?;

    // Endpoint derivative correction −(1/24)[h'(b) − h'(a)], h'(l) = g'(u)/l, g(u) = h(e^u).
    let deriv = |u: f64| {
        let d = 1e-3;
        let g = |v: f64| {
            let (lt, s) = term.ln_term(v);
            s * (lt - shift).exp()
        };
        (8.0 * (g(u + d) - g(u - d)) - (g(u + 2.0 * d) - g(u - 2.0 * d))) / (12.0 * d)
    };
    let corr = -(deriv(ub) * (-ub).exp() - deriv(ua) * (-ua).exp()) / 24.0;
    let total = q.value + corr;
    Ok(LogValue::from_f64(total).scale_ln(shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// h(l) = e^{−c l} / l : Σ_{l≥1} = −ln(1 − e^{−c}).
    struct Harmonic {
        c: f64,
    }
    impl LoopTerm for Harmonic {
        fn ln_term(&self, u: f64) -> (f64, f64) {
            (-self.c * u.exp() - u, 1.0)
        }
        fn tail(&self) -> Tail {
            Tail::Vanishing {
                u_start: (800.0 / self.c).ln(),
            }
        }
    }

    /// h(l) = e^{−c l} : geometric from the start.
    struct Geom {
        c: f64,
    }
    impl LoopTerm for Geom {
        fn ln_term(&self, u: f64) -> (f64, f64) {
            (-self.c * u.exp(), 1.0)
        }
        fn tail(&self) -> Tail {
            Tail::Geometric {
                u_start: 5000f64.ln(),
                ln_amp: 0.0,
                sign: 1.0,
                ln_rate: self.c.ln(),
            }
        }
    }

    #[test]
    fn harmonic_series_through_quadrature() {
        let ctl = SeriesControl::default();
        for &c in &[1.0, 1e-3, 1e-8, 1e-40] {
            let s = sum_loops(&Harmonic { c }, 0.0, f64::INFINITY, &ctl).unwrap();
            let exact = -(-(-c).exp_m1()).ln();
            assert!(
                (s.value() - exact).abs() < 1e-9 * exact,
                "c={c}: {} vs {exact}",
                s.value()
            );
        }
    }

    #[test]
    fn geometric_series_with_closed_tail() {
        let ctl = SeriesControl::default();
        for &c in &[1e-2, 1e-6] {
            let s = sum_loops(&Geom { c }, 0.0, f64::INFINITY, &ctl).unwrap();
            let exact = (-c).exp() / (-(-c).exp_m1());
            assert!((s.value() / exact - 1.0).abs() < 1e-10, "c={c}");
            // finite range [3, 10^7]
            let s = sum_loops(&Geom { c }, 3f64.ln(), 1e7f64.ln(), &ctl).unwrap();
            let exact = ((-3.0 * c).exp() - (-(1e7 + 1.0) * c).exp()) / (-(-c).exp_m1());
            assert!((s.value() / exact - 1.0).abs() < 1e-10, "c={c}");
        }
    }
}
