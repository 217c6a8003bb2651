//! Log-domain arithmetic helpers.
//!
//! Anisotropic traps produce per-axis parameters such as `κ₁ = κ·exp(−κ_c²/κ²)`
//! that underflow double precision, and loop sums that overflow it. Every
//! quantity that can leave the representable range is therefore carried as a
//! natural logarithm, and the helpers below evaluate the elementary building
//! blocks (`ln(1 − e^{−x})`, `ln(e^y − 1)`, signed log-sums) stably from the
//! logarithm of their argument.

use serde::{Deserialize, Serialize};

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 − e^{−x})` for `x = exp(ln_x) > 0`, accurate for tiny and huge `x`.
pub fn ln_one_minus_exp_neg(ln_x: f64) -> f64 {
    if ln_x < -20.0 {
        let x = ln_x.exp();
        // 1 − e^{−x} = x(1 − x/2 + x²/6 − …)
        return ln_x - 0.5 * x + x * x / 24.0;
    }
    if ln_x > 6.5 {
        // x > 665: e^{−x} is below the ulp of 1 for x ≳ 37, but keep the form uniform.
        let x = ln_x.exp();
        return (-(-x).exp()).ln_1p();
    }
    let x = ln_x.exp();
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `ln(e^y − 1)` for `y = exp(ln_y) > 0`, accurate for tiny and huge `y`.
pub fn ln_expm1(ln_y: f64) -> f64 {
    if ln_y < -20.0 {
        let y = ln_y.exp();
        return ln_y + 0.5 * y + y * y / 24.0;
    }
    let y = ln_y.exp();
    if y < 40.0 {
        y.exp_m1().ln()
    } else {
        y + (-(-y).exp()).ln_1p()
    }
}

/// `ln tanh(X/2)` for `X = exp(ln_x) > 0`.
pub fn ln_tanh_half(ln_x: f64) -> f64 {
    if ln_x < -8.0 {
        let x = ln_x.exp();
        // tanh(X/2) = X/2 · (1 − X²/12 + …)
        return ln_x - std::f64::consts::LN_2 - x * x / 12.0;
    }
    let x = ln_x.exp();
    if x > 40.0 {
        // tanh(X/2) = 1 − 2e^{−X}/(1+e^{−X})
        return -2.0 * (-x).exp();
    }
    (0.5 * x).tanh().ln()
}

/// A signed real number stored as `sign · exp(ln_abs)`.
///
/// Used for loop sums whose magnitude may exceed the double-precision range
/// (quasi-one-dimensional mesoscopic sums grow like `exp(c/κ²)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    /// Natural logarithm of the absolute value (`-inf` for zero).
    pub ln_abs: f64,
    /// `+1.0`, `-1.0`, or `0.0` for an exact zero.
    pub sign: f64,
}

impl LogValue {
    /// The value zero.
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    /// Builds a value from its logarithm (positive sign).
    pub fn from_ln(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { ln_abs, sign: 1.0 }
        }
    }

    /// Builds a value from an ordinary float.
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                ln_abs: x.abs().ln(),
                sign: x.signum(),
            }
        }
    }

    /// Converts back to a float (may overflow to ±inf or underflow to 0).
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    /// Natural logarithm of the value; `NaN` if negative.
    pub fn ln(&self) -> f64 {
        if self.sign < 0.0 {
            f64::NAN
        } else {
            self.ln_abs
        }
    }

    /// Product with `exp(ln_factor)`.
    pub fn scale_ln(self, ln_factor: f64) -> LogValue {
        if self.sign == 0.0 {
            self
        } else {
            LogValue {
                ln_abs: self.ln_abs + ln_factor,
                sign: self.sign,
            }
        }
    }
}

impl std::ops::Add for LogValue {
    type Output = LogValue;

    /// Exact sum of two log-values.
    fn add(self, other: LogValue) -> LogValue {
        if self.sign == 0.0 {
            return other;
        }
        if other.sign == 0.0 {
            return self;
        }
        let (hi, lo) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let r = (lo.ln_abs - hi.ln_abs).exp();
        let m = if hi.sign == lo.sign { 1.0 + r } else { 1.0 - r };
        if m == 0.0 {
            return Self::ZERO;
        }
        LogValue {
            ln_abs: hi.ln_abs + m.ln(),
            sign: hi.sign,
        }
    }
}

/// Running sum of signed terms given in log form, rescaled on the fly so that
/// neither overflow nor underflow occurs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogAccumulator {
    shift: f64,
    sum: f64,
}

impl LogAccumulator {
    pub(crate) fn new() -> Self {
        LogAccumulator {
            shift: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub(crate) fn add(&mut self, ln_abs: f64, sign: f64) {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return;
        }
        if self.shift == f64::NEG_INFINITY {
            self.shift = ln_abs;
        } else if ln_abs > self.shift + 30.0 {
            self.sum *= (self.shift - ln_abs).exp();
            self.shift = ln_abs;
        }
        self.sum += sign * (ln_abs - self.shift).exp();
    }

    /// Logarithm of the current absolute value.
    pub(crate) fn ln_abs(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.shift + self.sum.abs().ln()
        }
    }

    pub(crate) fn value(&self) -> LogValue {
        if self.sum == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                ln_abs: self.ln_abs(),
                sign: self.sum.signum(),
            }
        }
    }
}
