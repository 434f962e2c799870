use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A real number stored as `sign · exp(log_magnitude)`.
///
/// Counts such as `(2m-1)!!` overflow every fixed-width type long before
/// desk-scale `m`, so all counting formulas work in this representation.
/// Zero is `sign == 0` (its `log_magnitude` is `-inf`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogReal {
    log_magnitude: f64,
    sign: i8,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal { log_magnitude: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogReal = LogReal { log_magnitude: 0.0, sign: 1 };

    /// Positive number with the given natural log.
    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal { log_magnitude: ln, sign: 1 }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => LogReal { log_magnitude: x.ln(), sign: 1 },
            Some(Ordering::Less) => LogReal { log_magnitude: (-x).ln(), sign: -1 },
            _ => Self::ZERO,
        }
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of the value. Only meaningful for positive values;
    /// returns NaN otherwise.
    pub fn ln(&self) -> f64 {
        if self.sign > 0 {
            self.log_magnitude
        } else if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            f64::NAN
        }
    }

    /// Base-10 log of the absolute value.
    pub fn log10_abs(&self) -> f64 {
        self.log_magnitude / std::f64::consts::LN_10
    }

    /// Converts back to `f64`; overflows to ±inf and underflows to 0.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_magnitude.exp()
    }

    pub fn abs(&self) -> Self {
        if self.sign == 0 {
            *self
        } else {
            LogReal { log_magnitude: self.log_magnitude, sign: 1 }
        }
    }

    pub fn powf(&self, e: f64) -> Self {
        assert!(self.sign >= 0, "powf of a negative LogReal");
        if self.sign == 0 {
            return if e == 0.0 { Self::ONE } else { Self::ZERO };
        }
        LogReal::from_ln(self.log_magnitude * e)
    }

    /// Decimal scientific rendering `d.ddd…e±N` with `digits` digits after
    /// the point, computed without ever leaving log space.
    pub fn to_scientific(&self, digits: usize) -> String {
        if self.sign == 0 {
            return format!("{:.*}e0", digits, 0.0);
        }
        let l10 = self.log10_abs();
        let mut exponent = l10.floor();
        let mut mantissa = 10f64.powf(l10 - exponent);
        let scale = 10f64.powi(digits as i32);
        if (mantissa * scale).round() / scale >= 10.0 {
            mantissa /= 10.0;
            exponent += 1.0;
        }
        let sign = if self.sign < 0 { "-" } else { "" };
        format!("{sign}{mantissa:.digits$}e{}", exponent as i64)
    }
}

impl Default for LogReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific(6))
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 || rhs.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(rhs.sign != 0, "LogReal division by zero");
        if self.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal { log_magnitude: self.log_magnitude, sign: -self.sign }
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_magnitude >= rhs.log_magnitude {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let diff = small.log_magnitude - big.log_magnitude;
        if big.sign == small.sign {
            LogReal {
                log_magnitude: big.log_magnitude + diff.exp().ln_1p(),
                sign: big.sign,
            }
        } else if diff == 0.0 {
            LogReal::ZERO
        } else {
            LogReal {
                log_magnitude: big.log_magnitude + (-diff.exp_m1()).ln(),
                sign: big.sign,
            }
        }
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}
