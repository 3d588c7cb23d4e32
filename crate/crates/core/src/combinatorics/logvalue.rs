use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Div, Mul, Neg};

/// A real number stored as `sign · exp(ln_abs)`.
///
/// Long products of rising factorials and quadratics overflow `f64` well
/// before n = 200, so every exact formula in this crate is assembled in this
/// representation and only converted at the end. Zero is represented with
/// `sign == 0` and `ln_abs == -inf`; nothing else has sign zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    ln_abs: f64,
    sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogValue = LogValue { ln_abs: 0.0, sign: 1 };

    /// Builds a value from `ln|x|` and a sign in {-1, 0, 1}.
    pub fn new(ln_abs: f64, sign: i8) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                ln_abs,
                sign: sign.signum(),
            }
        }
    }

    /// A positive value given by its natural log.
    pub fn from_ln(ln_abs: f64) -> Self {
        Self::new(ln_abs, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                ln_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    /// `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(LogValue {
                ln_abs: -self.ln_abs,
                sign: self.sign,
            })
        }
    }

    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        rhs.recip().map(|r| self * r)
    }

    pub fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogValue::new(big.ln_abs + ratio.ln_1p(), big.sign)
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogValue::new(big.ln_abs + (-ratio).ln_1p(), big.sign)
        }
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.add(-rhs)
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`, 0 when both are zero.
    pub fn relative_difference(self, other: Self) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        if self.is_zero() || other.is_zero() || self.sign != other.sign {
            return 1.0;
        }
        let d = (self.ln_abs - other.ln_abs).abs();
        // |e^a - e^b| / e^max(a,b) = 1 - e^{-|a-b|}
        -(-d).exp_m1()
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            LogValue::ZERO
        } else {
            LogValue {
                ln_abs: self.ln_abs + rhs.ln_abs,
                sign: self.sign * rhs.sign,
            }
        }
    }
}

/// Division by zero yields an infinite magnitude with the numerator's sign
/// (and zero for 0/0); use [`LogValue::checked_div`] when that matters.
impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        match rhs.recip() {
            Some(r) => self * r,
            None if self.is_zero() => LogValue::ZERO,
            None => LogValue {
                ln_abs: f64::INFINITY,
                sign: self.sign,
            },
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            ln_abs: self.ln_abs,
            sign: -self.sign,
        }
    }
}

impl Product for LogValue {
    fn product<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ONE, |acc, x| acc * x)
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::ZERO, LogValue::add)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let key = |v: &LogValue| match v.sign {
            0 => (0, 0.0),
            1 => (1, v.ln_abs),
            _ => (-1, -v.ln_abs),
        };
        let (sa, la) = key(self);
        let (sb, lb) = key(other);
        match sa.cmp(&sb) {
            Ordering::Equal => la.partial_cmp(&lb),
            o => Some(o),
        }
    }
}

impl From<f64> for LogValue {
    fn from(x: f64) -> Self {
        LogValue::from_f64(x)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_has_sign_zero() {
        assert_eq!(LogValue::from_f64(0.0).sign(), 0);
        assert_eq!(LogValue::new(3.0, 0), LogValue::ZERO);
        assert_eq!(LogValue::new(f64::NEG_INFINITY, 1), LogValue::ZERO);
        assert!((LogValue::from_f64(2.0) * LogValue::ZERO).is_zero());
    }

    #[test]
    fn signed_addition() {
        let a = LogValue::from_f64(3.5);
        let b = LogValue::from_f64(-1.25);
        assert!((a.add(b).to_f64() - 2.25).abs() < 1e-15);
        assert!((b.add(a).to_f64() - 2.25).abs() < 1e-15);
        assert!(a.sub(a).is_zero());
        assert!((b.sub(a).to_f64() + 4.75).abs() < 1e-15);
    }

    #[test]
    fn products_past_f64_range() {
        let big = LogValue::from_ln(800.0);
        let prod = big * big / LogValue::from_ln(1599.0);
        assert!((prod.to_f64() - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn ordering_respects_sign() {
        let vals = [-2.0, -0.5, 0.0, 0.25, 4.0];
        for w in vals.windows(2) {
            assert!(LogValue::from_f64(w[0]) < LogValue::from_f64(w[1]));
        }
    }

    #[test]
    fn division_by_zero_is_infinite() {
        let q = LogValue::from_f64(-2.0) / LogValue::ZERO;
        assert_eq!(q.sign(), -1);
        assert!(q.ln_abs().is_infinite());
        assert!(LogValue::ONE.checked_div(LogValue::ZERO).is_none());
    }
}
