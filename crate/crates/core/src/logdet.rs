use core::ops::{Mul, MulAssign};

use num_complex::Complex64;
use num_traits::Float;

/// Determinant stored as a unit-modulus phase times `exp(log_magnitude)`.
///
/// Products of many block determinants accumulate in the log domain, so the
/// representation never overflows; [`LogDet::to_complex`] may return infinity
/// when the value itself exceeds double range. The exact value zero is
/// `phase = 1`, `log_magnitude = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    phase: Complex64,
    log_magnitude: f64,
}

impl LogDet {
    pub fn one() -> Self {
        Self {
            phase: Complex64::ONE,
            log_magnitude: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self {
            phase: Complex64::ONE,
            log_magnitude: f64::NEG_INFINITY,
        }
    }

    pub fn from_complex(v: Complex64) -> Self {
        if v == Complex64::ZERO {
            return Self::zero();
        }
        let r = v.norm();
        Self {
            phase: v / r,
            log_magnitude: r.ln(),
        }
    }

    #[inline]
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    #[inline]
    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    /// `log10 |value|`.
    pub fn log10_abs(&self) -> f64 {
        self.log_magnitude / core::f64::consts::LN_10
    }

    /// Materializes the value; overflows to infinity past double range.
    pub fn to_complex(&self) -> Complex64 {
        self.phase * self.log_magnitude.exp()
    }

    /// True when the log-magnitude is an ordinary finite number (the value is
    /// neither zero, infinite, nor NaN).
    pub fn is_finite(&self) -> bool {
        self.log_magnitude.is_finite() && self.phase.re.is_finite() && self.phase.im.is_finite()
    }

    pub fn recip(&self) -> Self {
        Self {
            phase: self.phase.conj(),
            log_magnitude: -self.log_magnitude,
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        let mut phase = self.phase.powi(k);
        let n = phase.norm();
        if n > 0.0 {
            phase /= n;
        }
        Self {
            phase,
            log_magnitude: self.log_magnitude * k as f64,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            phase: -self.phase,
            log_magnitude: self.log_magnitude,
        }
    }
}

impl Mul for LogDet {
    type Output = LogDet;

    fn mul(self, rhs: LogDet) -> LogDet {
        let mut phase = self.phase * rhs.phase;
        let n = phase.norm();
        if n > 0.0 {
            phase /= n;
        }
        LogDet {
            phase,
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
        }
    }
}

impl MulAssign for LogDet {
    fn mul_assign(&mut self, rhs: LogDet) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let v = Complex64::new(-3.0, 4.0);
        let l = LogDet::from_complex(v);
        assert!((l.phase().norm() - 1.0).abs() < 1e-12);
        assert!((l.to_complex() - v).norm() < 1e-12);
    }

    #[test]
    fn zero_value() {
        let l = LogDet::zero();
        assert_eq!(l.to_complex(), Complex64::ZERO);
        let prod = l * LogDet::from_complex(Complex64::new(5.0, 1.0));
        assert_eq!(prod.to_complex(), Complex64::ZERO);
    }

    #[test]
    fn product_stays_in_range() {
        // 400 factors of magnitude e^10 overflow doubles but not the log form.
        let f = LogDet::from_complex(Complex64::from_polar(10.0f64.exp(), 0.7));
        let mut acc = LogDet::one();
        for _ in 0..400 {
            acc *= f;
        }
        assert!(acc.is_finite());
        assert!((acc.log_magnitude() - 4000.0).abs() < 1e-6);
        assert!((acc.phase().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recip_and_powi() {
        let v = Complex64::new(2.0, -1.0);
        let l = LogDet::from_complex(v);
        let back = (l * l.recip()).to_complex();
        assert!((back - Complex64::ONE).norm() < 1e-12);
        let cubed = l.powi(3).to_complex();
        assert!((cubed - v * v * v).norm() < 1e-10);
    }
}
