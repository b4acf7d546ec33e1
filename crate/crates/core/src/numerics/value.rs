use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number carrying an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub value: Complex64,
    pub abs_err: f64,
}

impl ComplexValue {
    pub fn new(value: Complex64, abs_err: f64) -> Self {
        debug_assert!(abs_err.is_finite() && abs_err >= 0.0, "abs_err = {abs_err}");
        Self { value, abs_err }
    }

    /// An exactly known value.
    pub fn exact(value: Complex64) -> Self {
        Self { value, abs_err: 0.0 }
    }

    pub fn real(x: f64) -> Self {
        Self::exact(Complex64::new(x, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.value.conj(), self.abs_err)
    }

    /// Multiplication by an exactly known scalar.
    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.value * k, self.abs_err * k.norm())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = ComplexValue::real(1.0);
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self::exact(z)
    }
}

impl Add for ComplexValue {
    type Output = ComplexValue;

    fn add(self, rhs: Self) -> Self {
        let value = self.value + rhs.value;
        let rounding = f64::EPSILON * value.norm();
        Self::new(value, self.abs_err + rhs.abs_err + rounding)
    }
}

impl Sub for ComplexValue {
    type Output = ComplexValue;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexValue {
    type Output = ComplexValue;

    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_err)
    }
}

impl Mul for ComplexValue {
    type Output = ComplexValue;

    // |δ(fg)| ≤ |f|δg + |g|δf + δfδg
    fn mul(self, rhs: Self) -> Self {
        let value = self.value * rhs.value;
        let err = self.norm() * rhs.abs_err
            + rhs.norm() * self.abs_err
            + self.abs_err * rhs.abs_err
            + 2.0 * f64::EPSILON * value.norm();
        Self::new(value, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_error_is_first_order() {
        let a = ComplexValue::new(Complex64::new(2.0, 0.0), 1e-10);
        let b = ComplexValue::new(Complex64::new(0.0, 3.0), 2e-10);
        let p = a * b;
        assert_eq!(p.value, Complex64::new(0.0, 6.0));
        assert!((p.abs_err - (2.0 * 2e-10 + 3.0 * 1e-10)).abs() < 1e-14);
    }

    #[test]
    fn powi_zero_is_one() {
        let a = ComplexValue::real(5.0);
        assert_eq!(a.powi(0).value, Complex64::new(1.0, 0.0));
        assert_eq!(a.powi(3).value, Complex64::new(125.0, 0.0));
    }
}
