use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{rat_to_f64, Rat, Scalar};

const EPS: f64 = f64::EPSILON;

/// A complex double together with a bound on its distance from the value it
/// stands for. Arithmetic widens the bound conservatively, including the
/// rounding of the operation itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexApprox {
    pub real: f64,
    pub imag: f64,
    pub error_bound: f64,
}

impl ComplexApprox {
    pub fn new(real: f64, imag: f64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0);
        Self {
            real,
            imag,
            error_bound,
        }
    }

    pub fn exact(value: Complex64) -> Self {
        Self::new(value.re, value.im, 0.0)
    }

    pub fn from_complex(value: Complex64, error_bound: f64) -> Self {
        Self::new(value.re, value.im, error_bound)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.real, self.imag)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.real, -self.imag, self.error_bound)
    }

    /// Division; the bound assumes `|other| > other.error_bound`.
    pub fn divided_by(&self, other: &Self) -> Self {
        let q = self.value() / other.value();
        let denom = (other.abs() - other.error_bound).max(f64::MIN_POSITIVE);
        let err = (self.error_bound + q.norm() * other.error_bound) / denom + 4.0 * EPS * q.norm();
        Self::from_complex(q, err)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one_elem();
        for _ in 0..n {
            acc = acc.times(self);
        }
        acc
    }

    /// True when the two error disks intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        (self.value() - other.value()).norm() <= self.error_bound + other.error_bound
    }
}

impl Scalar for ComplexApprox {
    fn zero_elem() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    fn one_elem() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    fn from_rat(r: &Rat) -> Self {
        let v = rat_to_f64(r);
        Self::new(v, 0.0, EPS * v.abs())
    }

    fn plus(&self, other: &Self) -> Self {
        let v = self.value() + other.value();
        Self::from_complex(v, self.error_bound + other.error_bound + EPS * v.norm())
    }

    fn minus(&self, other: &Self) -> Self {
        let v = self.value() - other.value();
        Self::from_complex(v, self.error_bound + other.error_bound + EPS * v.norm())
    }

    fn times(&self, other: &Self) -> Self {
        let v = self.value() * other.value();
        let err = self.abs() * other.error_bound
            + other.abs() * self.error_bound
            + self.error_bound * other.error_bound
            + 4.0 * EPS * self.abs() * other.abs();
        Self::from_complex(v, err)
    }

    fn negated(&self) -> Self {
        Self::new(-self.real, -self.imag, self.error_bound)
    }

    fn is_zero_value(&self) -> bool {
        self.real == 0.0 && self.imag == 0.0 && self.error_bound == 0.0
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(12);
        if self.imag == 0.0 {
            write!(f, "{:.*}", prec, self.real)
        } else if self.real == 0.0 {
            write!(f, "{:.*}i", prec, self.imag)
        } else {
            let sign = if self.imag < 0.0 { '-' } else { '+' };
            write!(
                f,
                "({:.*} {} {:.*}i)",
                prec,
                self.real,
                sign,
                prec,
                self.imag.abs()
            )
        }
    }
}
