//! Exact arithmetic substrate: rationals, dense matrices, univariate
//! polynomials and sparse homogeneous forms.
//!
//! Everything generic is written against [`Scalar`], which has two
//! implementations: [`Rat`] (exact) and [`ComplexApprox`] (a double-precision
//! complex value carrying a running error bound).

mod complex;
mod form;
mod matrix;
mod poly;
mod rat;

pub use complex::ComplexApprox;
pub use form::{all_monomials, form_expand_product, superscript, Form, HomogeneousForm, Monomial};
pub use matrix::{Matrix, RatMatrix};
pub use poly::UniPoly;
pub use rat::{parse_rat, rat, rat_pow, rat_serde, rat_to_f64, ratio, Rat};

use std::fmt::Debug;

/// Field-like coefficient type shared by the exact and approximate paths.
pub trait Scalar: Clone + Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Structural zero test. For approximations this is only true for an
    /// exact zero with a zero error bound.
    fn is_zero_value(&self) -> bool;
}

impl Scalar for Rat {
    fn zero_elem() -> Self {
        num_traits::Zero::zero()
    }
    fn one_elem() -> Self {
        num_traits::One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Integers, for fraction-free work. `from_rat` truncates toward zero.
impl Scalar for num_bigint::BigInt {
    fn zero_elem() -> Self {
        num_traits::Zero::zero()
    }
    fn one_elem() -> Self {
        num_traits::One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        debug_assert!(r.is_integer());
        r.to_integer()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}
