//! Homogeneous and decomposable forms attached to families of linear
//! recurrences that share one recurrence relation.
//!
//! Given `k` linearly independent sequences satisfying the same order-`k`
//! relation, [`form_builder::build_form`] produces a degree-`k` form `F` with
//! `F(G_n^(1), …, G_n^(k)) = δ^n` for every integer `n`, where
//! `δ = (-1)^(k+1)·γ₀`. [`factorization::decompose_form`] splits `F` into
//! linear factors over the splitting field of the characteristic polynomial.

pub mod algebra;
pub mod binary;
pub mod error;
pub mod factorization;
pub mod form_builder;
pub mod recurrence;
pub mod verify;

pub use error::{Error, Result};
