//! Linear factors of the form over the splitting field of the
//! characteristic polynomial.

mod decompose;
mod roots;
mod sbasis;

pub(crate) use decompose::certify;
pub use decompose::{
    decompose_form, decompose_form_with_tolerance, expansion_residual, orthonormal_factorization,
    Decomposition, FactorCoeffs, LinearFactor, CERTIFICATION_TOLERANCE,
};
pub use roots::{
    char_roots, count_real_roots, poly_roots, RootDatum, RootValue, DEFAULT_PRECISION, MAX_SWEEPS,
};
pub use sbasis::{block_matrix_b, special_basis_matrix, special_basis_shifted, MixedMatrix};
