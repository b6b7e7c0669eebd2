//! Exact algebra over algebraic numbers: real algebraic numbers in
//! isolating-interval form, number fields with designated embeddings,
//! and rational matrices with symbolic Jordan decomposition.

mod alg;
mod apoly;
pub(crate) mod field;
mod matrix;
mod realalg;

pub use alg::AlgebraicNumber;
pub(crate) use alg::to_common_field;
pub use apoly::AlgPoly;
pub use matrix::{
    amat_identity, amat_inv, amat_mul, char_poly, eigenvalues, jordan_decompose,
    split_char_poly, AMat, JordanDecomposition, RationalMatrix,
};
pub use realalg::RealAlg;
