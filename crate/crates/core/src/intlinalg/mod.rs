//! Exact integer and rational linear algebra.

mod matrix;
mod norm;
mod poly;
mod snf;
mod spectral;

pub use matrix::{c_matrix, kernel_vector, rat_inverse, IntMatrix, RatMatrix};
pub use norm::{AdaptedNorm, AdaptedNormData, Norm, NormBuilder, NormRegistry, SupNorm};
pub use poly::{
    char_poly, cyclotomic, has_cyclotomic_factor, has_root_of_unity, integer_roots,
    roots_outside_unit_circle, schur_stable, Poly,
};
pub use snf::{snf, SnfDecomposition};
pub use spectral::{eigenvalues, is_expanding, spectral, Eigenvalue, SpectralReport};

pub(crate) use norm::dot;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected a square matrix: {len} entries for {rows} rows")]
    NotSquare { rows: usize, len: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("C-matrix needs positive i dividing j, got i = {i}, j = {j}")]
    NotDivisible { i: u32, j: u32 },
    #[error("matrix is not expanding")]
    NotExpanding,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown norm '{0}'")]
    UnknownNorm(String),
}
