//! Exact rational linear algebra and Q-algebras given by structure constants.

pub mod algebra;
pub mod lattice;
pub mod matrix;
pub mod membership;

pub use algebra::{algebra_mul, d_span_rank, d_span_rank_right, regular_representation, AlgebraElement, QAlgebra};
pub use lattice::{hermite_rows, integer_kernel};
pub use matrix::{integer_determinant, RatMatrix};
pub use membership::{image_membership, wedge_certificate, Membership};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("algebra element has {found} coefficients, expected {expected}")]
    ElementLength { expected: usize, found: usize },
    #[error(
        "span has Q-rank {q_rank}, not divisible by algebra dimension {dim}; the algebra is not a division algebra"
    )]
    NotDivisionAlgebra { q_rank: usize, dim: usize },
}
