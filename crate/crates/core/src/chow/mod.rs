//! Intersection numbers in Chow rings of products of projective spaces:
//! graph closures of toric homomorphisms, their boundary degrees, and the
//! mixed degrees of a product cycle under a homomorphism pair.

mod abelian;
mod beta;
mod ring;
mod toric;

use thiserror::Error;

pub use abelian::{AbelianDegreeData, AbelianDegreeJson, DivisorClass, TableEntryJson};
pub use beta::{alpha_and_siu, beta_gamma_eval, AbelianMap, AlphaSiu, BetaGammaInput, Which};
pub use ring::{chow_degree, chow_mul, ChowClass, MultiProjRing};
pub use toric::{
    boundary_classes, graph_closure_class, toric_degree_on_class, toric_intersection_degree,
    toric_intersection_degree_by_ring,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("classes live in different rings: factors {left:?} and {right:?}")]
    RingMismatch { left: Vec<u32>, right: Vec<u32> },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("negative input: {0}")]
    Negative(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
