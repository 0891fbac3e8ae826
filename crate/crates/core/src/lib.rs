//! Exact and certified-numeric tools for semiabelian varieties: Ext classes
//! and realizability over endomorphism algebras, Chow intersection numbers on
//! products of projective spaces, canonical heights, and Chern form checks.

pub mod arith;
pub mod bhc;
pub mod chern;
pub mod chow;
pub mod heights;
pub mod linalg;
pub mod semiabelian;
