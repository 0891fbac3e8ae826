//! Exact integer, rational and polynomial arithmetic.

pub mod factor;
pub mod poly;
pub mod rational;

pub use factor::{factor, irreducible_factors, Factorization};
pub use poly::IntPoly;
pub use rational::Rational;
