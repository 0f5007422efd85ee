//! Exact arithmetic over ℚ and ℚ(i), plus dense exact linear algebra.

pub mod gauss;
pub mod matrix;
pub mod rational;

pub use gauss::GaussRational;
pub use matrix::{MatrixQi, Rref};
pub use rational::Rational;
