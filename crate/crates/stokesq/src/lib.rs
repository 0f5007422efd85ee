//! Exact computation with quivers of perverse sheaves on the affine line:
//! Stokes multipliers, Fourier-transform and smash quivers, Beilinson
//! extensions, and quiver extraction from polynomial/Laurent branched
//! covers via numerical monodromy tracking.
//!
//! Everything downstream of input parsing and permutation extraction is
//! exact arithmetic over ℚ(i); floating point appears only inside the
//! root-tracking continuation of the `covers` module.

pub mod builtin;
pub mod cli;
pub mod covers;
pub mod error;
pub mod exact;
pub mod format;
pub mod random;
pub mod quiver;
pub mod stokes;

pub use error::{Error, Result};
pub use exact::{GaussRational, MatrixQi, Rational};
