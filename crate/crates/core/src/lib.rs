//! Exact-arithmetic toolkit for parabolic moment maps on `T*(p x C^n)`.
//!
//! The crate builds explicit points of the zero fiber of the moment map and of
//! the parabolic Calogero-Moser fiber, brings block upper triangular matrices
//! to a Jordan P-semicanonical form, and certifies dimension and freeness
//! claims with exact rank computations over the rationals.

pub mod calogero;
pub mod commands;
pub mod components;
pub mod error;
pub mod exec;
pub mod json;
pub mod linalg;
pub mod moment;
pub mod parabolic;
pub mod report;
pub mod semicanonical;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{ColVec, Mat, Rat, RowVec};
pub use parabolic::{ComponentIndex, ParabolicContext, Region};
