use thiserror::Error;

use crate::parabolic::Region;

/// Every failure the library can report. Variant names double as the
/// machine-readable error names surfaced by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic polynomial does not split over the rationals")]
    IrrationalEigenvalue,

    #[error("matrix has rank {rank}, expected rank 1")]
    NotRankOne { rank: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("composition {alpha:?} is not a composition of {n}")]
    BadComposition { n: usize, alpha: Vec<usize> },

    #[error("composition has {len} blocks; more than 5 requires the conjecture flag")]
    TooManyBlocks { len: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("matrix is not invertible in the parabolic group")]
    NotInvertible,

    /// Cell indices are 1-based, matching every external format.
    #[error("entry ({row},{col}) lies outside {region}")]
    NotInRegion {
        region: Region,
        row: usize,
        col: usize,
    },

    #[error("eigenvalue parameters are not pairwise distinct")]
    DegenerateSpectrum,

    #[error("a + a' equals alpha; the support covers every index")]
    NotDefective,
}

impl Error {
    /// Stable identifier used in JSON error output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::IrrationalEigenvalue => "IrrationalEigenvalue",
            Error::NotRankOne { .. } => "NotRankOne",
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::BadComposition { .. } => "BadComposition",
            Error::TooManyBlocks { .. } => "TooManyBlocks",
            Error::OutOfRange(_) => "OutOfRange",
            Error::NotInvertible => "NotInvertible",
            Error::NotInRegion {
                region: Region::P, ..
            } => "NotInP",
            Error::NotInRegion { .. } => "NotInRegion",
            Error::DegenerateSpectrum => "DegenerateSpectrum",
            Error::NotDefective => "NotDefective",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
