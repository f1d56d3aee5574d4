use thiserror::Error;

use crate::field::GridPoint;

/// Errors produced by field I/O, digraph construction and the analysis
/// pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A malformed input row. `line` is 1-based within the parsed file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported format: {0}")]
    Format(String),

    /// The grid description is inconsistent (bad dimensions, wrong point
    /// count, irregular indexing).
    #[error("grid error: {0}")]
    Grid(String),

    /// Two vectors are parallel, anti-parallel or zero within the angular
    /// tolerance, so the rotation sense between them is undefined. Carries
    /// the offending adjacency when raised on a grid.
    #[error("degenerate rotation angle (parallel, anti-parallel or zero vectors){}", fmt_adjacency(at))]
    DegenerateAngle { at: Option<(GridPoint, GridPoint)> },

    /// A grid point coincides with the requested spiral center, which would
    /// place a zero vector on the grid.
    #[error("spiral center coincides with grid point {0}")]
    CenterOnGridPoint(GridPoint),

    /// The brute-force homology oracle was asked for a digraph beyond its
    /// size guard.
    #[error("digraph with {vertices} vertices exceeds the oracle guard of {max}")]
    Scale { vertices: usize, max: usize },

    /// No closed polygon of index +1 enclosing the singular square exists at
    /// any threshold of the reduced digraph filtration.
    #[error("no singular polygon found at any filtration threshold")]
    PolygonNotFound,

    /// Fields of a time series do not share a common grid.
    #[error("grid specs of the field sequence differ")]
    SpecMismatch,
}

impl Error {
    /// Attaches the offending adjacency to a degenerate-angle error.
    pub(crate) fn with_adjacency(self, a: GridPoint, b: GridPoint) -> Self {
        match self {
            Error::DegenerateAngle { .. } => Error::DegenerateAngle { at: Some((a, b)) },
            other => other,
        }
    }
}

fn fmt_adjacency(at: &Option<(GridPoint, GridPoint)>) -> String {
    match at {
        Some((a, b)) => format!(" between adjacent points {a} and {b}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
