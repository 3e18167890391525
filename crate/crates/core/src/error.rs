use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Pair of ordered pairs whose triple counts disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeWitness {
    /// Reference pair `(x, y)` for the class.
    pub reference: (usize, usize),
    /// Offending pair `(x', y')` in the same class.
    pub offending: (usize, usize),
    /// Class of both pairs.
    pub class: usize,
    /// Class indices `(i, j)` of the disagreeing count.
    pub indices: (usize, usize),
    pub expected: u64,
    pub found: u64,
}

impl fmt::Display for SchemeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs {:?} and {:?} (class {}) give p_{{{},{}}} = {} vs {}",
            self.reference,
            self.offending,
            self.class,
            self.indices.0,
            self.indices.1,
            self.expected,
            self.found
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambiguous clustering: values {low} and {high} are closer than 2*eps_snap but farther than eps_snap")]
    AmbiguousCluster { low: f64, high: f64 },

    #[error("dimension {0} is too small (need n >= 2)")]
    DimensionTooSmall(usize),

    #[error("degree {requested} exceeds the Gegenbauer cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("point {index} has squared norm {norm_sq}, not 1")]
    NotUnitNorm { index: usize, norm_sq: String },

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("inner-product set is not antipodal: {0}")]
    NotAntipodalSpectrum(String),

    #[error("inner product {value} of pair ({x}, {y}) matches no spectrum value")]
    UnclassifiedPair { x: usize, y: usize, value: String },

    #[error("not an association scheme: {0}")]
    NotAScheme(Box<SchemeWitness>),

    #[error("invalid class matrix: {0}")]
    InvalidClassMatrix(String),

    #[error("E_{index} is not a primitive idempotent: {reason}")]
    NotIdempotent { index: usize, reason: String },

    #[error("residual idempotent split failed: {0}")]
    SplitFailure(String),

    #[error("eigenmatrix extraction failed: {0}")]
    NonDiagonalizable(String),

    #[error("negative Krein number q_{{{i},{j}}}^{k} = {value}")]
    NegativeKrein {
        i: usize,
        j: usize,
        k: usize,
        value: String,
    },

    #[error("singular matrix")]
    Singular,

    #[error("construction unavailable: {0}")]
    ConstructionUnavailable(String),

    #[error("parameters out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
