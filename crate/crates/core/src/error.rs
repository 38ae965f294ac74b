use thiserror::Error;

use crate::coeff::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("g-symbol index {index} is outside 1..{modulus} (n = {modulus})")]
    GIndexOutOfRange { index: u32, modulus: u32 },
    #[error("ring mismatch: {left:?} vs {right:?}")]
    RingMismatch { left: Ring, right: Ring },
    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("partition parts must be weakly decreasing, got {0:?}")]
    NotWeaklyDecreasing(Vec<u32>),
    #[error("partition has {parts} parts but {rows} were requested")]
    TooManyParts { parts: usize, rows: usize },
    #[error("column {0} appears twice")]
    DuplicateColumn(usize),
    #[error("column {column} does not fit in a grid of {columns} columns")]
    ColumnOutOfRange { column: usize, columns: usize },
    #[error(
        "flux violation: |top| = {top} must equal |bottom| + rows = {bottom} + {rows}"
    )]
    Flux { top: usize, bottom: usize, rows: usize },
    #[error("a system needs at least one row and one column")]
    EmptyGrid,
    #[error("charge modulus must be at least 1")]
    ZeroModulus,
    #[error("expected {expected} row types, got {got}")]
    RowTypeCount { expected: usize, got: usize },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalibrationError {
    #[error("reference state is not admissible: {0}")]
    NotAdmissible(String),
    #[error("reference state charges disagree at row {row}, edge {edge}: derived {derived}, printed {printed}")]
    ChargeMismatch {
        row: usize,
        edge: usize,
        derived: u32,
        printed: u32,
    },
    #[error("vertex at row {row}, column {column} has weight zero under the slot convention")]
    ZeroVertex { row: usize, column: usize },
    #[error("Yang-Baxter smoke test failed on {failures} boundaries")]
    YangBaxter { failures: usize },
    #[error("no R-matrix orientation satisfies [[R,R,R]] = 0")]
    Orientation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YbSystemError {
    #[error("tensor factor mismatch in commutator: {0}")]
    Shape(String),
    #[error("symbolic evaluation requested for an inverted endomorphism")]
    NeedsPoint,
    #[error("matrix is singular at the sample point")]
    Singular,
    #[error("product is not scalar: entry ({row}, {col}) = {entry}")]
    NotScalar {
        row: usize,
        col: usize,
        entry: String,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    YbSystem(#[from] YbSystemError),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
