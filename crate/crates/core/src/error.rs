use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RibbonError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("edges {edge_a} and {edge_b} cross but no crossing assignment is recorded")]
    MissingAssignment { edge_a: usize, edge_b: usize },

    #[error("degenerate intersection between edges {edge_a} and {edge_b}: {reason}")]
    DegenerateIntersection { edge_a: usize, edge_b: usize, reason: String },

    #[error("width must be positive, got {0}")]
    ZeroWidth(f64),

    #[error("no folding choice recorded for fold vertex {0}")]
    MissingFoldChoice(usize),

    #[error("grid text has bad dimensions: {0}")]
    BadDimensions(String),

    #[error("row {row} must contain exactly one X and one O")]
    RowViolation { row: usize },

    #[error("column {column} must contain exactly one X and one O")]
    ColumnViolation { column: usize },

    #[error("X and O share the cell at row {row}, column {column}")]
    SharedCell { row: usize, column: usize },

    #[error("no positive width is allowed for this ribbon")]
    NoPositiveWidth,

    #[error("centerline/boundary crossing at ({x}, {y}) between faces {face_a} and {face_b} has no layering")]
    UnresolvedCrossing { face_a: usize, face_b: usize, x: f64, y: f64 },

    #[error("linking-number sum {0} is odd")]
    OddCrossingSum(i64),

    #[error("fold pattern has length {got}, expected {expected}")]
    BadPatternLength { expected: usize, got: usize },

    #[error("bad generator parameters: {0}")]
    BadParameters(String),

    #[error("starting configuration is not allowed at any tested width")]
    InfeasibleStart,

    #[error("bad render settings: {0}")]
    BadRenderSpec(String),

    #[error("ribbon is not allowed at width {0}")]
    NotAllowed(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = RibbonError> = std::result::Result<T, E>;
