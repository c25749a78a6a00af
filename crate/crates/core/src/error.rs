use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point ({x}, {y}) lies outside the unit square")]
    OutsideDomain { x: f64, y: f64 },

    #[error("circulant embedding is not positive semi-definite: min eigenvalue {min_eigenvalue:e} at padding factor {padding}")]
    NotPositiveDefinite { min_eigenvalue: f64, padding: usize },

    #[error("lattice with {cells} cells per side cannot be coarsened")]
    NotCoarsenable { cells: usize },

    #[error("meshing failed: {0}")]
    Meshing(String),

    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("linear solver failed: {reason} (relative residual {residual:e})")]
    Solver { reason: String, residual: f64 },

    #[error("time step {step}: {source}")]
    TimeStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("level {level}, sample {index}: {source}")]
    Sample {
        level: usize,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("expression error at column {column}: {message}")]
    Expression { column: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("reference cache mismatch: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }

    /// True for errors caused by bad input rather than numerics or I/O.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::Expression { .. } | Error::InvalidArgument(_) => true,
            Error::Stage { source, .. }
            | Error::Sample { source, .. }
            | Error::TimeStep { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Stage { source, .. }
            | Error::Sample { source, .. }
            | Error::TimeStep { source, .. } => source.is_io(),
            _ => false,
        }
    }
}
