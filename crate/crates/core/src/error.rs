use thiserror::Error;

/// Errors produced by the graph, metric, spectral, gap, embedding and lab layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no {d}-regular graph on {n} vertices: n*d is odd")]
    OddDegreeSum { n: usize, d: usize },

    #[error("invalid sampler parameters: {0}")]
    InvalidParameters(String),

    #[error("no simple graph after {attempts} configuration-model attempts")]
    SamplerExhausted { attempts: usize },

    #[error("switch rejected: {0}")]
    SwitchRejected(&'static str),

    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not regular")]
    NotRegular,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("map value {value} at vertex {vertex} is outside 0..{m}")]
    ImageOutOfRange { vertex: usize, value: usize, m: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("vector dimension mismatch at vertex {vertex}: expected {expected}, found {found}")]
    DimensionMismatch { vertex: usize, expected: usize, found: usize },

    #[error("map hits points at infinite distance ({0} and {1})")]
    InfiniteDistance(usize, usize),

    #[error("function class is empty: {0}")]
    EmptyClass(String),

    #[error("search strategy does nothing: {0}")]
    EmptyStrategy(&'static str),

    #[error("metric needs at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
