use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Degeneracies of a projected diagram or of a planar polyline. Every variant names
/// the offending indices so a caller can perturb and retry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonGeneric {
    #[error("segments {seg_a} and {seg_b} cross at |sin angle| = {sin_angle:e}, below the transversality bound")]
    Tangency {
        seg_a: usize,
        seg_b: usize,
        sin_angle: f64,
    },
    #[error("double points on segments {first:?} and {second:?} are {distance:e} apart")]
    TriplePoint {
        first: (usize, usize),
        second: (usize, usize),
        distance: f64,
    },
    #[error("segments {seg_a} and {seg_b} meet at or near a vertex (u = {u:e})")]
    VertexHit { seg_a: usize, seg_b: usize, u: f64 },
    #[error("projected segment {index} has length {length:e}")]
    ZeroLengthSegment { index: usize, length: f64 },
    #[error("polyline reverses direction at vertex {vertex} (exterior angle {angle})")]
    Reversal { vertex: usize, angle: f64 },
}

/// Location-carrying parse failure for the text formats.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("sampling density violated at step {index}: {reason}")]
    SamplingDensity { index: usize, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-generic input: {0}")]
    NonGeneric(#[from] NonGeneric),
    #[error("curve is not Legendrian: residual {residual:e} at step {index}")]
    NotLegendrian { residual: f64, index: usize },
    #[error("integer extraction for {quantity} failed: value {value}, residual {residual:e}")]
    Residual {
        quantity: &'static str,
        value: f64,
        residual: f64,
    },
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("generation failed for seed {seed} after {attempts} attempts: {reason}")]
    Generation {
        seed: u64,
        attempts: usize,
        reason: String,
    },
}

impl Error {
    /// Stable short tag used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::SamplingDensity { .. } => "sampling_density",
            Error::InvalidInput(_) => "invalid_input",
            Error::NonGeneric(_) => "non_generic",
            Error::NotLegendrian { .. } => "not_legendrian",
            Error::Residual { .. } => "residual",
            Error::Identity(_) => "identity",
            Error::Oracle(_) => "oracle",
            Error::Generation { .. } => "generation",
        }
    }
}
