use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// Variants are grouped by how a front end should treat them: domain-type
/// errors (bad inputs, violated preconditions) versus accuracy errors
/// (a numerical method failed to reach its stated tolerance).
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension exceeds a configured cap, or a grid is too large.
    #[error("size: {0}")]
    Size(String),
    /// Matrix/vector dimensions are inconsistent.
    #[error("shape: {0}")]
    Shape(String),
    /// An argument lies outside its mathematical domain.
    #[error("domain: {0}")]
    Domain(String),
    /// An argument is outside the validity regime of an approximation.
    #[error("regime: {0}")]
    Regime(String),
    /// A quadrature or iterative method failed its accuracy estimate.
    #[error("accuracy: {0}")]
    Accuracy(String),
    /// A numerically degenerate configuration (e.g. momentum near the
    /// light cone) made a result unreliable.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),
    /// A Kraus set is not trace preserving within tolerance.
    #[error("channel integrity: {0}")]
    Channel(String),
    /// A four-vector is off its mass shell.
    #[error("shell: {0}")]
    Shell(String),
    /// A velocity reached or exceeded the speed of light.
    #[error("superluminal: {0}")]
    Superluminal(String),
    /// A state has (almost) no support inside a code space.
    #[error("out of code: {0}")]
    OutOfCode(String),
    /// A requested logical dimension exceeds the sector multiplicity.
    #[error("capacity: {0}")]
    Capacity(String),
    /// Packet spacing below the distinguishability bound.
    #[error("indistinguishable: {0}")]
    Indistinguishable(String),
    /// A file or JSON document does not match the expected schema.
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that a CLI should report as accuracy failures
    /// (exit code 3) rather than domain errors (exit code 2).
    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy(_) | Error::Degeneracy(_))
    }

    /// True for malformed input files / JSON (usage-level failures).
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Io(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
