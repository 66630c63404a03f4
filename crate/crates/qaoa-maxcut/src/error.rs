use std::fmt;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by graph generation, simulation, search, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation would exceed a configured resource cap.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Rejection sampling gave up before producing an instance.
    #[error("generation failed after {attempts} attempts{}", CutHistogram(histogram))]
    GenerationFailure {
        attempts: u64,
        /// Observed (maxcut value, count) pairs, ascending by value.
        histogram: Vec<(u32, u64)>,
    },

    /// A statistic is undefined for the given data (zero variance, zero optimum, ...).
    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    /// The optimizer hit a non-finite objective value.
    #[error("search aborted: {0}")]
    SearchAbort(String),

    /// A text document did not match the expected format.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct CutHistogram<'a>(&'a [(u32, u64)]);

impl fmt::Display for CutHistogram<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return Ok(());
        }
        write!(f, "; observed maxcut values:")?;
        for (value, count) in self.0 {
            write!(f, " {value}x{count}")?;
        }
        Ok(())
    }
}
