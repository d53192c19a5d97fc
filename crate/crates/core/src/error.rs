use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument violates its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Too few points for a cycle to make sense.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point {index} at ({x}, {y}) lies outside the square")]
    Containment { index: usize, x: f64, y: f64 },

    #[error("exact solver handles at most {cap} points, got {n}; use the strips construction instead")]
    TooLarge { n: usize, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("selected cities are not connected in the lattice")]
    Disconnected,

    /// A lemma hypothesis does not hold for the given geometry.
    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("solver policy violated: {0}")]
    Policy(String),

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("invariant violated in trial with seed {seed}: {what}")]
    Invariant { seed: u64, what: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
