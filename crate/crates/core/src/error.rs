//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value, index, or structure violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive computation would visit more states than the configured cap.
    ///
    /// For color-average values this suggests switching to the sampled
    /// estimator; for property checks it suggests spot-check mode.
    #[error("enumeration of {needed} states exceeds cap {cap}; {hint}")]
    EnumerationTooLarge {
        needed: u128,
        cap: u64,
        hint: &'static str,
    },

    /// An API was called in a state or mode it does not support.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
