use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A free parameter violates the bound its method requires.
    #[error("parameter {name} = {value} out of range: {bound}")]
    ParameterOutOfRange {
        name: &'static str,
        value: String,
        bound: String,
    },

    /// Interval evaluation never separated the two sides below the cap.
    #[error("comparison unresolved at {cap_bits}-bit precision cap")]
    UnresolvedComparison { cap_bits: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// The problem is valid but lies outside the regime the method covers.
    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("verification failure: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
