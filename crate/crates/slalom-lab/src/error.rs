use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the driver's exit codes: verification failures exit
/// with 1, usage errors with 2, and malformed certificates with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A certificate's guarantee was contradicted by an exact check, or a
    /// threshold function failed to produce an index.
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    /// A required certificate was not supplied.
    #[error("missing certificate: {0}")]
    MissingCertificate(String),

    /// An operation's precondition failed; the payload names the clause.
    #[error("precondition failed in {op}: {clause}")]
    Precondition { op: &'static str, clause: String },

    /// Two slaloms or conditions were built over different partitions.
    #[error("mismatched partitions: {0}")]
    MismatchedPartitions(String),

    /// A block word or column value was out of range.
    #[error("range violation: {0}")]
    RangeViolation(String),

    /// Explicit enumeration was requested for a block too large to enumerate.
    #[error("block too large for explicit representation: {0}")]
    BlockTooLarge(String),

    /// Two points agreed on every bit up to their distinguishing depth.
    #[error("points indistinguishable within depth {depth}")]
    TieAtDepth { depth: u64 },

    /// The oracle's answers became inconsistent on the query log.
    #[error("ultrafilter oracle inconsistency: {0}")]
    OracleInconsistency(String),

    /// A scan ran out of window before finding what it needed.
    #[error("window exhausted: {0}")]
    WindowExhausted(String),

    /// Bad arguments to the command-line driver.
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::MalformedCertificate(_) | Error::MissingCertificate(_) => 3,
            _ => 1,
        }
    }
}
