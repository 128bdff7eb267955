//! CLI error taxonomy and its mapping onto process exit codes.

use std::io;

/// Anything that can stop a CLI run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unusable configuration, flags, or sweep specification.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Error bubbled up from the model itself.
    #[error("model error: {0}")]
    Model(#[from] qar_core::Error),

    /// A row failed the first/second-law re-check at emission time.
    #[error("law violation at emission: {0}")]
    Law(String),

    /// A self-test invariant did not hold.
    #[error("self-test failure: {0}")]
    Selftest(String),

    /// Filesystem trouble, with the offending path.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// Exit-code contract: 0 success, 1 invalid configuration, 2 numerical
    /// failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            // Model errors split by cause: rejected inputs are configuration
            // problems; everything else is a numerical failure.
            CliError::Model(e) => match e {
                qar_core::Error::NonPositiveParameter { .. }
                | qar_core::Error::DegenerateBohrFrequency { .. }
                | qar_core::Error::Domain { .. }
                | qar_core::Error::ZeroFrequency { .. }
                | qar_core::Error::InvalidState { .. } => 1,
                _ => 2,
            },
            CliError::Law(_) | CliError::Selftest(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}
