use thiserror::Error;

/// Errors produced by the library.
///
/// The variants map onto the CLI exit codes: `Domain`, `Minimality` and `Io`
/// are usage-class errors (exit 1), `Capability` means the requested exact
/// computation is too large for the configured cap (exit 2).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An edge set is not a spanning tree on [n], so it does not describe a
    /// minimal transposition generating set.
    #[error("minimality violation: {0}")]
    Minimality(String),

    /// The instance is too large for an exact computation under the
    /// configured cap.
    #[error("capability error: {what} requires n <= {cap}, got n = {n}; use the bound-based operations instead")]
    Capability { what: String, n: usize, cap: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn minimality(msg: impl Into<String>) -> Self {
        Error::Minimality(msg.into())
    }

    pub(crate) fn capability(what: impl Into<String>, n: usize, cap: usize) -> Self {
        Error::Capability {
            what: what.into(),
            n,
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
