use thiserror::Error;

/// Errors returned by profile algebra, query sessions and the generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A query asked for more candidates than the session allows.
    #[error("query of size {size} exceeds the session limit t = {max}")]
    QueryTooLarge { size: usize, max: usize },
    /// The scoring vector lies outside the span computable with queries of size `t`.
    #[error("scoring vector is not computable with queries of size {t}")]
    NotComputable { t: usize },
    /// A brute-force step was refused; `m` is the requested size.
    #[error("{what}: size {m} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        m: usize,
        cap: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
