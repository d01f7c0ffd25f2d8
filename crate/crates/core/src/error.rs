use alloc::string::String;

/// Everything that can go wrong in this crate.
///
/// The variants follow the failure classes used throughout: bad arguments
/// (`Usage`), inputs outside a function's mathematical domain (`Domain`,
/// `Precondition`), and internal self-checks that would contradict the
/// underlying geometry (`Inconsistent`).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
