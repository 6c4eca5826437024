use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A cyclic factor below 2, an empty factor list, or an order that does not fit.
    InvalidGroup(String),
    /// Element index or coordinate outside the group.
    OutOfRange { index: usize, order: usize },
    /// Two operands live in different groups.
    GroupMismatch,
    /// An operation that needs a nonempty set was given an empty one.
    EmptySet,
    /// A parameter outside its documented domain.
    InvalidParameter(String),
    /// Exact arithmetic would overflow the supported integer range.
    Overflow,
    /// A bounded enumeration would exceed its limit.
    TooLarge(String),
    /// A search that should succeed found nothing; carries diagnostics.
    NotFound(String),
    /// A construction or claim failed its independent re-verification.
    VerificationFailed(String),
    /// The input violates a precondition the caller is responsible for.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGroup(msg) => write!(f, "invalid group: {msg}"),
            Error::OutOfRange { index, order } => {
                write!(
                    f,
                    "element index {index} out of range for group of order {order}"
                )
            }
            Error::GroupMismatch => f.write_str("operands belong to different groups"),
            Error::EmptySet => f.write_str("set is empty"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Overflow => f.write_str("exact integer arithmetic would overflow"),
            Error::TooLarge(msg) => write!(f, "instance too large: {msg}"),
            Error::NotFound(msg) => write!(f, "not found: {msg}"),
            Error::VerificationFailed(msg) => write!(f, "verification failed: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
