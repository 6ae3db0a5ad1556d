use thiserror::Error;

/// Errors raised by the verification library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision of {bits} bits is below the minimum of {min} bits")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("precision exhausted: value is indistinguishable from zero at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("path enumeration refused: {required} paths required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
