use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An oracle returned a value the algorithm is not defined for.
    #[error("input contract violated: {0}")]
    InputContract(String),

    /// A cell or sample enumeration would exceed the configured budget.
    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// An exact integer quantity does not fit the requested representation.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The object is not in the state required by the operation.
    #[error("invalid state: {0}")]
    State(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
