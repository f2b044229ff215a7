use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("rational input: {0}")]
    RationalInput(String),
    #[error("factor budget exceeded: {0}")]
    FactorBudgetExceeded(String),
    #[error("sieve budget exceeded: {requested} > {budget}")]
    SieveBudgetExceeded { requested: u64, budget: u64 },
    #[error("illegal expansion: {0}")]
    IllegalExpansion(String),
    #[error("search cap exhausted: {0}")]
    SearchCapExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::PrecisionExhausted(msg.into())
}
