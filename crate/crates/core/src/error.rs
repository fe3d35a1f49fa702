use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} is {size}, cap is {cap}")]
    Capacity {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("multiplicity {numerator}/{denominator} is not a nonnegative integer")]
    NonIntegralMultiplicity { numerator: i64, denominator: i64 },
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("module decomposition failed: {0}")]
    ChopFailed(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, size: impl TryInto<u128>, cap: impl TryInto<u128>) -> Self {
        Error::Capacity {
            what,
            size: size.try_into().unwrap_or(u128::MAX),
            cap: cap.try_into().unwrap_or(u128::MAX),
        }
    }

    /// True for the capacity and budget family of errors.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
