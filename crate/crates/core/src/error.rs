use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric input fell outside the domain of the operation.
    #[error("domain error: {param} = {value} {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: order {param} = {value} exceeds the cap {max}")]
    OrderTooLarge {
        param: &'static str,
        value: i64,
        max: usize,
    },

    /// The angular factor exp(i C n e^{-iEt/hbar}) would leave the f64 range.
    #[error(
        "overflow: angular factor at order {order} exceeds exp(700); largest safe order is {limit}"
    )]
    AngularOverflow { order: i64, limit: usize },
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            param,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
