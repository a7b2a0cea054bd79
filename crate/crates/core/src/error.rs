use num_bigint::BigInt;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Domain errors are violated preconditions; budget errors mean a computation
/// was abandoned because a configured work limit ran out.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{module}: {message}")]
    Domain {
        module: &'static str,
        message: String,
    },
    #[error("polyring: syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("arith: factorization budget exhausted, unfactored residual {residual}")]
    Unfactored { residual: BigInt },
    #[error("{module}: budget exceeded: {message}")]
    Budget {
        module: &'static str,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(module: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            module,
            message: message.into(),
        }
    }

    pub(crate) fn budget(module: &'static str, message: impl Into<String>) -> Self {
        Error::Budget {
            module,
            message: message.into(),
        }
    }

    /// True for errors caused by an exhausted work budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Unfactored { .. } | Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
