//! Exit-code contract: 2 validation, 3 numerical failure, 4 identity failures.

use std::fmt;

pub const VALIDATION: u8 = 2;
pub const NUMERICAL: u8 = 3;
pub const IDENTITIES: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
    /// Print the usage text along with the message.
    pub usage: bool,
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self {
            code: VALIDATION,
            error: anyhow::anyhow!(msg.into()),
            usage: false,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            usage: true,
            ..Self::validation(msg)
        }
    }

    pub fn identities(failures: usize, total: usize) -> Self {
        Self {
            code: IDENTITIES,
            error: anyhow::anyhow!("{failures} of {total} identity checks failed"),
            usage: false,
        }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: NUMERICAL,
            error: error.into(),
            usage: false,
        }
    }
}

impl From<dll_core::Error> for Failure {
    fn from(e: dll_core::Error) -> Self {
        let code = if e.is_validation() { VALIDATION } else { NUMERICAL };
        Self {
            code,
            error: e.into(),
            usage: false,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}
