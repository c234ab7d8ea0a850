use gevrey_core::Error;
use serde::{Deserialize, Serialize};

/// Process exit codes.
pub mod exit {
    pub const DONE: i32 = 0;
    pub const UNDECIDED: i32 = 2;
    pub const INVALID_INPUT: i32 = 3;
    pub const CONSTRAINT_VIOLATION: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCode {
    Undecided,
    InvalidInput,
    ConstraintViolation,
}

/// A job that produced no result object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub code: FailureCode,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: FailureCode::InvalidInput, message: message.into(), line: None, column: None }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        let mut f = Self::invalid(e.to_string());
        if e.line() > 0 {
            f.line = Some(e.line());
            f.column = Some(e.column());
        }
        f
    }

    pub fn position(&self) -> Option<(usize, usize)> {
        self.line.zip(self.column)
    }

    pub fn exit_code(&self) -> i32 {
        match self.code {
            FailureCode::Undecided => exit::UNDECIDED,
            FailureCode::InvalidInput => exit::INVALID_INPUT,
            FailureCode::ConstraintViolation => exit::CONSTRAINT_VIOLATION,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidSpec(_) | Error::WindowTooSmall { .. } | Error::BetaOutOfRange(_) | Error::Unsupported(_) => {
                FailureCode::InvalidInput
            }
            Error::Undecided { .. } | Error::InconclusiveDivergence { .. } => FailureCode::Undecided,
            _ => FailureCode::ConstraintViolation,
        };
        Self { code, message: e.to_string(), line: None, column: None }
    }
}
