use std::fmt;

/// Error class of a failed command, one exit code per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Parse,
    Validation,
    Numeric,
    Io,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Parse => 1,
            FailureKind::Validation => 2,
            FailureKind::Numeric => 3,
            FailureKind::Io => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Parse, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Validation, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: FailureKind::Io, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<fermient::Error> for Failure {
    fn from(e: fermient::Error) -> Self {
        use fermient::Error::*;
        let kind = match e {
            NotHermitian(_) | Numeric(_) => FailureKind::Numeric,
            Domain(_) | Invalid(_) | NotNormalized(_) | ModeMismatch { .. } | NotParityEigenstate => {
                FailureKind::Validation
            }
        };
        Self { kind, message: e.to_string() }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
