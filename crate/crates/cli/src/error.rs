// SPDX-License-Identifier: Apache-2.0

use std::fmt::Display;

use redfield_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unreadable config, schema or constraint violation.
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    /// The computation produced something that fails validation.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Display) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl Display) -> Self {
        CliError::Internal(message.to_string())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Internal(_) => 3,
        }
    }

    /// Maps a core error raised while computing `field`. Input errors exit
    /// with 2, numerical failures with 3.
    pub fn from_core(field: &str, e: Error) -> Self {
        match e {
            Error::InvalidOmega(_)
            | Error::InvalidA(_)
            | Error::KmsViolation { .. }
            | Error::ImaginaryRabi(_)
            | Error::ConstraintViolation { .. }
            | Error::RegimeError(_)
            | Error::NotZeroTemperature { .. }
            | Error::InvalidArgument(_)
            | Error::StepTooLarge { .. } => CliError::config(field, e),
            _ => CliError::internal(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let constraint = Error::ConstraintViolation {
            constraint: "nu > mu",
            detail: String::new(),
        };
        assert_eq!(CliError::from_core("x", constraint).code(), 2);
        assert_eq!(
            CliError::from_core("x", Error::KmsViolation { a: 1.0, d: 2.0 }).code(),
            2
        );
        let breach = Error::NoConvergence {
            iterations: 3,
            residual: 1.0,
        };
        assert_eq!(CliError::from_core("x", breach).code(), 3);
        assert_eq!(CliError::from_core("x", Error::InvalidState("trace".into())).code(), 3);
    }
}
