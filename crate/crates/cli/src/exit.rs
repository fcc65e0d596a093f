use std::fmt;

use pfg_core::circuits::MeasureError;
use pfg_core::{AnalysisError, NetlistError, SignalError, SpectralError};

/// Process exit codes.
pub const USAGE: u8 = 2;
pub const ANALYSIS: u8 = 3;
pub const CAPABILITY: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn analysis(message: impl Into<String>) -> Self {
        Self {
            code: ANALYSIS,
            message: message.into(),
        }
    }

    pub fn capability(message: impl Into<String>) -> Self {
        Self {
            code: CAPABILITY,
            message: message.into(),
        }
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<NetlistError> for CliError {
    fn from(e: NetlistError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<SignalError> for CliError {
    fn from(e: SignalError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::InvalidConfig(_) => Self::usage(e.to_string()),
            _ => Self::analysis(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        let code = match &e {
            MeasureError::Signal(_) => USAGE,
            _ => ANALYSIS,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::TooManyGates { .. } => CAPABILITY,
            AnalysisError::NonPositiveStd(_) | AnalysisError::ZeroTrials => USAGE,
            AnalysisError::Measure(_) => ANALYSIS,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}
