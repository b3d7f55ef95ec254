use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config entries or parameter values.
    #[error("{0}")]
    Usage(String),
    /// Integration or quadrature failure, or a consistency check that failed.
    #[error("{0}")]
    Numeric(String),
    /// The physics does not fit the request, e.g. an unbounded orbit.
    #[error("{0}")]
    Unsuitable(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Unsuitable(_) => 4,
        }
    }
}

impl From<fracmech::Error> for CliError {
    fn from(e: fracmech::Error) -> Self {
        use fracmech::Error as E;
        match e {
            E::InvalidParameter(_) | E::Domain(_) => CliError::Usage(e.to_string()),
            E::Unsuitable(_) => CliError::Unsuitable(e.to_string()),
            E::StepSizeUnderflow { .. }
            | E::MaxStepsExceeded { .. }
            | E::QuadratureTolerance { .. }
            | E::NoConvergence(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("cannot write output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("cannot write CSV: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("cannot serialize JSON: {e}"))
    }
}
