//! Output envelope, configuration and the mapping from failures to exit codes.

use serde::Serialize;
use serde_json::Value;

use arctic_kernel::Error;

pub const SCHEMA: &str = "arctic-kernel/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every command prints one of these.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub parameters: Value,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, parameters: Value, result: Value) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            version: VERSION,
            seed,
            parameters,
            result,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Options shared by the Monte Carlo commands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(
        seed: u64,
        samples: usize,
        format: Format,
        tol: Option<f64>,
    ) -> Result<Self, Failure> {
        if samples == 0 {
            return Err(Failure::Input("sample count must be at least 1".into()));
        }
        if let Some(t) = tol {
            if !(t > 0.0) {
                return Err(Failure::Input(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(Self {
            seed,
            samples,
            format,
            tol,
        })
    }
}

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRecord {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub n: usize,
    pub a: f64,
    pub seed: u64,
    pub command: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Failure {
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Input(_) => 2,
            Failure::Convergence(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(m) => Failure::Input(m),
            Error::Resource(_) => Failure::Input(e.to_string()),
            Error::Singularity(_) | Error::Convergence { .. } => {
                Failure::Convergence(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}
