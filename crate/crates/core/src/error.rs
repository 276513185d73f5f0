use std::path::PathBuf;

use thiserror::Error;

/// Every failure the toolkit reports.
///
/// Variants carry enough context (line, epoch, index) to produce a single-line
/// diagnostic at the command-line boundary.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("gravitational singularity: position norm is zero{}", fmt_epoch(*.epoch))]
    Singularity { epoch: Option<f64> },

    #[error("non-finite value while {0}")]
    Overflow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("SP3 parse error at line {line}: {msg}")]
    Sp3Parse { line: usize, msg: String },

    #[error("satellite {0} not present in SP3 input")]
    UnknownSatellite(String),

    #[error("no rotation matrix for epoch {epoch} s")]
    MissingRotation { epoch: f64 },

    #[error("rotation matrix at epoch {epoch} s is not a proper rotation: {msg}")]
    InvalidRotation { epoch: f64, msg: String },

    #[error("insufficient data: need at least {needed} {what}, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("data gap between {from} s and {to} s (expected spacing {spacing} s)")]
    DataGap { from: f64, to: f64, spacing: f64 },

    #[error("lambda dataset is empty")]
    EmptyDataset,

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("design matrix is rank deficient (column {column})")]
    SingularDesign { column: usize },

    #[error("degenerate leverage (h_ii = 1) at observation {index}")]
    DegenerateLeverage { index: usize },

    #[error("reinitialization schedule error: {0}")]
    Schedule(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("at epoch {epoch} s: {source}")]
    AtEpoch {
        epoch: f64,
        #[source]
        source: Box<Error>,
    },
}

fn fmt_epoch(epoch: Option<f64>) -> String {
    epoch.map(|t| format!(" at epoch {t} s")).unwrap_or_default()
}

impl Error {
    pub fn at_epoch(self, epoch: f64) -> Self {
        match self {
            Error::Singularity { epoch: None } => Error::Singularity { epoch: Some(epoch) },
            e @ Error::AtEpoch { .. } => e,
            e => Error::AtEpoch {
                epoch,
                source: Box::new(e),
            },
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
