use std::path::PathBuf;

/// Errors raised by the planning library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical quantity failed its sign or finiteness check.
    #[error("invalid {quantity}: {value} ({reason})")]
    InvalidQuantity {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("source count must be at least 1, got {0}")]
    InvalidSourceCount(u64),

    #[error("no disc of radius {r_rf} m fits in a {width} m x {height} m field")]
    NoDiscFits { r_rf: f64, width: f64, height: f64 },

    #[error("source {index} at ({x}, {y}) lies outside the field")]
    SourceOutsideField { index: usize, x: f64, y: f64 },

    #[error("node field does not match the deployment field")]
    FieldMismatch,

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("cannot plot: {0}")]
    InvalidPlot(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
