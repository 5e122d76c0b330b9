//! Experiment runner: configuration, Monte Carlo BER/FER/energy simulation
//! and CSV output.
//!
//! Every frame draws its message and noise from its own ChaCha8 stream keyed
//! by `(seed, snr point, frame index)`, and frames are processed in fixed-size
//! batches, so results do not depend on the number of worker threads.

use std::path::Path;

use thiserror::Error;

use crate::channel::ChannelError;
use crate::decoding::DecodingError;
use crate::gf2lin::Gf2Error;
use crate::metrics::MetricsError;
use crate::shaping::ShapingError;

mod config;
mod experiment;

pub use config::{
    ldpc_params, parity_check_for, random_systematic, ConstructionSource, DecoderChoice, ExperimentConfig,
    GallagerEnsemble, Prepared, System,
};
pub use experiment::{
    energy_report, energy_report_for, run_experiment, run_prepared, write_csv, EnergyReport, TrialResult,
    CSV_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
    #[error(transparent)]
    Decoding(#[from] DecodingError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code: 1 configuration, 2 I/O, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Io { .. } | HarnessError::Csv(_) => 2,
            HarnessError::Numerical(_) | HarnessError::Channel(_) | HarnessError::Metrics(_) => 3,
            HarnessError::Config(_)
            | HarnessError::Shaping(_)
            | HarnessError::Decoding(_)
            | HarnessError::Gf2(_) => 1,
        }
    }
}
