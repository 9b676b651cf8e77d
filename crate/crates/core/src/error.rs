use std::path::PathBuf;

use crate::channel::Link;
use crate::rates::Zone;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{link} link: distance {distance:.3} m is below the 10 m validity floor of the path-loss model")]
    DistanceBelowFloor { link: Link, distance: f64 },

    #[error("path-loss model needs d >= 10 m, got {0} m")]
    OutOfModelRange(f64),

    #[error("relay not beneficial: beta_sr={beta_sr:.4e}, beta_rd={beta_rd:.4e}, beta_sd={beta_sd:.4e} (needs beta_sr >= beta_sd and beta_sr + beta_rd > beta_sd)")]
    RelayNotBeneficial {
        beta_sr: f64,
        beta_rd: f64,
        beta_sd: f64,
    },

    #[error("{0} zone is disabled by zeta (its amplitude coefficient is zero)")]
    ZoneDisabled(Zone),

    #[error("target rate {target} bit/s/Hz is not reachable: {reason}")]
    Infeasible { target: f64, reason: String },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("output encoding failed: {0}")]
    Encode(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the request itself (bad file, bad flag,
    /// bad sweep), as opposed to inputs the physical model cannot handle.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnknownPreset(_)
                | Error::Io { .. }
                | Error::Parse { .. }
                | Error::Encode(_)
        )
    }
}
