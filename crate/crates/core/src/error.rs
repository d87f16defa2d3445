use std::path::PathBuf;

use thiserror::Error;

use crate::model::{EventTime, PacketId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Structural malformation of an instance. Order-respecting violations are
/// not errors; see [`crate::model::validate_order_respecting`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("instance must contain at least one frame")]
    NoFrames,
    #[error("instance has no arrivals")]
    NoArrivals,
    #[error("packet {0} is out of range (k={1}, frames={2})")]
    OutOfRange(PacketId, u32, u32),
    #[error("packet {0} appears more than once")]
    Duplicate(PacketId),
    #[error("packet {0} never arrives")]
    Missing(PacketId),
    #[error("frame {frame}: packet {j} arrives at phase {arr} before packet {prev_j} (phase {prev_arr})")]
    IndexOrder {
        frame: u32,
        j: u32,
        arr: u32,
        prev_j: u32,
        prev_arr: u32,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Structure(#[from] StructureError),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    /// A policy reached a state its own guarantees rule out.
    #[error("{policy} internal consistency failure at {time}: {message}")]
    Consistency {
        policy: String,
        time: EventTime,
        message: String,
    },

    /// A decision that the simulator cannot apply to the buffer.
    #[error("{policy} made an illegal decision at {time}: {message}")]
    IllegalDecision {
        policy: String,
        time: EventTime,
        message: String,
    },

    #[error("instance has {frames} frames; exhaustive search is limited to {limit} (use branch and bound)")]
    OracleLimit { frames: u32, limit: u32 },

    #[error("branch and bound exceeded its node budget of {0}")]
    NodeBudget(u64),

    #[error("certificate is infeasible for B={b}: {detail}")]
    InfeasibleCertificate { b: usize, detail: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
