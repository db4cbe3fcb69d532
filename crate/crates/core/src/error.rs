use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty target graph")]
    EmptyGraph,

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("node {id} out of range for {side} side of size {len}")]
    NodeOutOfRange {
        side: &'static str,
        id: usize,
        len: usize,
    },

    #[error("hybrid network is inconsistent: {0}")]
    InconsistentHybrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability vector is not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("unreachable probability mass on auxiliary node {0} (no affiliation edges)")]
    UnreachableMass(usize),

    #[error("desired distribution puts mass on target node {0} which has no affiliation edges")]
    UnaffiliatedMass(usize),

    #[error("absorbing node {0}; increase alpha or fix affiliation coverage")]
    Absorbing(usize),

    #[error("auxiliary chain absorbed at node {aux} (target walker at {target} has no affiliation edges)")]
    AuxiliaryAbsorbed { aux: usize, target: usize },

    #[error("metropolis-hastings chain mis-initialized: state {0} has zero desired or proposal probability")]
    ChainInit(usize),

    #[error("no effective samples (estimated population is zero)")]
    NoEffectiveSamples,

    #[error("NRMSE undefined for zero-mass label")]
    ZeroMassLabel,

    #[error("singular weight system: {0}")]
    Singular(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("region contains no venues")]
    EmptyRegion,

    #[error("zoom-in did not terminate within depth {0}; too many coincident venues")]
    ZoomDepthExceeded(usize),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("replication with seed {seed} failed: {source}")]
    Replication {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("figure export: {0}")]
    Figure(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than a failing run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidRegion(_)
        )
    }
}
