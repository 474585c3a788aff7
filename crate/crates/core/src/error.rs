use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("damping symbol vanishes at mode {mode}")]
    ZeroDamping { mode: i64 },

    #[error("forcing has energy at mode {mode} where the damping symbol vanishes")]
    ForcingOutsideDampedBand { mode: i64 },

    #[error("decay bound unavailable: {0}")]
    BoundUnavailable(String),

    #[error("inverse sum of the damping symbol is infinite on this grid")]
    InfiniteInverseSum,

    #[error("no finite subadditivity constant exists for this symbol")]
    NoFiniteConstant,

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("{}line {line}: {msg}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
