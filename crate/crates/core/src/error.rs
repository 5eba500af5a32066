use crate::geometry::Point;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coincident points at {0}")]
    CoincidentPoints(Point),
    #[error("unsupported beta {0}: only beta >= 1 is supported")]
    UnsupportedBeta(f64),
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("duplicate point: ids {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("stale index: it does not index the given point set")]
    StaleIndex,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("density infeasible: placed {placed} of {requested} points before {rejections} consecutive rejections")]
    DensityInfeasible {
        placed: usize,
        requested: usize,
        rejections: u64,
    },
    #[error("power-law fit needs at least 3 positive samples, got {0}")]
    InsufficientSamples(usize),
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("node id {id} out of range for {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
