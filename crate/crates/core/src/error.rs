use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown builtin game `{0}`")]
    UnknownBuiltin(String),
    #[error("parameter `{name}` out of range: {reason}")]
    ParameterOutOfRange { name: String, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("invalid mixed action: {0}")]
    InvalidMixedAction(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
    #[error("invalid segment: endpoints coincide")]
    DegenerateSegment,
    #[error("region is empty")]
    EmptyRegion,
    #[error("value {0} is not attained by the column player")]
    ValueNotAttained(String),
    #[error("barycenter lies outside the convex hull of the grid")]
    OutsideHull,
    #[error("grid of {grid_size} points does not contain the query point {point}")]
    GridTooCoarse { grid_size: usize, point: String },
    #[error("random walk leaves the segment: {0}")]
    WalkOutOfRange(String),
    #[error("matrix of size {rows}x{cols} exceeds the enumeration cap {cap}x{cap}")]
    TooLarge { rows: usize, cols: usize, cap: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("{0}")]
    Precondition(String),
    #[error("cannot access `{path}`: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
