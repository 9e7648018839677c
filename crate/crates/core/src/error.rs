use thiserror::Error;

use crate::geometry::Edge;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("edge {0} is not flippable")]
    NotFlippable(Edge),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("index {k} out of range 1..={max}")]
    OutOfRange { k: String, max: String },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
