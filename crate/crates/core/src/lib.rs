//! Exact counting, enumeration, sampling and regularity testing of
//! unimodular triangulations of the grid `{0..=m} x {0..=n}`.

pub mod count;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod mesh;
pub mod region;
pub mod regularity;
pub mod reporting;
pub mod shapes;
pub mod strips;
pub mod triangulation;
pub mod walk;

pub use count::BigCount;
pub use error::{Error, Result};
pub use geometry::{Edge, LatticePoint, Triangle};
pub use grid::GridSpec;
pub use triangulation::{Triangulation, ValidationReport, Violation};
