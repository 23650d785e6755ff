//! Numerical classification of the Liouville foliation.

pub mod classify;
pub mod fomenko;
pub mod labels;
pub mod singular;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::geometry::GeometryError;

pub use classify::{classify_level, LevelSetReport};
pub use fomenko::{fomenko_graph, fomenko_graph_static, Atom, Edge, FomenkoGraph, RMark};
pub use labels::{signature, Label};
pub use singular::{singular_level_report, AtomType, SingularLevel, SingularReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("β = {beta} is a singular level")]
    DegenerateLevel { beta: f64 },
    #[error("need at least 16 samples, got {samples}")]
    TooFewSamples { samples: usize },
    #[error("no graph data for system {system}")]
    UnknownSystem { system: String },
    #[error("numerics contradict the graph of {system}: {detail}")]
    TopologyMismatch { system: String, detail: String },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<GeometryError> for TopologyError {
    fn from(e: GeometryError) -> Self {
        TopologyError::Dynamics(e.into())
    }
}
