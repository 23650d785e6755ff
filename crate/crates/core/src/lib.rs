//! Magic billiards in an ellipse and in a confocal elliptic annulus.
//!
//! The crate covers the confocal geometry, the discrete dynamics with the
//! boundary maps (axis flips and the half-turn), algebraic periodicity
//! certificates, and a numerical classification of the Liouville foliation.

pub mod certificates;
pub mod dynamics;
pub mod geometry;
pub mod topology;

pub use dynamics::{BoundaryPhase, Component, MagicKind, TableShape, TableSpec};
pub use geometry::{CausticId, CausticKind, ConfocalFamily, Vec2};
