//! Constraints and the single-entity searches used by the high-level solvers.

mod astar;
mod constraint;
mod context;
mod eta;
mod mover;
mod path;
mod table;

use thiserror::Error;

pub use astar::spacetime_astar;
pub use constraint::{Aspect, Constraint, EntityId, Locus, Polarity, TimedConstraint};
pub use context::SearchContext;
pub use eta::eta_lower_bound;
pub use mover::mover_lowlevel;
pub use path::EntityPath;
pub use table::ConstraintTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LowLevelError {
    #[error("no path within the search horizon")]
    Infeasible,
    #[error("two positive constraints pin the entity to different vertices at one timestep")]
    Contradictory,
    #[error("search deadline reached")]
    Timeout,
    #[error("malformed low-level query: {0}")]
    Malformed(String),
}
