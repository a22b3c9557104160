//! File formats, canonical instances and seeded scenario generation.
//!
//! All formats are UTF-8 text with `\n` line endings; the grammars live in
//! `docs/formats.md`.

mod canonical;
mod map;
mod rng;
mod scenario;
mod solution;
mod warehouse;

use thiserror::Error;

use crate::model::ModelError;

pub use canonical::{canonical_instance, canonical_instances, NamedInstance};
pub use map::{emit_map, parse_map, MapData};
pub use rng::ScenarioRng;
pub use scenario::{
    emit_scenario, generate_scenario, parse_scenario, MoverLine, MoverStartPolicy, ScenarioFile, TaskLine,
};
pub use solution::{emit_solution, parse_solution, SolutionFile, SolutionMeta, StateCells};
pub use warehouse::{generate_warehouse, workstation_cells, WarehouseLayout, WarehouseProfile};

#[derive(Debug, Error)]
pub enum IoError {
    /// Malformed text, with 1-based line and column.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Inconsistent generator or run parameters.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("malformed solution file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    File(#[from] std::io::Error),
}

pub(crate) fn parse_error(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}
