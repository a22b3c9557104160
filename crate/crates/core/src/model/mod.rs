//! Formal MAPF / tMAPF objects: problems, joint states, solutions, the
//! state and transition validity rules, and the solution cost functions.

mod cost;
mod problem;
mod validity;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Vertex;

pub use cost::{
    cost1, cost2, cost_task_agent, mover_approach_moves, obstacle_moves, pickup_time, solution_cost, sum_of_costs,
    CostFunction,
};
pub use problem::{Mode, Problem, TaskAgent};
pub use validity::{validate_state, validate_transition, Rule, ValidityReport, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("task agent {0} never settles at its goal")]
    Unsettled(usize),
}

/// Joint configuration at one timestep.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub tasks: Vec<Vertex>,
    pub movers: Vec<Vertex>,
    pub obstacles: Vec<Vertex>,
}

impl State {
    /// All positions in `(tasks, movers, obstacles)` order.
    pub fn entries(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.tasks.iter().chain(&self.movers).chain(&self.obstacles).copied()
    }
}

/// A sequence of joint states, one per timestep `0..len`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub states: Vec<State>,
}

impl Solution {
    pub fn new(states: Vec<State>) -> Self {
        Solution { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn task_path(&self, i: usize) -> Vec<Vertex> {
        self.states.iter().map(|s| s.tasks[i]).collect()
    }

    pub fn mover_path(&self, j: usize) -> Vec<Vertex> {
        self.states.iter().map(|s| s.movers[j]).collect()
    }

    pub fn obstacle_path(&self, k: usize) -> Vec<Vertex> {
        self.states.iter().map(|s| s.obstacles[k]).collect()
    }

    /// Repeats the final state `n` more times.
    pub fn padded(&self, n: usize) -> Solution {
        let mut states = self.states.clone();
        if let Some(last) = self.states.last() {
            states.extend(std::iter::repeat_n(last.clone(), n));
        }
        Solution { states }
    }
}
