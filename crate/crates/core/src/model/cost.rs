use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ModelError, Problem, Solution};

/// Objective used by the terraforming solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostFunction {
    /// Task-agent settlement times only.
    SumOfCosts,
    /// Sum of costs plus non-wait moves of every movable obstacle.
    Cost1,
    /// `Cost1` plus non-wait moves each mover makes before picking up its obstacle.
    Cost2,
}

impl CostFunction {
    pub fn name(self) -> &'static str {
        match self {
            CostFunction::SumOfCosts => "sum-of-costs",
            CostFunction::Cost1 => "cost1",
            CostFunction::Cost2 => "cost2",
        }
    }

    /// Whether mover moves before pickup are charged.
    pub fn charges_approach(self) -> bool {
        self == CostFunction::Cost2
    }
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum-of-costs" | "soc" => Ok(CostFunction::SumOfCosts),
            "cost1" => Ok(CostFunction::Cost1),
            "cost2" => Ok(CostFunction::Cost2),
            other => Err(format!("unknown cost function `{other}`")),
        }
    }
}

/// Earliest timestep from which task agent `i` stays on its goal until the end.
pub fn cost_task_agent(problem: &Problem, solution: &Solution, agent: usize) -> Result<u64, ModelError> {
    let goal = problem.tasks[agent].goal;
    let path = solution.task_path(agent);
    if path.last() != Some(&goal) {
        return Err(ModelError::Unsettled(agent));
    }
    let settled_from = path.iter().rposition(|&v| v != goal).map_or(0, |t| t + 1);
    Ok(settled_from as u64)
}

pub fn sum_of_costs(problem: &Problem, solution: &Solution) -> Result<u64, ModelError> {
    (0..problem.tasks.len())
        .map(|i| cost_task_agent(problem, solution, i))
        .sum()
}

fn moves(path: &[crate::grid::Vertex]) -> u64 {
    path.windows(2).filter(|w| w[0] != w[1]).count() as u64
}

/// Non-wait moves of all movable obstacles over the whole solution.
pub fn obstacle_moves(solution: &Solution) -> u64 {
    let n = solution.states.first().map_or(0, |s| s.obstacles.len());
    (0..n).map(|k| moves(&solution.obstacle_path(k))).sum()
}

/// First timestep at which mover `j` stands on the current vertex of its
/// assigned obstacle.
pub fn pickup_time(problem: &Problem, solution: &Solution, mover: usize) -> Option<usize> {
    let k = problem.assigned_obstacle(mover);
    solution.states.iter().position(|s| s.movers[mover] == s.obstacles[k])
}

/// Non-wait mover moves made strictly before each mover's pickup timestep.
/// A mover that never picks up is charged for all of its moves.
pub fn mover_approach_moves(problem: &Problem, solution: &Solution) -> u64 {
    (0..problem.movers.len())
        .map(|j| {
            let path = solution.mover_path(j);
            let end = pickup_time(problem, solution, j).unwrap_or(path.len().saturating_sub(1));
            moves(&path[..=end.min(path.len().saturating_sub(1))])
        })
        .sum()
}

pub fn cost1(problem: &Problem, solution: &Solution) -> Result<u64, ModelError> {
    Ok(sum_of_costs(problem, solution)? + obstacle_moves(solution))
}

pub fn cost2(problem: &Problem, solution: &Solution) -> Result<u64, ModelError> {
    Ok(cost1(problem, solution)? + mover_approach_moves(problem, solution))
}

pub fn solution_cost(problem: &Problem, solution: &Solution, cost: CostFunction) -> Result<u64, ModelError> {
    match cost {
        CostFunction::SumOfCosts => sum_of_costs(problem, solution),
        CostFunction::Cost1 => cost1(problem, solution),
        CostFunction::Cost2 => cost2(problem, solution),
    }
}
