//! High-level solvers: CBS / TF-CBS over a constraint tree and PBS / TF-PBS
//! over a priority tree.

mod cbs;
mod conflict;
mod pbs;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Graph, Vertex, UNREACHABLE};
use crate::lowlevel::{
    eta_lower_bound, mover_lowlevel, spacetime_astar, ConstraintTable, EntityId, EntityPath, LowLevelError,
    SearchContext, TimedConstraint,
};
use crate::model::{CostFunction, Problem, Solution, State};

pub use cbs::{cbs_solve, tfcbs_solve};
pub use conflict::{detect_conflicts, footprints_clash, paths_collide, Conflict, ConflictKind};
pub use pbs::{pbs_solve, priority_search, tfpbs_solve, topological_order, CycleError, PriorityMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("this solver handles plain MAPF only; the problem has movers or movable obstacles")]
    RequiresMapf,
}

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub cost: CostFunction,
    /// Wall-clock budget; `None` runs until the tree is exhausted.
    pub timeout: Option<Duration>,
    /// Cap on high-level expansions, reported as a timeout when hit.
    pub node_limit: Option<u64>,
    /// Global low-level horizon; defaults to `|V| + entities * diameter`.
    pub horizon: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cost: CostFunction::Cost1,
            timeout: Some(DEFAULT_TIMEOUT),
            node_limit: None,
            horizon: None,
        }
    }
}

impl SolverConfig {
    pub fn with_cost(cost: CostFunction) -> Self {
        SolverConfig {
            cost,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub high_level_expanded: u64,
    pub high_level_generated: u64,
    pub low_level_expanded: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved {
        solution: Solution,
        cost: u64,
    },
    /// The search space was exhausted: no solution exists (within the horizon).
    Infeasible,
    /// A priority search gave up; this proves nothing about feasibility.
    NoSolution,
    Timeout,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Solved { .. } => "solved",
            Outcome::Infeasible => "infeasible",
            Outcome::NoSolution => "no-solution",
            Outcome::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub stats: SearchStats,
    /// Mover-to-obstacle assignment the solver used.
    pub assignment: Vec<usize>,
}

impl SolveReport {
    pub fn cost(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Solved { cost, .. } => Some(cost),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            Outcome::Solved { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

/// Greedy mover-to-obstacle assignment. Movers pick in index order; each takes
/// the closest unclaimed movable obstacle by grid distance with every obstacle
/// ignored, ties going to the lower obstacle index.
pub fn assign_movers(problem: &Problem) -> Vec<usize> {
    let g = &problem.graph;
    let mut claimed = vec![false; problem.movables.len()];
    let mut out = Vec::with_capacity(problem.movers.len());
    for &m in &problem.movers {
        let dist = g.bfs_distances(m, |_| true);
        let best = problem
            .movables
            .iter()
            .enumerate()
            .filter(|(k, _)| !claimed[*k])
            .min_by_key(|&(k, &o)| (dist[o.index()], k))
            .map(|(k, _)| k)
            .expect("as many movable obstacles as movers");
        debug_assert_ne!(dist[problem.movables[best].index()], UNREACHABLE);
        claimed[best] = true;
        out.push(best);
    }
    out
}

/// The problem with an assignment fixed, computing the greedy one if absent.
pub fn with_assignment(problem: &Problem) -> Problem {
    match problem.assignment {
        Some(_) => problem.clone(),
        None => problem
            .clone()
            .with_assignment(assign_movers(problem))
            .expect("greedy assignment is a permutation"),
    }
}

/// Cooperative deadline polled between high-level expansions.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Budget {
    started: Instant,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
}

impl Budget {
    pub(crate) fn new(config: &SolverConfig) -> Self {
        let started = Instant::now();
        Budget {
            started,
            deadline: config.timeout.map(|d| started + d),
            node_limit: config.node_limit,
        }
    }

    pub(crate) fn exhausted(&self, expanded: u64) -> bool {
        self.node_limit.is_some_and(|n| expanded >= n) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// Entity bookkeeping shared by both tree searches.
pub(crate) struct Entities<'p> {
    pub problem: &'p Problem,
    pub cost: CostFunction,
    pub n_tasks: usize,
    pub homes: Vec<Vertex>,
}

impl<'p> Entities<'p> {
    pub(crate) fn new(problem: &'p Problem, cost: CostFunction) -> Self {
        let homes = (0..problem.movers.len()).map(|j| problem.mover_home(j)).collect();
        Entities {
            problem,
            cost,
            n_tasks: problem.tasks.len(),
            homes,
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.n_tasks + self.homes.len()
    }

    pub(crate) fn id(&self, slot: usize) -> EntityId {
        EntityId::from_slot(slot, self.n_tasks)
    }

    pub(crate) fn context(&self, config: &SolverConfig, budget: &Budget) -> SearchContext<'p> {
        let g: &'p Graph = &self.problem.graph;
        let cap = config
            .horizon
            .unwrap_or_else(|| SearchContext::default_horizon(g, self.count()));
        SearchContext::new(g, cap).with_deadline(budget.deadline)
    }

    pub(crate) fn plan(
        &self,
        ctx: &SearchContext<'_>,
        slot: usize,
        table: &ConstraintTable,
    ) -> Result<EntityPath, LowLevelError> {
        match self.id(slot) {
            EntityId::Task(i) => {
                let t = self.problem.tasks[i];
                let mask = self.problem.graph.static_mask();
                spacetime_astar(ctx, t.start, t.goal, table, mask).map(EntityPath::Task)
            }
            EntityId::Mover(j) => mover_lowlevel(ctx, self.problem.movers[j], self.homes[j], table, self.cost),
        }
    }

    pub(crate) fn eta(
        &self,
        ctx: &SearchContext<'_>,
        mover: usize,
        table: &ConstraintTable,
    ) -> Result<Option<usize>, LowLevelError> {
        eta_lower_bound(ctx, self.problem.movers[mover], self.homes[mover], table)
    }

    /// Timed constraints from per-mover pickup lower bounds. The obstacle is
    /// still on its start vertex at the pickup timestep itself, so the vertex
    /// opens one step after the bound.
    pub(crate) fn timed(&self, etas: &[Option<usize>]) -> Vec<TimedConstraint> {
        etas.iter()
            .enumerate()
            .map(|(j, &eta)| TimedConstraint {
                mover: j,
                vertex: self.homes[j],
                release: eta.map(|t| t + 1),
            })
            .collect()
    }

    /// Joint states for `paths`, padded to the longest one.
    pub(crate) fn assemble(&self, paths: &[EntityPath]) -> Solution {
        let len = paths.iter().map(EntityPath::len).max().unwrap_or(1);
        let p = self.problem;
        let states = (0..len)
            .map(|t| {
                let tasks = (0..self.n_tasks).map(|i| paths[i].body_at(t)).collect();
                let movers = (0..self.homes.len())
                    .map(|j| paths[self.n_tasks + j].body_at(t))
                    .collect();
                let mut obstacles = p.movables.clone();
                for j in 0..self.homes.len() {
                    let path = &paths[self.n_tasks + j];
                    obstacles[p.assigned_obstacle(j)] = path.obstacle_at(t).expect("mover path");
                }
                State {
                    tasks,
                    movers,
                    obstacles,
                }
            })
            .collect();
        Solution::new(states)
    }
}
