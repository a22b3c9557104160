//! Shared generators and helpers for the integration suites.

#![allow(dead_code)]

use tmapf::grid::{Cell, Graph, Vertex};
use tmapf::io::ScenarioRng;
use tmapf::model::{Problem, Solution, State, TaskAgent};
use tmapf::solver::with_assignment;

/// Random plain MAPF instance on a grid of at most 4x4 with at most two
/// static cells and one to three agents. `None` when the draw is unusable.
pub fn random_mapf(rng: &mut ScenarioRng) -> Option<Problem> {
    let (g, free) = random_grid(rng);
    let n = 1 + rng.below(3) as usize;
    if free.len() < n {
        return None;
    }
    let starts = &free[..n];
    let goals = shuffled(rng, free.clone());
    let tasks = (0..n)
        .map(|i| TaskAgent {
            start: starts[i],
            goal: goals[i],
        })
        .collect();
    Problem::mapf(g, tasks).ok()
}

/// Random tMAPF instance: grid of at most 4x4, up to two static cells, one
/// movable obstacle, one mover anywhere but a task start, one or two task
/// agents. The greedy assignment is fixed on the result.
pub fn random_tmapf(rng: &mut ScenarioRng) -> Option<Problem> {
    let (g, mut free) = random_grid(rng);
    let n = 1 + rng.below(2) as usize;
    if free.len() < n + 2 {
        return None;
    }
    let movable = free.pop().expect("non-empty");
    let starts: Vec<Vertex> = free[..n].to_vec();
    let goals = shuffled(rng, free.clone());
    let candidates: Vec<Vertex> = g.vertices().filter(|v| !starts.contains(v)).collect();
    let mover = candidates[rng.below(candidates.len() as u64) as usize];
    let tasks = (0..n)
        .map(|i| TaskAgent {
            start: starts[i],
            goal: goals[i],
        })
        .collect();
    let p = Problem::new(g, tasks, vec![mover], vec![movable]).ok()?;
    Some(with_assignment(&p))
}

/// A grid of 2..=4 by 2..=4 cells with up to two static cells, plus its
/// free cells in shuffled order.
fn random_grid(rng: &mut ScenarioRng) -> (Graph, Vec<Vertex>) {
    let w = 2 + rng.below(3) as u32;
    let h = 2 + rng.below(3) as u32;
    let cells: Vec<Cell> = (0..h).flat_map(|y| (0..w).map(move |x| Cell::new(x, y))).collect();
    let cells = shuffled(rng, cells);
    let n_static = rng.below(3) as usize;
    let g = Graph::with_static_obstacles(w, h, &cells[..n_static]);
    let free = cells[n_static..]
        .iter()
        .map(|&c| g.vertex(c).expect("in bounds"))
        .collect();
    (g, free)
}

pub fn shuffled<T>(rng: &mut ScenarioRng, mut items: Vec<T>) -> Vec<T> {
    for i in (1..items.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
    items
}

/// Per-entity trajectories of a solution.
#[derive(Clone, Debug)]
pub struct Tracks {
    pub tasks: Vec<Vec<Vertex>>,
    pub movers: Vec<Vec<Vertex>>,
    pub obstacles: Vec<Vec<Vertex>>,
}

impl Tracks {
    pub fn of(s: &Solution) -> Self {
        let first = &s.states[0];
        Tracks {
            tasks: (0..first.tasks.len()).map(|i| s.task_path(i)).collect(),
            movers: (0..first.movers.len()).map(|j| s.mover_path(j)).collect(),
            obstacles: (0..first.obstacles.len()).map(|k| s.obstacle_path(k)).collect(),
        }
    }

    /// Joint states again, every track padded with its last vertex.
    pub fn assemble(&self) -> Solution {
        let len = self
            .tasks
            .iter()
            .chain(&self.movers)
            .chain(&self.obstacles)
            .map(Vec::len)
            .max()
            .unwrap_or(1);
        let at = |track: &Vec<Vertex>, t: usize| track[t.min(track.len() - 1)];
        Solution::new(
            (0..len)
                .map(|t| State {
                    tasks: self.tasks.iter().map(|p| at(p, t)).collect(),
                    movers: self.movers.iter().map(|p| at(p, t)).collect(),
                    obstacles: self.obstacles.iter().map(|p| at(p, t)).collect(),
                })
                .collect(),
        )
    }
}

/// First timestep at which mover `j` stands on its obstacle, recomputed from
/// the raw trajectories.
pub fn first_pickup(problem: &Problem, s: &Solution, j: usize) -> Option<usize> {
    let k = problem.assigned_obstacle(j);
    s.states.iter().position(|st| st.movers[j] == st.obstacles[k])
}

/// Non-wait moves of every mover strictly before its pickup.
pub fn approach_moves(problem: &Problem, s: &Solution) -> u64 {
    let mut total = 0;
    for j in 0..problem.movers.len() {
        let end = first_pickup(problem, s, j).unwrap_or(s.states.len() - 1);
        total += (1..=end)
            .filter(|&t| s.states[t].movers[j] != s.states[t - 1].movers[j])
            .count() as u64;
    }
    total
}

/// Earliest timestep after which task `i` never leaves its goal.
pub fn settle_time(problem: &Problem, s: &Solution, i: usize) -> Option<usize> {
    let goal = problem.tasks[i].goal;
    let path = s.task_path(i);
    if *path.last()? != goal {
        return None;
    }
    Some(path.iter().rposition(|&v| v != goal).map_or(0, |p| p + 1))
}

/// `cost1` recomputed from first principles: settlement times plus obstacle
/// moves.
pub fn reference_cost1(problem: &Problem, s: &Solution) -> Option<u64> {
    let mut total = 0u64;
    for i in 0..problem.tasks.len() {
        total += settle_time(problem, s, i)? as u64;
    }
    for k in 0..problem.movables.len() {
        total += (1..s.states.len())
            .filter(|&t| s.states[t].obstacles[k] != s.states[t - 1].obstacles[k])
            .count() as u64;
    }
    Some(total)
}
