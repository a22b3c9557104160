use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::grid::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskAgent {
    pub start: Vertex,
    pub goal: Vertex,
}

/// Which validity rules apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Classical MAPF: movable obstacles are frozen in place and movers are ignored.
    Mapf,
    /// Terraforming MAPF.
    Tmapf,
}

/// A tMAPF instance. Plain MAPF is the case with no movers and no movable obstacles.
///
/// Mover `j` carries movable obstacle `assignment[j]`. When no assignment is
/// present the greedy one from [`crate::solver::assign_movers`] is used by the
/// solvers; the validity predicates then accept any co-moving mover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub graph: Graph,
    pub tasks: Vec<TaskAgent>,
    pub movers: Vec<Vertex>,
    pub movables: Vec<Vertex>,
    pub assignment: Option<Vec<usize>>,
}

impl Problem {
    pub fn new(
        graph: Graph,
        tasks: Vec<TaskAgent>,
        movers: Vec<Vertex>,
        movables: Vec<Vertex>,
    ) -> Result<Self, ModelError> {
        let problem = Problem {
            graph,
            tasks,
            movers,
            movables,
            assignment: None,
        };
        problem.check()?;
        Ok(problem)
    }

    pub fn mapf(graph: Graph, tasks: Vec<TaskAgent>) -> Result<Self, ModelError> {
        Problem::new(graph, tasks, Vec::new(), Vec::new())
    }

    pub fn with_assignment(mut self, assignment: Vec<usize>) -> Result<Self, ModelError> {
        check_assignment(&assignment, self.movables.len())?;
        self.assignment = Some(assignment);
        Ok(self)
    }

    pub fn has_terraforming(&self) -> bool {
        !self.movers.is_empty() || !self.movables.is_empty()
    }

    /// Obstacle index carried by mover `j`; identity when no assignment is set.
    pub fn assigned_obstacle(&self, mover: usize) -> usize {
        self.assignment.as_ref().map_or(mover, |a| a[mover])
    }

    /// Start vertex of the obstacle carried by mover `j`.
    pub fn mover_home(&self, mover: usize) -> Vertex {
        self.movables[self.assigned_obstacle(mover)]
    }

    /// Inverse of the assignment: obstacle index → mover index.
    pub fn carrier_of(&self, obstacle: usize) -> Option<usize> {
        match &self.assignment {
            Some(a) => a.iter().position(|&o| o == obstacle),
            None => (obstacle < self.movers.len()).then_some(obstacle),
        }
    }

    pub fn is_movable_home(&self, v: Vertex) -> bool {
        self.movables.contains(&v)
    }

    /// Total number of task agents and mover agents.
    pub fn entity_count(&self) -> usize {
        self.tasks.len() + self.movers.len()
    }

    /// The same map with every movable obstacle frozen as a static one and all
    /// movers removed.
    pub fn static_version(&self) -> Problem {
        let mut graph = self.graph.clone();
        for &m in &self.movables {
            graph.set_static(m, true);
        }
        Problem {
            graph,
            tasks: self.tasks.clone(),
            movers: Vec::new(),
            movables: Vec::new(),
            assignment: None,
        }
    }

    pub fn start_state(&self) -> super::State {
        super::State {
            tasks: self.tasks.iter().map(|t| t.start).collect(),
            movers: self.movers.clone(),
            obstacles: self.movables.clone(),
        }
    }

    fn check(&self) -> Result<(), ModelError> {
        let invalid = |msg: String| Err(ModelError::InvalidProblem(msg));
        let g = &self.graph;
        if self.movers.len() != self.movables.len() {
            return invalid(format!(
                "{} movers but {} movable obstacles",
                self.movers.len(),
                self.movables.len()
            ));
        }
        let all = self
            .tasks
            .iter()
            .flat_map(|t| [t.start, t.goal])
            .chain(self.movers.iter().copied())
            .chain(self.movables.iter().copied());
        for v in all {
            if !g.contains(v) {
                return invalid(format!("vertex {} outside the grid", v.0));
            }
        }
        let homes: HashSet<Vertex> = self.movables.iter().copied().collect();
        if homes.len() != self.movables.len() {
            return invalid("two movable obstacles share a start vertex".into());
        }
        for (k, &m) in self.movables.iter().enumerate() {
            if g.is_static(m) {
                return invalid(format!("movable obstacle {k} starts on a static obstacle"));
            }
        }
        for (i, t) in self.tasks.iter().enumerate() {
            for (what, v) in [("start", t.start), ("goal", t.goal)] {
                if g.is_static(v) || homes.contains(&v) {
                    return invalid(format!("task agent {i} {what} {} lies on an obstacle", g.cell(v)));
                }
            }
        }
        let mut starts = HashSet::new();
        for v in self.tasks.iter().map(|t| t.start).chain(self.movers.iter().copied()) {
            if !starts.insert(v) {
                return invalid(format!("two agents start at {}", g.cell(v)));
            }
        }
        let goals: HashSet<Vertex> = self.tasks.iter().map(|t| t.goal).collect();
        if goals.len() != self.tasks.len() {
            return invalid("two task agents share a goal".into());
        }
        if let Some(a) = &self.assignment {
            check_assignment(a, self.movables.len())?;
        }
        Ok(())
    }
}

fn check_assignment(assignment: &[usize], n: usize) -> Result<(), ModelError> {
    let mut seen = vec![false; n];
    if assignment.len() != n {
        return Err(ModelError::InvalidProblem(format!(
            "assignment covers {} movers, expected {n}",
            assignment.len()
        )));
    }
    for &o in assignment {
        if o >= n || std::mem::replace(&mut seen[o], true) {
            return Err(ModelError::InvalidProblem(
                "assignment is not a permutation of the movable obstacles".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Cell;

    fn v(g: &Graph, x: u32, y: u32) -> Vertex {
        g.vertex(Cell::new(x, y)).unwrap()
    }

    #[test]
    fn rejects_unbalanced_movers() {
        let g = Graph::new(3, 3);
        let err = Problem::new(g.clone(), vec![], vec![v(&g, 0, 0)], vec![]).unwrap_err();
        assert!(matches!(err, ModelError::InvalidProblem(_)));
    }

    #[test]
    fn rejects_task_goal_on_movable() {
        let g = Graph::new(3, 3);
        let tasks = vec![TaskAgent {
            start: v(&g, 0, 0),
            goal: v(&g, 1, 1),
        }];
        assert!(Problem::new(g.clone(), tasks, vec![v(&g, 2, 2)], vec![v(&g, 1, 1)]).is_err());
    }

    #[test]
    fn mover_may_start_under_static_obstacle() {
        let g = Graph::with_static_obstacles(3, 3, &[Cell::new(0, 1)]);
        let tasks = vec![TaskAgent {
            start: v(&g, 0, 0),
            goal: v(&g, 2, 2),
        }];
        Problem::new(g.clone(), tasks, vec![v(&g, 0, 1)], vec![v(&g, 1, 1)]).unwrap();
    }

    #[test]
    fn static_version_freezes_movables() {
        let g = Graph::new(3, 3);
        let p = Problem::new(g.clone(), vec![], vec![v(&g, 0, 0)], vec![v(&g, 1, 1)]).unwrap();
        let s = p.static_version();
        assert!(s.graph.is_static(v(&g, 1, 1)));
        assert!(s.movers.is_empty() && s.movables.is_empty());
    }

    #[test]
    fn assignment_must_be_permutation() {
        let g = Graph::new(3, 3);
        let p = Problem::new(
            g.clone(),
            vec![],
            vec![v(&g, 0, 0), v(&g, 2, 0)],
            vec![v(&g, 1, 1), v(&g, 1, 2)],
        )
        .unwrap();
        assert!(p.clone().with_assignment(vec![0, 0]).is_err());
        let p = p.with_assignment(vec![1, 0]).unwrap();
        assert_eq!(p.mover_home(0), v(&g, 1, 2));
        assert_eq!(p.carrier_of(0), Some(1));
    }
}
