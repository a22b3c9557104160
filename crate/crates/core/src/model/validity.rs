//! State and transition validity.
//!
//! Rule ids are shared by both modes so that a tMAPF check of an instance
//! without movers or movable obstacles reports exactly what the MAPF check
//! reports:
//!
//! | id    | meaning                                                         |
//! |-------|-----------------------------------------------------------------|
//! | S1    | two agents (task or mover) share a vertex                       |
//! | S2    | a task agent is on a static obstacle, or a movable obstacle is on a static obstacle or on another movable obstacle |
//! | S3'   | a task agent shares a vertex with a movable obstacle            |
//! | T1'   | an agent or obstacle jumps along a non-edge                     |
//! | T2'   | two entries swap positions across one edge                      |
//! | T3'   | a movable obstacle moves without its mover underneath it        |

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Mode, ModelError, Problem, State};
use crate::grid::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    S1,
    S2,
    S3,
    T1,
    T2,
    T3,
    Start,
    Goal,
    ObstacleRestore,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::S1 => "S1",
            Rule::S2 => "S2",
            Rule::S3 => "S3'",
            Rule::T1 => "T1'",
            Rule::T2 => "T2'",
            Rule::T3 => "T3'",
            Rule::Start => "start",
            Rule::Goal => "goal",
            Rule::ObstacleRestore => "obstacle-restore",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: Rule, detail: String) {
        self.violations.push(Violation { rule, detail });
    }
}

#[derive(Clone, Copy)]
enum Entry {
    Task(usize),
    Mover(usize),
    Obstacle(usize),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Task(i) => write!(f, "task {i}"),
            Entry::Mover(j) => write!(f, "mover {j}"),
            Entry::Obstacle(k) => write!(f, "obstacle {k}"),
        }
    }
}

/// The entries of `state` taking part in the given mode, with their labels.
fn entries(state: &State, mode: Mode) -> Vec<(Entry, Vertex)> {
    let mut out: Vec<(Entry, Vertex)> = state
        .tasks
        .iter()
        .enumerate()
        .map(|(i, &v)| (Entry::Task(i), v))
        .collect();
    if mode == Mode::Tmapf {
        out.extend(state.movers.iter().enumerate().map(|(j, &v)| (Entry::Mover(j), v)));
        out.extend(
            state
                .obstacles
                .iter()
                .enumerate()
                .map(|(k, &v)| (Entry::Obstacle(k), v)),
        );
    }
    out
}

fn check_shape(problem: &Problem, state: &State, mode: Mode) -> Result<(), ModelError> {
    let (nm, no) = match mode {
        Mode::Mapf => (0, 0),
        Mode::Tmapf => (problem.movers.len(), problem.movables.len()),
    };
    if state.tasks.len() != problem.tasks.len() || state.movers.len() != nm || state.obstacles.len() != no {
        return Err(ModelError::Malformed(format!(
            "state has {}/{}/{} tasks/movers/obstacles, expected {}/{}/{}",
            state.tasks.len(),
            state.movers.len(),
            state.obstacles.len(),
            problem.tasks.len(),
            nm,
            no
        )));
    }
    if let Some(v) = state.entries().find(|&v| !problem.graph.contains(v)) {
        return Err(ModelError::Malformed(format!("vertex {} outside the grid", v.0)));
    }
    Ok(())
}

/// Checks S1, S2 and S3' on one joint state.
///
/// In [`Mode::Mapf`] the state lists task agents only and the movable
/// obstacles of the problem count as static ones.
pub fn validate_state(problem: &Problem, state: &State, mode: Mode) -> Result<ValidityReport, ModelError> {
    check_shape(problem, state, mode)?;
    let g = &problem.graph;
    let mut report = ValidityReport::default();

    let agents: Vec<(Entry, Vertex)> = entries(state, mode)
        .into_iter()
        .filter(|(e, _)| !matches!(e, Entry::Obstacle(_)))
        .collect();
    for (a, &(ea, va)) in agents.iter().enumerate() {
        for &(eb, vb) in &agents[a + 1..] {
            if va == vb {
                report.push(Rule::S1, format!("{ea} and {eb} at {}", g.cell(va)));
            }
        }
    }

    for (i, &v) in state.tasks.iter().enumerate() {
        let on_frozen_movable = mode == Mode::Mapf && problem.movables.contains(&v);
        if g.is_static(v) || on_frozen_movable {
            report.push(Rule::S2, format!("task {i} on static obstacle {}", g.cell(v)));
        }
    }

    if mode == Mode::Tmapf {
        for (k, &w) in state.obstacles.iter().enumerate() {
            if g.is_static(w) {
                report.push(Rule::S2, format!("obstacle {k} on static obstacle {}", g.cell(w)));
            }
            for (k2, &w2) in state.obstacles.iter().enumerate().skip(k + 1) {
                if w == w2 {
                    report.push(Rule::S2, format!("obstacles {k} and {k2} at {}", g.cell(w)));
                }
            }
        }
        for (i, &v) in state.tasks.iter().enumerate() {
            for (k, &w) in state.obstacles.iter().enumerate() {
                if v == w {
                    report.push(Rule::S3, format!("task {i} under obstacle {k} at {}", g.cell(v)));
                }
            }
        }
    }
    Ok(report)
}

/// Checks T1', T2' and T3' between two consecutive joint states.
///
/// T3' is checked against the assigned mover when the problem carries an
/// assignment, and against any mover otherwise.
pub fn validate_transition(
    problem: &Problem,
    from: &State,
    to: &State,
    mode: Mode,
) -> Result<ValidityReport, ModelError> {
    check_shape(problem, from, mode)?;
    check_shape(problem, to, mode)?;
    let g = &problem.graph;
    let mut report = ValidityReport::default();
    let a = entries(from, mode);
    let b = entries(to, mode);

    for (&(e, x), &(_, y)) in a.iter().zip(&b) {
        if !g.is_edge(x, y) {
            report.push(Rule::T1, format!("{e} jumps {} -> {}", g.cell(x), g.cell(y)));
        }
    }

    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (xi, yi) = (a[i].1, b[i].1);
            let (xj, yj) = (a[j].1, b[j].1);
            if xi != yi && xi == yj && xj == yi {
                report.push(
                    Rule::T2,
                    format!("{} and {} swap across {} - {}", a[i].0, a[j].0, g.cell(xi), g.cell(yi)),
                );
            }
        }
    }

    if mode == Mode::Tmapf {
        for (k, (&w, &w2)) in from.obstacles.iter().zip(&to.obstacles).enumerate() {
            if w == w2 {
                continue;
            }
            let carried_by = |j: usize| from.movers[j] == w && to.movers[j] == w2;
            let escorted = match problem.carrier_of(k) {
                Some(j) if problem.assignment.is_some() => carried_by(j),
                _ => (0..from.movers.len()).any(carried_by),
            };
            if !escorted {
                report.push(
                    Rule::T3,
                    format!("obstacle {k} moves {} -> {} unescorted", g.cell(w), g.cell(w2)),
                );
            }
        }
    }
    Ok(report)
}
