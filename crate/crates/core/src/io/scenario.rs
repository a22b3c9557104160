use std::fmt::{self, Write};
use std::str::FromStr;

use super::{parse_error, workstation_cells, IoError, MapData, ScenarioRng};
use crate::grid::{Cell, Graph, Vertex};
use crate::model::{Problem, TaskAgent};

const MAGIC: &str = "tmapf-scenario v1";

/// Where generated movers start.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MoverStartPolicy {
    /// On a shelf cell next to the mover's movable obstacle.
    #[default]
    UnderShelf,
    /// Uniformly over free cells, after the task starts are drawn.
    UniformFree,
}

impl MoverStartPolicy {
    pub fn name(self) -> &'static str {
        match self {
            MoverStartPolicy::UnderShelf => "under-shelf",
            MoverStartPolicy::UniformFree => "uniform-free",
        }
    }
}

impl fmt::Display for MoverStartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoverStartPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "under-shelf" => Ok(MoverStartPolicy::UnderShelf),
            "uniform-free" => Ok(MoverStartPolicy::UniformFree),
            other => Err(format!(
                "unknown mover start policy {other:?} (expected under-shelf or uniform-free)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskLine {
    pub start: Cell,
    pub goal: Cell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoverLine {
    pub start: Cell,
    /// Start cell of the assigned movable obstacle, if fixed by the file.
    pub obstacle: Option<Cell>,
}

/// A scenario: task agents and movers to place on a separately stored map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioFile {
    pub seed: Option<u64>,
    /// Map file name, informational.
    pub map: Option<String>,
    pub policy: Option<MoverStartPolicy>,
    pub tasks: Vec<TaskLine>,
    pub movers: Vec<MoverLine>,
}

impl ScenarioFile {
    /// Places the scenario on `map`. The assignment is taken from the mover
    /// lines when every line names an obstacle and left open when none does.
    pub fn to_problem(&self, map: &MapData) -> Result<Problem, IoError> {
        let g = &map.graph;
        let vertex = |c: Cell| {
            g.vertex(c)
                .ok_or_else(|| IoError::Config(format!("cell {c} is outside the {}x{} map", g.width(), g.height())))
        };
        let tasks = self
            .tasks
            .iter()
            .map(|t| {
                Ok(TaskAgent {
                    start: vertex(t.start)?,
                    goal: vertex(t.goal)?,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let movers = self
            .movers
            .iter()
            .map(|m| vertex(m.start))
            .collect::<Result<Vec<_>, _>>()?;
        let problem = Problem::new(g.clone(), tasks, movers, map.movables.clone())?;

        let named = self.movers.iter().filter(|m| m.obstacle.is_some()).count();
        if named == 0 {
            return Ok(problem);
        }
        if named != self.movers.len() {
            return Err(IoError::Config(
                "either every mover line names its obstacle or none does".into(),
            ));
        }
        let assignment = self
            .movers
            .iter()
            .map(|m| {
                let c = m.obstacle.expect("checked above");
                let v = vertex(c)?;
                map.movables
                    .iter()
                    .position(|&o| o == v)
                    .ok_or_else(|| IoError::Config(format!("mover obstacle {c} is not a movable cell")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(problem.with_assignment(assignment)?)
    }

    /// The scenario lines of `problem`, naming obstacles when it carries an
    /// assignment.
    pub fn from_problem(problem: &Problem) -> Self {
        let g = &problem.graph;
        ScenarioFile {
            tasks: problem
                .tasks
                .iter()
                .map(|t| TaskLine {
                    start: g.cell(t.start),
                    goal: g.cell(t.goal),
                })
                .collect(),
            movers: (0..problem.movers.len())
                .map(|j| MoverLine {
                    start: g.cell(problem.movers[j]),
                    obstacle: problem.assignment.as_ref().map(|_| g.cell(problem.mover_home(j))),
                })
                .collect(),
            ..Default::default()
        }
    }
}

fn numbers<const N: usize>(line_no: usize, fields: &[&str], line: &str) -> Result<[u32; N], IoError> {
    let mut out = [0u32; N];
    for (k, f) in fields.iter().enumerate() {
        let column = line.find(f).map_or(1, |p| p + 1);
        out[k] = f
            .parse()
            .map_err(|_| parse_error(line_no, column, format!("expected a cell coordinate, found {f:?}")))?;
    }
    Ok(out)
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(parse_error(1, 1, format!("expected `{MAGIC}`"))),
    }
    let mut scen = ScenarioFile::default();
    for (n, line) in lines {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let rest = &fields[1..];
        let duplicate = |what: &str| parse_error(n, 1, format!("duplicate `{what}` line"));
        match fields[0] {
            "seed" if rest.len() == 1 => {
                let seed = rest[0]
                    .parse()
                    .map_err(|_| parse_error(n, 6, "seed must be an unsigned integer"))?;
                if scen.seed.replace(seed).is_some() {
                    return Err(duplicate("seed"));
                }
            }
            "map" if !rest.is_empty() => {
                let name = content["map".len()..].trim().to_string();
                if scen.map.replace(name).is_some() {
                    return Err(duplicate("map"));
                }
            }
            "policy" if rest.len() == 1 => {
                let p = rest[0].parse().map_err(|e: String| parse_error(n, 8, e))?;
                if scen.policy.replace(p).is_some() {
                    return Err(duplicate("policy"));
                }
            }
            "T" if rest.len() == 4 => {
                let [sx, sy, gx, gy] = numbers::<4>(n, rest, line)?;
                scen.tasks.push(TaskLine {
                    start: Cell::new(sx, sy),
                    goal: Cell::new(gx, gy),
                });
            }
            "M" if rest.len() == 2 => {
                let [sx, sy] = numbers::<2>(n, rest, line)?;
                scen.movers.push(MoverLine {
                    start: Cell::new(sx, sy),
                    obstacle: None,
                });
            }
            "M" if rest.len() == 4 => {
                let [sx, sy, ox, oy] = numbers::<4>(n, rest, line)?;
                scen.movers.push(MoverLine {
                    start: Cell::new(sx, sy),
                    obstacle: Some(Cell::new(ox, oy)),
                });
            }
            "seed" | "map" | "policy" | "T" | "M" => {
                return Err(parse_error(n, 1, format!("wrong number of fields in `{content}`")))
            }
            other => return Err(parse_error(n, 1, format!("unknown record {other:?}"))),
        }
    }
    Ok(scen)
}

pub fn emit_scenario(scen: &ScenarioFile) -> String {
    let mut out = format!("{MAGIC}\n");
    if let Some(seed) = scen.seed {
        let _ = writeln!(out, "seed {seed}");
    }
    if let Some(map) = &scen.map {
        let _ = writeln!(out, "map {map}");
    }
    if let Some(policy) = scen.policy {
        let _ = writeln!(out, "policy {policy}");
    }
    for t in &scen.tasks {
        let _ = writeln!(out, "T {} {} {} {}", t.start.x, t.start.y, t.goal.x, t.goal.y);
    }
    for m in &scen.movers {
        match m.obstacle {
            Some(o) => {
                let _ = writeln!(out, "M {} {} {} {}", m.start.x, m.start.y, o.x, o.y);
            }
            None => {
                let _ = writeln!(out, "M {} {}", m.start.x, m.start.y);
            }
        }
    }
    out
}

/// Draws a scenario from the seeded stream.
///
/// 1. Task starts: a partial Fisher-Yates shuffle of the free cells
///    (row-major), one `below` draw per agent.
/// 2. Goals, per agent in order: one `coin` picks the workstation ring or
///    all free cells, then one `below` draw picks among that pool's cells not
///    yet used as a goal. An exhausted pool falls back to the other one.
/// 3. Movers: `under-shelf` puts mover `k` on the nearest static cell in
///    the row of movable `k` (left before right) and names that obstacle;
///    `uniform-free` continues the shuffle of step 1 and leaves the
///    assignment to the solver.
pub fn generate_scenario(
    map: &MapData,
    n_task: usize,
    n_movers: usize,
    seed: u64,
    policy: MoverStartPolicy,
) -> Result<ScenarioFile, IoError> {
    if n_movers != map.movables.len() {
        return Err(IoError::Config(format!(
            "the map has {} movable obstacles, so it needs exactly that many movers, not {n_movers}",
            map.movables.len()
        )));
    }
    let g = &map.graph;
    let mut free = map.free_cells();
    let shuffled = n_task
        + if policy == MoverStartPolicy::UniformFree {
            n_movers
        } else {
            0
        };
    if shuffled > free.len() {
        return Err(IoError::Config(format!(
            "{shuffled} agents need free start cells but the map has only {}",
            free.len()
        )));
    }
    let mut rng = ScenarioRng::new(seed);
    for i in 0..shuffled {
        let j = i + rng.below((free.len() - i) as u64) as usize;
        free.swap(i, j);
    }

    let mut all_free = map.free_cells();
    let mut ring = workstation_cells(map);
    let mut goals = Vec::with_capacity(n_task);
    for _ in 0..n_task {
        let (first, second) = if rng.coin() {
            (&mut ring, &mut all_free)
        } else {
            (&mut all_free, &mut ring)
        };
        let pool = if first.is_empty() { second } else { first };
        let goal = pool[rng.below(pool.len() as u64) as usize];
        ring.retain(|&v| v != goal);
        all_free.retain(|&v| v != goal);
        goals.push(goal);
    }

    let tasks = (0..n_task)
        .map(|i| TaskLine {
            start: g.cell(free[i]),
            goal: g.cell(goals[i]),
        })
        .collect();
    let movers = match policy {
        MoverStartPolicy::UniformFree => (0..n_movers)
            .map(|j| MoverLine {
                start: g.cell(free[n_task + j]),
                obstacle: None,
            })
            .collect(),
        MoverStartPolicy::UnderShelf => {
            let mut taken = Vec::with_capacity(n_movers);
            for &m in &map.movables {
                let start = nearest_shelf(g, m, &taken).unwrap_or(m);
                taken.push(start);
            }
            taken
                .iter()
                .zip(&map.movables)
                .map(|(&s, &m)| MoverLine {
                    start: g.cell(s),
                    obstacle: Some(g.cell(m)),
                })
                .collect()
        }
    };
    Ok(ScenarioFile {
        seed: Some(seed),
        map: None,
        policy: Some(policy),
        tasks,
        movers,
    })
}

fn nearest_shelf(g: &Graph, movable: Vertex, taken: &[Vertex]) -> Option<Vertex> {
    let c = g.cell(movable);
    (1..g.width()).find_map(|d| {
        [c.x.checked_sub(d), c.x.checked_add(d)]
            .into_iter()
            .flatten()
            .filter_map(|x| g.vertex(Cell::new(x, c.y)))
            .find(|&v| g.is_static(v) && !taken.contains(&v))
    })
}
