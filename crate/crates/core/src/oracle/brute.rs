use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::grid::{Graph, Vertex};
use crate::model::{CostFunction, Mode, ModelError, Problem, Solution, State};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal {
        cost: u64,
        witness: Solution,
    },
    Infeasible,
    /// More than `state_cap` joint states were discovered.
    CapExceeded,
}

impl OracleOutcome {
    pub fn cost(&self) -> Option<u64> {
        match self {
            OracleOutcome::Optimal { cost, .. } => Some(*cost),
            _ => None,
        }
    }
}

/// A joint configuration. A task agent may "commit" when it stands on its
/// goal; from then on it stays there and stops paying. A mover is coupled
/// from its first visit to its obstacle's start vertex on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Joint {
    tasks: Vec<Vertex>,
    committed: u64,
    movers: Vec<Vertex>,
    coupled: u64,
}

struct Space<'a> {
    g: &'a Graph,
    goals: Vec<Vertex>,
    homes: Vec<Vertex>,
    cost: CostFunction,
}

impl Space<'_> {
    fn obstacle(&self, j: usize, s: &Joint) -> Vertex {
        if s.coupled >> j & 1 == 1 {
            s.movers[j]
        } else {
            self.homes[j]
        }
    }

    fn is_goal(&self, s: &Joint) -> bool {
        let all_tasks = (1u64 << self.goals.len()) - 1;
        let all_movers = (1u64 << self.homes.len()) - 1;
        s.committed == all_tasks && s.coupled == all_movers && s.movers.iter().zip(&self.homes).all(|(m, h)| m == h)
    }

    fn step_cost(&self, from: &Joint, to: &Joint) -> u64 {
        let unsettled = self.goals.len() as u64 - u64::from(from.committed.count_ones());
        let mut c = unsettled;
        for j in 0..self.homes.len() {
            if from.movers[j] == to.movers[j] {
                continue;
            }
            // carried moves always count; approach moves only under cost2
            let was_coupled = from.coupled >> j & 1 == 1;
            let charged = if was_coupled {
                self.cost != CostFunction::SumOfCosts
            } else {
                self.cost == CostFunction::Cost2
            };
            c += u64::from(charged);
        }
        c
    }

    /// Start states: task agents already on their goal may commit or not.
    fn initial(&self, tasks: Vec<Vertex>, movers: Vec<Vertex>) -> Vec<Joint> {
        let mut coupled = 0;
        for (j, (&m, &h)) in movers.iter().zip(&self.homes).enumerate() {
            if m == h {
                coupled |= 1 << j;
            }
        }
        let at_goal: Vec<usize> = (0..tasks.len()).filter(|&i| tasks[i] == self.goals[i]).collect();
        (0..1u64 << at_goal.len())
            .map(|mask| {
                let committed = at_goal
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .fold(0, |acc, (_, &i)| acc | 1 << i);
                Joint {
                    tasks: tasks.clone(),
                    committed,
                    movers: movers.clone(),
                    coupled,
                }
            })
            .collect()
    }

    fn successors(&self, s: &Joint) -> Vec<Joint> {
        let nt = s.tasks.len();
        let nm = s.movers.len();
        let mut choices: Vec<Vec<Vertex>> = Vec::with_capacity(nt + nm);
        for i in 0..nt {
            if s.committed >> i & 1 == 1 {
                choices.push(vec![s.tasks[i]]);
            } else {
                choices.push(
                    self.g
                        .successors(s.tasks[i])
                        .filter(|&w| !self.g.is_static(w))
                        .collect(),
                );
            }
        }
        for j in 0..nm {
            let coupled = s.coupled >> j & 1 == 1;
            choices.push(
                self.g
                    .successors(s.movers[j])
                    .filter(|&w| !coupled || !self.g.is_static(w))
                    .collect(),
            );
        }
        let from: Vec<Vertex> = s.tasks.iter().chain(&s.movers).copied().collect();
        let mut picked = Vec::with_capacity(nt + nm);
        let mut out = Vec::new();
        self.enumerate(s, &from, &choices, &mut picked, &mut out);
        out
    }

    fn enumerate(
        &self,
        s: &Joint,
        from: &[Vertex],
        choices: &[Vec<Vertex>],
        picked: &mut Vec<Vertex>,
        out: &mut Vec<Joint>,
    ) {
        let k = picked.len();
        if k == choices.len() {
            self.finish(s, picked, out);
            return;
        }
        for &w in &choices[k] {
            // bodies never share a vertex or swap
            let clash = picked
                .iter()
                .enumerate()
                .any(|(i, &p)| p == w || (from[i] != p && from[i] == w && p == from[k]));
            if clash {
                continue;
            }
            picked.push(w);
            self.enumerate(s, from, choices, picked, out);
            picked.pop();
        }
    }

    fn finish(&self, s: &Joint, picked: &[Vertex], out: &mut Vec<Joint>) {
        let nt = s.tasks.len();
        let tasks = picked[..nt].to_vec();
        let movers = picked[nt..].to_vec();
        let mut coupled = s.coupled;
        for (j, (&m, &h)) in movers.iter().zip(&self.homes).enumerate() {
            if m == h {
                coupled |= 1 << j;
            }
        }
        let next = Joint {
            tasks,
            committed: s.committed,
            movers,
            coupled,
        };
        let obstacles: Vec<Vertex> = (0..self.homes.len()).map(|j| self.obstacle(j, &next)).collect();
        let prev_obstacles: Vec<Vertex> = (0..self.homes.len()).map(|j| self.obstacle(j, s)).collect();
        for (a, &oa) in obstacles.iter().enumerate() {
            if next.tasks.contains(&oa) || obstacles[a + 1..].contains(&oa) {
                return;
            }
            // an obstacle may not swap with any other entry
            let entries = s.tasks.iter().zip(&next.tasks).chain(s.movers.iter().zip(&next.movers));
            let others = prev_obstacles
                .iter()
                .zip(&obstacles)
                .enumerate()
                .filter(|(b, _)| *b != a)
                .map(|(_, p)| p);
            let pa = prev_obstacles[a];
            if pa != oa && entries.chain(others).any(|(&x, &y)| x == oa && y == pa) {
                return;
            }
        }
        let free: Vec<usize> = (0..nt)
            .filter(|&i| s.committed >> i & 1 == 0 && next.tasks[i] == self.goals[i])
            .collect();
        for mask in 0..1u64 << free.len() {
            let mut n = next.clone();
            for (b, &i) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    n.committed |= 1 << i;
                }
            }
            out.push(n);
        }
    }

    fn to_state(&self, s: &Joint, with_movers: bool) -> State {
        State {
            tasks: s.tasks.clone(),
            movers: if with_movers { s.movers.clone() } else { Vec::new() },
            obstacles: if with_movers {
                (0..self.homes.len()).map(|j| self.obstacle(j, s)).collect()
            } else {
                Vec::new()
            },
        }
    }
}

/// Exact optimum by uniform-cost search over joint states; an independent
/// reference for the tree searches on tiny instances.
///
/// In [`Mode::Mapf`] movable obstacles are frozen and movers dropped, and
/// the cost is the sum of costs. In [`Mode::Tmapf`] mover `j` carries
/// obstacle `problem.assigned_obstacle(j)` and must end coupled with it on
/// its start vertex. The witness lists obstacles by obstacle index.
pub fn brute_force_optimal(
    problem: &Problem,
    mode: Mode,
    cost: CostFunction,
    state_cap: usize,
) -> Result<OracleOutcome, ModelError> {
    let frozen;
    let (p, cost) = match mode {
        Mode::Mapf => {
            frozen = problem.static_version();
            (&frozen, CostFunction::SumOfCosts)
        }
        Mode::Tmapf => (problem, cost),
    };
    if p.tasks.len() + p.movers.len() > 63 {
        return Err(ModelError::InvalidProblem("too many entities for the oracle".into()));
    }
    let space = Space {
        g: &p.graph,
        goals: p.tasks.iter().map(|t| t.goal).collect(),
        homes: (0..p.movers.len()).map(|j| p.mover_home(j)).collect(),
        cost,
    };
    let tasks: Vec<Vertex> = p.tasks.iter().map(|t| t.start).collect();

    let mut index: HashMap<Joint, usize> = HashMap::new();
    let mut states: Vec<(Joint, u64, usize)> = Vec::new();
    let mut open = BinaryHeap::new();
    for s in space.initial(tasks, p.movers.clone()) {
        index.insert(s.clone(), states.len());
        open.push(Reverse((0u64, states.len())));
        states.push((s, 0, usize::MAX));
    }
    let mut done = vec![false; states.len()];

    while let Some(Reverse((d, i))) = open.pop() {
        if done.get(i).copied().unwrap_or(false) || d > states[i].1 {
            continue;
        }
        if done.len() <= i {
            done.resize(i + 1, false);
        }
        done[i] = true;
        let s = states[i].0.clone();
        if space.is_goal(&s) {
            let mut chain = vec![i];
            while states[*chain.last().unwrap()].2 != usize::MAX {
                chain.push(states[*chain.last().unwrap()].2);
            }
            chain.reverse();
            let with_movers = mode == Mode::Tmapf;
            let mut witness: Vec<State> = chain
                .iter()
                .map(|&c| space.to_state(&states[c].0, with_movers))
                .collect();
            if with_movers {
                // reorder obstacles from mover order to obstacle order
                for st in &mut witness {
                    let mut o = p.movables.clone();
                    for (j, &v) in st.obstacles.iter().enumerate() {
                        o[p.assigned_obstacle(j)] = v;
                    }
                    st.obstacles = o;
                }
            }
            return Ok(OracleOutcome::Optimal {
                cost: d,
                witness: Solution::new(witness),
            });
        }
        for n in space.successors(&s) {
            let nd = d + space.step_cost(&s, &n);
            match index.get(&n) {
                Some(&k) if states[k].1 <= nd => {}
                Some(&k) => {
                    states[k].1 = nd;
                    states[k].2 = i;
                    open.push(Reverse((nd, k)));
                }
                None => {
                    if states.len() >= state_cap {
                        return Ok(OracleOutcome::CapExceeded);
                    }
                    index.insert(n.clone(), states.len());
                    open.push(Reverse((nd, states.len())));
                    states.push((n, nd, i));
                }
            }
        }
    }
    Ok(OracleOutcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Cell;
    use crate::model::TaskAgent;

    #[test]
    fn single_agent_row() {
        let g = Graph::new(3, 1);
        let p = Problem::mapf(
            g,
            vec![TaskAgent {
                start: Vertex(0),
                goal: Vertex(2),
            }],
        )
        .unwrap();
        let r = brute_force_optimal(&p, Mode::Mapf, CostFunction::SumOfCosts, 1000).unwrap();
        assert_eq!(r.cost(), Some(2));
    }

    #[test]
    fn toy_one_static_is_infeasible() {
        let g = Graph::with_static_obstacles(3, 3, &[Cell::new(0, 1), Cell::new(2, 1)]);
        let v = |x, y| g.vertex(Cell::new(x, y)).unwrap();
        let p = Problem::new(
            g.clone(),
            vec![TaskAgent {
                start: v(1, 0),
                goal: v(0, 2),
            }],
            vec![v(0, 1)],
            vec![v(1, 1)],
        )
        .unwrap();
        let r = brute_force_optimal(&p, Mode::Mapf, CostFunction::SumOfCosts, 10_000).unwrap();
        assert_eq!(r, OracleOutcome::Infeasible);
    }

    #[test]
    fn cap_is_reported() {
        let g = Graph::new(4, 4);
        let p = Problem::mapf(
            g,
            vec![
                TaskAgent {
                    start: Vertex(0),
                    goal: Vertex(15),
                },
                TaskAgent {
                    start: Vertex(15),
                    goal: Vertex(0),
                },
            ],
        )
        .unwrap();
        let r = brute_force_optimal(&p, Mode::Mapf, CostFunction::SumOfCosts, 10).unwrap();
        assert_eq!(r, OracleOutcome::CapExceeded);
    }
}
