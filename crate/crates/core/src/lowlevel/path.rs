use super::constraint::{Aspect, Constraint, EntityId, Locus, Polarity};
use crate::grid::Vertex;
use crate::model::CostFunction;

/// A low-level plan. Past its last timestep the entity stays where it ended:
/// a task agent on its goal, a mover with its obstacle on the obstacle's
/// start vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EntityPath {
    Task(Vec<Vertex>),
    Mover {
        cells: Vec<Vertex>,
        /// First timestep at which the mover stands on `home` and carries.
        pickup: usize,
        home: Vertex,
    },
}

impl EntityPath {
    pub fn cells(&self) -> &[Vertex] {
        match self {
            EntityPath::Task(cells) | EntityPath::Mover { cells, .. } => cells,
        }
    }

    pub fn len(&self) -> usize {
        self.cells().len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells().is_empty()
    }

    pub fn body_at(&self, t: usize) -> Vertex {
        let c = self.cells();
        c[t.min(c.len() - 1)]
    }

    /// Position of the carried obstacle; `None` for task agents.
    pub fn obstacle_at(&self, t: usize) -> Option<Vertex> {
        match *self {
            EntityPath::Task(_) => None,
            EntityPath::Mover { pickup, home, .. } => Some(if t >= pickup { self.body_at(t) } else { home }),
        }
    }

    /// The footprints occupied at `t`, phrased as positive constraints so that
    /// [`Constraint::implied_for`] yields what they exclude.
    pub fn occupancy(&self, me: EntityId, t: usize) -> Vec<Constraint> {
        let mut out = vec![Constraint::vertex(Polarity::Positive, me, self.body_at(t), t)];
        if let Some(o) = self.obstacle_at(t) {
            out.push(Constraint {
                polarity: Polarity::Positive,
                subject: me,
                aspect: Aspect::Obstacle,
                locus: Locus::Vertex { vertex: o, time: t },
            });
        }
        out
    }

    fn moves(cells: &[Vertex]) -> u64 {
        cells.windows(2).filter(|w| w[0] != w[1]).count() as u64
    }

    /// This entity's share of the solution cost.
    ///
    /// A task agent pays its settlement time, which is the last timestep of a
    /// low-level plan. A mover pays its loaded moves, plus its approach moves
    /// when the cost function charges them.
    pub fn cost(&self, cost: CostFunction) -> u64 {
        match self {
            EntityPath::Task(cells) => {
                let goal = cells[cells.len() - 1];
                cells.iter().rposition(|&v| v != goal).map_or(0, |t| t as u64 + 1)
            }
            EntityPath::Mover { cells, pickup, .. } => {
                let p = (*pickup).min(cells.len() - 1);
                let carried = Self::moves(&cells[p..]);
                if cost.charges_approach() {
                    carried + Self::moves(&cells[..=p])
                } else {
                    carried
                }
            }
        }
    }
}
