use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::Vertex;

/// A searchable agent: a task agent, or a mover coupled with its assigned
/// movable obstacle. Task agents order before movers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityId {
    Task(usize),
    Mover(usize),
}

impl EntityId {
    pub fn is_task(self) -> bool {
        matches!(self, EntityId::Task(_))
    }

    /// Position in the `tasks ++ movers` entity list.
    pub fn slot(self, n_tasks: usize) -> usize {
        match self {
            EntityId::Task(i) => i,
            EntityId::Mover(j) => n_tasks + j,
        }
    }

    pub fn from_slot(slot: usize, n_tasks: usize) -> Self {
        if slot < n_tasks {
            EntityId::Task(slot)
        } else {
            EntityId::Mover(slot - n_tasks)
        }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityId::Task(i) => write!(f, "t{i}"),
            EntityId::Mover(j) => write!(f, "m{j}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Which footprint of the subject a constraint binds. Task agents only have a
/// body; a mover entity has its own body and the obstacle it is assigned to,
/// which sits on its start vertex until pickup and rides on the mover after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Aspect {
    Body,
    Obstacle,
}

/// Where and when a constraint applies. Edge times are arrival times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Locus {
    Vertex { vertex: Vertex, time: usize },
    Edge { from: Vertex, to: Vertex, time: usize },
}

impl Locus {
    pub fn time(&self) -> usize {
        match *self {
            Locus::Vertex { time, .. } | Locus::Edge { time, .. } => time,
        }
    }

    /// The (vertex, time) pairs the locus occupies.
    pub fn occupied(&self) -> Vec<(Vertex, usize)> {
        match *self {
            Locus::Vertex { vertex, time } => vec![(vertex, time)],
            Locus::Edge { from, to, time } => vec![(from, time - 1), (to, time)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub polarity: Polarity,
    pub subject: EntityId,
    pub aspect: Aspect,
    pub locus: Locus,
}

impl Constraint {
    pub fn vertex(polarity: Polarity, subject: EntityId, vertex: Vertex, time: usize) -> Self {
        Constraint {
            polarity,
            subject,
            aspect: Aspect::Body,
            locus: Locus::Vertex { vertex, time },
        }
    }

    pub fn edge(polarity: Polarity, subject: EntityId, from: Vertex, to: Vertex, time: usize) -> Self {
        Constraint {
            polarity,
            subject,
            aspect: Aspect::Body,
            locus: Locus::Edge { from, to, time },
        }
    }

    pub fn obstacle(polarity: Polarity, mover: usize, vertex: Vertex, time: usize) -> Self {
        Constraint {
            polarity,
            subject: EntityId::Mover(mover),
            aspect: Aspect::Obstacle,
            locus: Locus::Vertex { vertex, time },
        }
    }

    pub fn negated(self) -> Self {
        let polarity = match self.polarity {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        };
        Constraint { polarity, ..self }
    }

    /// Negative constraints a positive constraint on `self.subject` imposes on
    /// `other`: whatever the subject occupies is off-limits to every footprint
    /// of `other` that may not share a vertex with it.
    pub fn implied_for(&self, other: EntityId) -> Vec<Constraint> {
        if self.polarity != Polarity::Positive || other == self.subject {
            return Vec::new();
        }
        let aspects: &[Aspect] = match (self.subject, self.aspect, other) {
            // a task agent excludes every agent and every obstacle
            (EntityId::Task(_), _, EntityId::Task(_)) => &[Aspect::Body],
            (EntityId::Task(_), _, EntityId::Mover(_)) => &[Aspect::Body, Aspect::Obstacle],
            // a mover body excludes other agent bodies; obstacles may sit above it
            (EntityId::Mover(_), Aspect::Body, _) => &[Aspect::Body],
            // an obstacle excludes task agents and other obstacles
            (EntityId::Mover(_), Aspect::Obstacle, EntityId::Task(_)) => &[Aspect::Body],
            (EntityId::Mover(_), Aspect::Obstacle, EntityId::Mover(_)) => &[Aspect::Obstacle],
        };
        let mut out = Vec::new();
        for &(vertex, time) in &self.locus.occupied() {
            for &aspect in aspects {
                out.push(Constraint {
                    polarity: Polarity::Negative,
                    subject: other,
                    aspect,
                    locus: Locus::Vertex { vertex, time },
                });
            }
        }
        if let Locus::Edge { from, to, time } = self.locus {
            if self.aspect == Aspect::Body {
                out.push(Constraint::edge(Polarity::Negative, other, to, from, time));
            }
        }
        out
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        };
        let what = match self.aspect {
            Aspect::Body => "",
            Aspect::Obstacle => "/obs",
        };
        match self.locus {
            Locus::Vertex { vertex, time } => {
                write!(f, "({sign},{}{what},v{},{time})", self.subject, vertex.0)
            }
            Locus::Edge { from, to, time } => {
                write!(f, "({sign},{}{what},v{}->v{},{time})", self.subject, from.0, to.0)
            }
        }
    }
}

/// Keeps task agents and loaded movers off the start vertex of movable
/// obstacle `obstacle_of`'s obstacle before `release`. `None` means the
/// obstacle can never be picked up, so the vertex stays blocked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimedConstraint {
    /// Mover whose assigned obstacle this is.
    pub mover: usize,
    pub vertex: Vertex,
    pub release: Option<usize>,
}

impl TimedConstraint {
    pub fn blocks(&self, time: usize) -> bool {
        self.release.is_none_or(|r| time < r)
    }
}
