use std::collections::{BTreeMap, HashMap, HashSet};

use super::constraint::{Aspect, Constraint, EntityId, Locus, Polarity, TimedConstraint};
use super::path::EntityPath;
use super::LowLevelError;
use crate::grid::Vertex;

/// Per-entity lookup structure derived from a constraint set.
///
/// Blocks are stored per footprint: `body` entries bind the entity's own
/// position, `obstacle` entries bind the position of a mover's assigned
/// obstacle (on its start vertex before pickup, on the mover after).
#[derive(Clone, Debug)]
pub struct ConstraintTable {
    entity: EntityId,
    body_vertex: HashSet<(Vertex, usize)>,
    body_edge: HashSet<(Vertex, Vertex, usize)>,
    obstacle_vertex: HashSet<(Vertex, usize)>,
    /// Latest blocked timestep per vertex, for settling checks.
    body_last: HashMap<Vertex, usize>,
    obstacle_last: HashMap<Vertex, usize>,
    /// Vertices blocked from a timestep onwards (finished higher-priority paths).
    body_from: HashMap<Vertex, usize>,
    obstacle_from: HashMap<Vertex, usize>,
    body_landmarks: BTreeMap<usize, Vertex>,
    obstacle_landmarks: BTreeMap<usize, Vertex>,
    timed: Vec<TimedConstraint>,
    latest: usize,
}

impl ConstraintTable {
    pub fn new(entity: EntityId) -> Self {
        ConstraintTable {
            entity,
            body_vertex: HashSet::new(),
            body_edge: HashSet::new(),
            obstacle_vertex: HashSet::new(),
            body_last: HashMap::new(),
            obstacle_last: HashMap::new(),
            body_from: HashMap::new(),
            obstacle_from: HashMap::new(),
            body_landmarks: BTreeMap::new(),
            obstacle_landmarks: BTreeMap::new(),
            timed: Vec::new(),
            latest: 0,
        }
    }

    /// Collects every constraint binding `entity`: its own constraints, the
    /// negatives implied by other entities' positive constraints, and the
    /// timed constraints of obstacles it may not be near.
    pub fn build(
        entity: EntityId,
        constraints: &[Constraint],
        timed: &[TimedConstraint],
    ) -> Result<Self, LowLevelError> {
        let mut table = ConstraintTable::new(entity);
        for c in constraints {
            table.add(c)?;
        }
        for t in timed {
            table.add_timed(*t);
        }
        Ok(table)
    }

    pub fn entity(&self) -> EntityId {
        self.entity
    }

    /// Adds `c` if it binds this table's entity, directly or by implication.
    pub fn add(&mut self, c: &Constraint) -> Result<(), LowLevelError> {
        if c.subject == self.entity {
            self.add_own(c)
        } else {
            for implied in c.implied_for(self.entity) {
                self.add_own(&implied)?;
            }
            Ok(())
        }
    }

    fn add_own(&mut self, c: &Constraint) -> Result<(), LowLevelError> {
        debug_assert_eq!(c.subject, self.entity);
        self.latest = self.latest.max(c.locus.time());
        match (c.polarity, c.aspect, c.locus) {
            (Polarity::Negative, Aspect::Body, Locus::Vertex { vertex, time }) => {
                self.block_body(vertex, time);
            }
            (Polarity::Negative, Aspect::Body, Locus::Edge { from, to, time }) => {
                self.body_edge.insert((from, to, time));
            }
            (Polarity::Negative, Aspect::Obstacle, Locus::Vertex { vertex, time }) => {
                self.block_obstacle(vertex, time);
            }
            (Polarity::Positive, aspect, locus) => {
                for (vertex, time) in locus.occupied() {
                    let marks = match aspect {
                        Aspect::Body => &mut self.body_landmarks,
                        Aspect::Obstacle => &mut self.obstacle_landmarks,
                    };
                    if let Some(&prev) = marks.get(&time) {
                        if prev != vertex {
                            return Err(LowLevelError::Contradictory);
                        }
                    }
                    marks.insert(time, vertex);
                }
            }
            (_, Aspect::Obstacle, Locus::Edge { .. }) => {
                return Err(LowLevelError::Malformed(
                    "obstacle constraints take a vertex locus".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn block_body(&mut self, v: Vertex, t: usize) {
        self.body_vertex.insert((v, t));
        let last = self.body_last.entry(v).or_insert(t);
        *last = (*last).max(t);
        self.latest = self.latest.max(t);
    }

    pub fn block_obstacle(&mut self, v: Vertex, t: usize) {
        self.obstacle_vertex.insert((v, t));
        let last = self.obstacle_last.entry(v).or_insert(t);
        *last = (*last).max(t);
        self.latest = self.latest.max(t);
    }

    pub fn block_body_edge(&mut self, from: Vertex, to: Vertex, t: usize) {
        self.body_edge.insert((from, to, t));
        self.latest = self.latest.max(t);
    }

    fn block_from(map: &mut HashMap<Vertex, usize>, v: Vertex, t: usize) {
        let e = map.entry(v).or_insert(t);
        *e = (*e).min(t);
    }

    /// Timed constraints bind task agents, and movers other than the owner
    /// while they are carrying.
    pub fn add_timed(&mut self, t: TimedConstraint) {
        if self.entity == EntityId::Mover(t.mover) {
            return;
        }
        if let Some(r) = t.release {
            self.latest = self.latest.max(r);
        }
        self.timed.push(t);
    }

    /// Treats another entity's padded path as a moving obstacle: whatever it
    /// occupies at each timestep is blocked for the matching footprints, and
    /// its final position is blocked forever.
    pub fn avoid_path(&mut self, other: EntityId, path: &EntityPath) {
        debug_assert_ne!(other, self.entity);
        let end = path.len() - 1;
        for t in 0..=end {
            for c in path.occupancy(other, t) {
                for n in c.implied_for(self.entity) {
                    match (n.aspect, n.locus) {
                        (Aspect::Body, Locus::Vertex { vertex, time }) => self.block_body(vertex, time),
                        (Aspect::Obstacle, Locus::Vertex { vertex, time }) => self.block_obstacle(vertex, time),
                        _ => {}
                    }
                }
            }
            if t > 0 {
                let (from, to) = (path.body_at(t - 1), path.body_at(t));
                if from != to {
                    self.block_body_edge(to, from, t);
                }
            }
        }
        for c in path.occupancy(other, end) {
            for n in c.implied_for(self.entity) {
                if let Locus::Vertex { vertex, .. } = n.locus {
                    match n.aspect {
                        Aspect::Body => Self::block_from(&mut self.body_from, vertex, end),
                        Aspect::Obstacle => Self::block_from(&mut self.obstacle_from, vertex, end),
                    }
                }
            }
        }
        self.latest = self.latest.max(end);
    }

    /// Largest timestep mentioned by any entry. Past it the table is static.
    pub fn latest(&self) -> usize {
        self.latest
    }

    pub fn body_free(&self, v: Vertex, t: usize) -> bool {
        !self.body_vertex.contains(&(v, t)) && self.body_from.get(&v).is_none_or(|&f| t < f)
    }

    pub fn obstacle_free(&self, v: Vertex, t: usize) -> bool {
        !self.obstacle_vertex.contains(&(v, t)) && self.obstacle_from.get(&v).is_none_or(|&f| t < f)
    }

    /// Whether moving `from -> to`, arriving at `t`, is allowed for the body.
    pub fn edge_free(&self, from: Vertex, to: Vertex, t: usize) -> bool {
        from == to || !self.body_edge.contains(&(from, to, t))
    }

    /// Whether the timed constraints allow a task agent, or a loaded mover,
    /// on `v` at `t`.
    pub fn timed_free(&self, v: Vertex, t: usize) -> bool {
        self.timed.iter().all(|c| c.vertex != v || !c.blocks(t))
    }

    pub fn body_landmark(&self, t: usize) -> Option<Vertex> {
        self.body_landmarks.get(&t).copied()
    }

    pub fn obstacle_landmark(&self, t: usize) -> Option<Vertex> {
        self.obstacle_landmarks.get(&t).copied()
    }

    /// First body landmark strictly after `t`.
    pub fn next_body_landmark(&self, t: usize) -> Option<(usize, Vertex)> {
        self.body_landmarks.range(t + 1..).next().map(|(&t, &v)| (t, v))
    }

    pub fn next_obstacle_landmark(&self, t: usize) -> Option<(usize, Vertex)> {
        self.obstacle_landmarks.range(t + 1..).next().map(|(&t, &v)| (t, v))
    }

    /// Task agent check for standing on `v` at `t`.
    pub fn task_state_ok(&self, v: Vertex, t: usize) -> bool {
        self.body_free(v, t) && self.timed_free(v, t) && self.body_landmark(t).is_none_or(|l| l == v)
    }

    /// Mover check for standing on `v` at `t`, with the obstacle on the mover
    /// when `carrying` and on `home` otherwise.
    pub fn mover_state_ok(&self, v: Vertex, carrying: bool, home: Vertex, t: usize) -> bool {
        let obstacle = if carrying { v } else { home };
        self.body_free(v, t)
            && self.obstacle_free(obstacle, t)
            && (!carrying || self.timed_free(v, t))
            && self.body_landmark(t).is_none_or(|l| l == v)
            && self.obstacle_landmark(t).is_none_or(|l| l == obstacle)
    }

    /// Earliest timestep `s` such that a task agent may stay on `v` at every
    /// `t >= s`: the vertex is never blocked again and no later landmark
    /// lies elsewhere. `None` when that never happens.
    pub fn task_settle_from(&self, v: Vertex) -> Option<usize> {
        if self.body_from.contains_key(&v) {
            return None;
        }
        let mut s = self.body_last.get(&v).map_or(0, |&t| t + 1);
        for c in self.timed.iter().filter(|c| c.vertex == v) {
            s = s.max(c.release?);
        }
        if let Some((&t, _)) = self.body_landmarks.iter().rev().find(|(_, &l)| l != v) {
            s = s.max(t + 1);
        }
        Some(s)
    }

    /// As [`Self::task_settle_from`] for a mover parked with its obstacle on `v`.
    pub fn mover_settle_from(&self, v: Vertex) -> Option<usize> {
        if self.body_from.contains_key(&v) || self.obstacle_from.contains_key(&v) {
            return None;
        }
        let mut s = self.body_last.get(&v).map_or(0, |&t| t + 1);
        s = s.max(self.obstacle_last.get(&v).map_or(0, |&t| t + 1));
        for c in self.timed.iter().filter(|c| c.vertex == v) {
            s = s.max(c.release?);
        }
        for marks in [&self.body_landmarks, &self.obstacle_landmarks] {
            if let Some((&t, _)) = marks.iter().rev().find(|(_, &l)| l != v) {
                s = s.max(t + 1);
            }
        }
        Some(s)
    }

    /// Re-checks a complete path against the table, including the settled
    /// tail past its last timestep.
    pub fn permits(&self, path: &EntityPath) -> bool {
        let end = path.len() - 1;
        for t in 0..=end {
            let ok = match *path {
                EntityPath::Task(ref cells) => self.task_state_ok(cells[t], t),
                EntityPath::Mover {
                    ref cells,
                    pickup,
                    home,
                } => self.mover_state_ok(cells[t], t >= pickup, home, t),
            };
            if !ok || (t > 0 && !self.edge_free(path.body_at(t - 1), path.body_at(t), t)) {
                return false;
            }
        }
        let last = path.body_at(end);
        let settle = match path {
            EntityPath::Task(_) => self.task_settle_from(last),
            EntityPath::Mover { pickup, .. } => {
                if *pickup > end {
                    return false;
                }
                self.mover_settle_from(last)
            }
        };
        settle.is_some_and(|s| s <= end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: EntityId = EntityId::Task(0);
    const A2: EntityId = EntityId::Task(1);

    #[test]
    fn negative_binds_only_its_subject() {
        let c = [Constraint::vertex(Polarity::Negative, A1, Vertex(5), 3)];
        let t1 = ConstraintTable::build(A1, &c, &[]).unwrap();
        let t2 = ConstraintTable::build(A2, &c, &[]).unwrap();
        assert!(!t1.body_free(Vertex(5), 3));
        assert!(t1.body_free(Vertex(5), 2));
        assert!(t2.body_free(Vertex(5), 3));
    }

    #[test]
    fn positive_blocks_the_others() {
        let c = [Constraint::vertex(Polarity::Positive, A1, Vertex(5), 3)];
        let t2 = ConstraintTable::build(A2, &c, &[]).unwrap();
        assert!(!t2.task_state_ok(Vertex(5), 3));
        let t1 = ConstraintTable::build(A1, &c, &[]).unwrap();
        assert_eq!(t1.body_landmark(3), Some(Vertex(5)));
        assert!(!t1.task_state_ok(Vertex(4), 3));
    }

    #[test]
    fn contradictory_landmarks() {
        let c = [
            Constraint::vertex(Polarity::Positive, A1, Vertex(5), 3),
            Constraint::vertex(Polarity::Positive, A1, Vertex(6), 3),
        ];
        assert!(matches!(
            ConstraintTable::build(A1, &c, &[]),
            Err(LowLevelError::Contradictory)
        ));
    }

    #[test]
    fn timed_constraint_blocks_tasks_until_release() {
        let timed = [TimedConstraint {
            mover: 0,
            vertex: Vertex(7),
            release: Some(4),
        }];
        let t = ConstraintTable::build(A1, &[], &timed).unwrap();
        assert!((0..4).all(|s| !t.task_state_ok(Vertex(7), s)));
        assert!(t.task_state_ok(Vertex(7), 4));
        // the owner ignores its own timed constraint
        let own = ConstraintTable::build(EntityId::Mover(0), &[], &timed).unwrap();
        assert!(own.mover_state_ok(Vertex(7), true, Vertex(7), 0));
        // another mover is bound only while loaded
        let other = ConstraintTable::build(EntityId::Mover(1), &[], &timed).unwrap();
        assert!(other.mover_state_ok(Vertex(7), false, Vertex(9), 1));
        assert!(!other.mover_state_ok(Vertex(7), true, Vertex(9), 1));
    }

    #[test]
    fn settle_time_accounts_for_late_blocks() {
        let c = [
            Constraint::vertex(Polarity::Negative, A1, Vertex(2), 6),
            Constraint::vertex(Polarity::Positive, A1, Vertex(1), 8),
        ];
        let t = ConstraintTable::build(A1, &c, &[]).unwrap();
        assert_eq!(t.task_settle_from(Vertex(2)), Some(9));
        assert_eq!(t.task_settle_from(Vertex(1)), Some(0));
        assert_eq!(t.task_settle_from(Vertex(3)), Some(9));
    }
}
