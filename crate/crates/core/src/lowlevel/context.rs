use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use super::LowLevelError;
use crate::grid::{Graph, Vertex};

/// Shared state for the low-level searches of one solver run: horizon,
/// deadline, expansion counter and a cache of static distance maps.
#[derive(Debug)]
pub struct SearchContext<'g> {
    pub graph: &'g Graph,
    horizon_cap: usize,
    deadline: Option<Instant>,
    expansions: Cell<u64>,
    distances: RefCell<HashMap<Vertex, Rc<Vec<u32>>>>,
}

impl<'g> SearchContext<'g> {
    pub fn new(graph: &'g Graph, horizon_cap: usize) -> Self {
        SearchContext {
            graph,
            horizon_cap,
            deadline: None,
            expansions: Cell::new(0),
            distances: RefCell::new(HashMap::new()),
        }
    }

    /// The default global horizon: `|V| + entities * diameter`.
    pub fn default_horizon(graph: &Graph, entities: usize) -> usize {
        graph.len() + entities.max(1) * graph.diameter() as usize
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn horizon_cap(&self) -> usize {
        self.horizon_cap
    }

    /// Search horizon for a table whose last entry lies at `latest`: past it
    /// nothing changes, so `|V|` further steps reach anything reachable.
    pub fn horizon(&self, latest: usize) -> usize {
        self.horizon_cap.min(latest + self.graph.len() + 1)
    }

    pub fn expansions(&self) -> u64 {
        self.expansions.get()
    }

    pub(crate) fn expand(&self) -> Result<(), LowLevelError> {
        let n = self.expansions.get() + 1;
        self.expansions.set(n);
        if n.is_multiple_of(512) && self.expired() {
            return Err(LowLevelError::Timeout);
        }
        Ok(())
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// BFS distances to `target` through cells that are not static obstacles.
    pub fn distances_to(&self, target: Vertex) -> Rc<Vec<u32>> {
        if let Some(d) = self.distances.borrow().get(&target) {
            return Rc::clone(d);
        }
        let d = Rc::new(self.graph.free_distances(target));
        self.distances.borrow_mut().insert(target, Rc::clone(&d));
        d
    }
}
