use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::rc::Rc;

use super::context::SearchContext;
use super::table::ConstraintTable;
use super::LowLevelError;
use crate::grid::{Vertex, UNREACHABLE};

#[derive(Clone, Copy, PartialEq, Eq)]
struct Open {
    f: usize,
    g: usize,
    wait: bool,
    v: Vertex,
    node: usize,
}

impl Ord for Open {
    // BinaryHeap is a max-heap: invert so the best entry pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then(other.g.cmp(&self.g))
            .then(other.wait.cmp(&self.wait))
            .then(other.v.cmp(&self.v))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Space-time A* for one task agent.
///
/// Returns the path of earliest settlement: the agent reaches `goal` at some
/// timestep `s` after which the table never blocks the goal and no landmark
/// lies elsewhere, and the returned path ends at `s`. Cells flagged in
/// `hard_blocked` are never entered.
pub fn spacetime_astar(
    ctx: &SearchContext<'_>,
    start: Vertex,
    goal: Vertex,
    table: &ConstraintTable,
    hard_blocked: &[bool],
) -> Result<Vec<Vertex>, LowLevelError> {
    let graph = ctx.graph;
    if hard_blocked.len() != graph.len() || !graph.contains(start) || !graph.contains(goal) {
        return Err(LowLevelError::Malformed("vertex or mask outside the graph".into()));
    }
    if hard_blocked[start.index()] || hard_blocked[goal.index()] {
        return Err(LowLevelError::Infeasible);
    }
    if !table.task_state_ok(start, 0) {
        return Err(LowLevelError::Infeasible);
    }
    let Some(settle) = table.task_settle_from(goal) else {
        return Err(LowLevelError::Infeasible);
    };
    let dist: Rc<Vec<u32>> = if hard_blocked == graph.static_mask() {
        ctx.distances_to(goal)
    } else {
        Rc::new(graph.bfs_distances(goal, |v| !hard_blocked[v.index()]))
    };
    if dist[start.index()] == UNREACHABLE {
        return Err(LowLevelError::Infeasible);
    }
    let horizon = ctx.horizon(table.latest());
    let h = |v: Vertex, t: usize| (dist[v.index()] as usize).max(settle.saturating_sub(t));

    // node = (vertex, parent, time)
    let mut nodes: Vec<(Vertex, usize, usize)> = vec![(start, usize::MAX, 0)];
    let mut open = BinaryHeap::new();
    let mut closed: HashSet<(Vertex, usize)> = HashSet::new();
    open.push(Open {
        f: h(start, 0),
        g: 0,
        wait: false,
        v: start,
        node: 0,
    });

    while let Some(Open { g: t, v, node, .. }) = open.pop() {
        if !closed.insert((v, t)) {
            continue;
        }
        ctx.expand()?;
        if v == goal && t >= settle {
            return Ok(reconstruct(&nodes, node));
        }
        if t >= horizon {
            continue;
        }
        let t1 = t + 1;
        let next_mark = table.next_body_landmark(t);
        for w in graph.successors(v) {
            let d = dist[w.index()];
            if hard_blocked[w.index()] || d == UNREACHABLE || closed.contains(&(w, t1)) {
                continue;
            }
            if !table.task_state_ok(w, t1) || !table.edge_free(v, w, t1) {
                continue;
            }
            if let Some((tl, l)) = next_mark {
                if tl > t1 && graph.manhattan(w, l) as usize > tl - t1 {
                    continue;
                }
            }
            nodes.push((w, node, t1));
            open.push(Open {
                f: t1 + h(w, t1),
                g: t1,
                wait: w == v,
                v: w,
                node: nodes.len() - 1,
            });
        }
    }
    Err(LowLevelError::Infeasible)
}

fn reconstruct(nodes: &[(Vertex, usize, usize)], mut i: usize) -> Vec<Vertex> {
    let mut out = Vec::new();
    while i != usize::MAX {
        out.push(nodes[i].0);
        i = nodes[i].1;
    }
    out.reverse();
    out
}
