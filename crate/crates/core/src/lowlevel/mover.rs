use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::context::SearchContext;
use super::path::EntityPath;
use super::table::ConstraintTable;
use super::LowLevelError;
use crate::grid::{Vertex, UNREACHABLE};
use crate::model::CostFunction;

#[derive(Clone, Copy, PartialEq, Eq)]
struct Open {
    f: u64,
    t: usize,
    wait: bool,
    v: Vertex,
    carrying: bool,
    g: u64,
    node: usize,
}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then(other.t.cmp(&self.t))
            .then(other.wait.cmp(&self.wait))
            .then(other.v.cmp(&self.v))
            .then(other.carrying.cmp(&self.carrying))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plans a mover entity: walk (anywhere, under obstacles too) to the start
/// vertex `home` of its obstacle, pick it up on arrival, optionally carry it
/// through obstacle-free cells, and park it back on `home`.
///
/// The objective is the entity's marginal solution cost: loaded non-wait
/// moves, plus approach moves under [`CostFunction::Cost2`]. Waits are free;
/// among equally cheap plans the one that parks earliest wins.
pub fn mover_lowlevel(
    ctx: &SearchContext<'_>,
    start: Vertex,
    home: Vertex,
    table: &ConstraintTable,
    cost: CostFunction,
) -> Result<EntityPath, LowLevelError> {
    let graph = ctx.graph;
    if !graph.contains(start) || !graph.contains(home) || graph.is_static(home) {
        return Err(LowLevelError::Malformed("mover or obstacle vertex invalid".into()));
    }
    let carrying0 = start == home;
    if !table.mover_state_ok(start, carrying0, home, 0) {
        return Err(LowLevelError::Infeasible);
    }
    let Some(settle) = table.mover_settle_from(home) else {
        return Err(LowLevelError::Infeasible);
    };
    let loaded = ctx.distances_to(home);
    let approach = cost.charges_approach();
    let h = |v: Vertex, c: bool| -> u64 {
        if c {
            loaded[v.index()] as u64
        } else if approach {
            graph.manhattan(v, home) as u64
        } else {
            0
        }
    };
    let horizon = ctx.horizon(table.latest());

    // node = (vertex, carrying, parent)
    let mut nodes: Vec<(Vertex, bool, usize)> = vec![(start, carrying0, usize::MAX)];
    let mut open = BinaryHeap::new();
    let mut closed: HashSet<(Vertex, bool, usize)> = HashSet::new();
    open.push(Open {
        f: h(start, carrying0),
        t: 0,
        wait: false,
        v: start,
        carrying: carrying0,
        g: 0,
        node: 0,
    });

    while let Some(Open {
        t,
        v,
        carrying,
        g,
        node,
        ..
    }) = open.pop()
    {
        if !closed.insert((v, carrying, t)) {
            continue;
        }
        ctx.expand()?;
        if carrying && v == home && t >= settle {
            return Ok(build(&nodes, node, home));
        }
        if t >= horizon {
            continue;
        }
        let t1 = t + 1;
        for w in graph.successors(v) {
            if carrying && graph.is_static(w) {
                continue;
            }
            let c1 = carrying || w == home;
            if c1 && loaded[w.index()] == UNREACHABLE {
                continue;
            }
            if closed.contains(&(w, c1, t1)) {
                continue;
            }
            if !table.mover_state_ok(w, c1, home, t1) || !table.edge_free(v, w, t1) {
                continue;
            }
            if !landmarks_reachable(ctx, table, home, w, c1, t1) {
                continue;
            }
            let step = u64::from(w != v && (carrying || approach));
            let g1 = g + step;
            nodes.push((w, c1, node));
            open.push(Open {
                f: g1 + h(w, c1),
                t: t1,
                wait: w == v,
                v: w,
                carrying: c1,
                g: g1,
                node: nodes.len() - 1,
            });
        }
    }
    Err(LowLevelError::Infeasible)
}

/// Cheap pruning: the next body landmark, and the next obstacle landmark
/// away from `home`, must be within walking distance.
fn landmarks_reachable(
    ctx: &SearchContext<'_>,
    table: &ConstraintTable,
    home: Vertex,
    w: Vertex,
    carrying: bool,
    t: usize,
) -> bool {
    let g = ctx.graph;
    if let Some((tl, l)) = table.next_body_landmark(t) {
        if g.manhattan(w, l) as usize > tl - t {
            return false;
        }
    }
    if let Some((tl, l)) = table.next_obstacle_landmark(t) {
        let needed = if carrying {
            g.manhattan(w, l)
        } else if l == home {
            0
        } else {
            g.manhattan(w, home) + g.manhattan(home, l)
        };
        if needed as usize > tl - t {
            return false;
        }
    }
    true
}

fn build(nodes: &[(Vertex, bool, usize)], mut i: usize, home: Vertex) -> EntityPath {
    let mut cells = Vec::new();
    let mut flags = Vec::new();
    while i != usize::MAX {
        cells.push(nodes[i].0);
        flags.push(nodes[i].1);
        i = nodes[i].2;
    }
    cells.reverse();
    flags.reverse();
    let pickup = flags.iter().position(|&c| c).unwrap_or(cells.len());
    EntityPath::Mover { cells, pickup, home }
}
