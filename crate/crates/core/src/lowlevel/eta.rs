use super::context::SearchContext;
use super::table::ConstraintTable;
use super::LowLevelError;
use crate::grid::Vertex;

/// Earliest timestep at which the mover can stand on `home` (and so pick up
/// its obstacle) along a path that respects `table`. Loaded moves after the
/// pickup are ignored. `Ok(None)` when no such path exists within the horizon.
pub fn eta_lower_bound(
    ctx: &SearchContext<'_>,
    start: Vertex,
    home: Vertex,
    table: &ConstraintTable,
) -> Result<Option<usize>, LowLevelError> {
    let graph = ctx.graph;
    if start == home {
        return Ok(Some(0));
    }
    if !table.mover_state_ok(start, false, home, 0) {
        return Ok(None);
    }
    let horizon = ctx.horizon(table.latest());
    let mut current = vec![start];
    for t in 0..horizon {
        let t1 = t + 1;
        let mut next = Vec::new();
        let mut seen = vec![false; graph.len()];
        for &v in &current {
            ctx.expand()?;
            for w in graph.successors(v) {
                if seen[w.index()] || !table.edge_free(v, w, t1) {
                    continue;
                }
                let arrives = w == home;
                if !table.mover_state_ok(w, arrives, home, t1) {
                    continue;
                }
                if arrives {
                    return Ok(Some(t1));
                }
                seen[w.index()] = true;
                next.push(w);
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        next.sort();
        current = next;
    }
    Ok(None)
}
