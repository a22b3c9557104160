//! The single-agent planner under hand-written constraints.

use tmapf::grid::{Cell, Graph};
use tmapf::lowlevel::{spacetime_astar, Constraint, ConstraintTable, EntityId, Polarity, SearchContext};

fn main() {
    let g = Graph::with_static_obstacles(5, 3, &[Cell::new(2, 0), Cell::new(2, 2)]);
    let v = |x, y| g.vertex(Cell::new(x, y)).unwrap();
    let me = EntityId::Task(0);
    let ctx = SearchContext::new(&g, SearchContext::default_horizon(&g, 1));
    let show = |path: &[tmapf::grid::Vertex]| {
        path.iter()
            .map(|&p| format!("({},{})", g.cell(p).x, g.cell(p).y))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let free = ConstraintTable::new(me);
    let path = spacetime_astar(&ctx, v(0, 1), v(4, 1), &free, g.static_mask()).unwrap();
    println!("unconstrained:         {}", show(&path));

    // someone else holds the gap at t = 2, so the agent has to wait once
    let mut table = ConstraintTable::new(me);
    table
        .add(&Constraint::vertex(Polarity::Negative, me, v(2, 1), 2))
        .unwrap();
    let path = spacetime_astar(&ctx, v(0, 1), v(4, 1), &table, g.static_mask()).unwrap();
    println!("gap blocked at t=2:    {}", show(&path));

    // the goal is occupied until t = 6: arrive early and the agent would be in the way
    let mut table = ConstraintTable::new(me);
    table
        .add(&Constraint::vertex(Polarity::Negative, me, v(4, 1), 6))
        .unwrap();
    let path = spacetime_astar(&ctx, v(0, 1), v(4, 1), &table, g.static_mask()).unwrap();
    println!("goal busy until t=6:   {}", show(&path));

    // a positive constraint forces a visit to (1,0) at t = 3
    let mut table = ConstraintTable::new(me);
    table
        .add(&Constraint::vertex(Polarity::Positive, me, v(1, 0), 3))
        .unwrap();
    let path = spacetime_astar(&ctx, v(0, 1), v(4, 1), &table, g.static_mask()).unwrap();
    println!("must be at (1,0), t=3: {}", show(&path));
}
