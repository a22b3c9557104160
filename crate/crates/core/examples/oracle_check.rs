//! Cross-checks TF-CBS against the exhaustive joint-state oracle on random
//! small instances, then certifies every plan.

use tmapf::grid::{Cell, Graph};
use tmapf::io::ScenarioRng;
use tmapf::model::{CostFunction, Mode, Problem, TaskAgent};
use tmapf::oracle::{brute_force_optimal, certify, DEFAULT_STATE_CAP};
use tmapf::solver::{tfcbs_solve, with_assignment, SolverConfig};

fn random_instance(rng: &mut ScenarioRng) -> Option<Problem> {
    let (w, h) = (3, 3);
    let mut cells: Vec<Cell> = (0..h).flat_map(|y| (0..w).map(move |x| Cell::new(x, y))).collect();
    for i in (1..cells.len()).rev() {
        cells.swap(i, rng.below(i as u64 + 1) as usize);
    }
    let g = Graph::with_static_obstacles(w, h, &cells[..1]);
    let v = |c: Cell| g.vertex(c).unwrap();
    let task = TaskAgent {
        start: v(cells[1]),
        goal: v(cells[2 + rng.below(5) as usize]),
    };
    let p = Problem::new(g.clone(), vec![task], vec![v(cells[7])], vec![v(cells[8])]).ok()?;
    Some(with_assignment(&p))
}

fn main() {
    let mut rng = ScenarioRng::new(7);
    let (mut agree, mut total) = (0, 0);
    while total < 25 {
        let Some(p) = random_instance(&mut rng) else { continue };
        for cost in [CostFunction::Cost1, CostFunction::Cost2] {
            let oracle = brute_force_optimal(&p, Mode::Tmapf, cost, DEFAULT_STATE_CAP).unwrap();
            let solver = tfcbs_solve(&p, &SolverConfig::with_cost(cost)).unwrap();
            let certified = solver.solution().map(|s| certify(&p, s, Mode::Tmapf).unwrap().ok);
            total += 1;
            agree += usize::from(oracle.cost() == solver.cost() && certified != Some(false));
            println!(
                "{cost}: oracle {:?}, tfcbs {:?}, certified {:?}",
                oracle.cost(),
                solver.cost(),
                certified
            );
        }
    }
    println!("{agree}/{total} agree");
}
