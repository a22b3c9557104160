//! A task agent walled off from its goal, and a mover that opens the way.
//!
//! Prints the static baseline, the terraforming optimum under both cost
//! functions, and the joint plan frame by frame.

use tmapf::io::canonical_instance;
use tmapf::model::{CostFunction, Mode, Problem, Solution};
use tmapf::oracle::certify;
use tmapf::solver::{cbs_solve, tfcbs_solve, with_assignment, SolverConfig};

fn render(p: &Problem, s: &Solution, t: usize) -> String {
    let g = &p.graph;
    let st = &s.states[t];
    let mut out = String::new();
    for y in 0..g.height() {
        for x in 0..g.width() {
            let v = g.vertex(tmapf::grid::Cell::new(x, y)).unwrap();
            let ch = if let Some(i) = st.tasks.iter().position(|&a| a == v) {
                char::from(b'A' + i as u8)
            } else if st.obstacles.contains(&v) && st.movers.contains(&v) {
                '#'
            } else if st.obstacles.contains(&v) {
                'M'
            } else if st.movers.contains(&v) {
                'm'
            } else if g.is_static(v) {
                '@'
            } else {
                '.'
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}

fn main() {
    let inst = canonical_instance("TOY-1").expect("bundled");
    println!("{}: {}\n", inst.name, inst.description);
    print!("{}", inst.map_text);

    let stat = cbs_solve(&inst.problem.static_version(), &SolverConfig::default()).unwrap();
    println!("\nwithout terraforming: {}", stat.outcome.name());

    let p = with_assignment(&inst.problem);
    for cost in [CostFunction::Cost1, CostFunction::Cost2] {
        let r = tfcbs_solve(&p, &SolverConfig::with_cost(cost)).unwrap();
        println!("tfcbs under {cost}: cost {:?}", r.cost());
    }

    let r = tfcbs_solve(&p, &SolverConfig::with_cost(CostFunction::Cost1)).unwrap();
    let s = r.solution().expect("TOY-1 is solvable with terraforming");
    println!("\nplan (A = task agent, m = mover, M = obstacle, # = mover carrying it):");
    for t in 0..s.len() {
        println!("t = {t}\n{}", render(&p, s, t));
    }
    let cert = certify(&p, s, Mode::Tmapf).unwrap();
    println!("certified: {}", cert.ok);
}
