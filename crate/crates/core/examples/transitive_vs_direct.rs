//! Direct versus transitive priorities on a map where the difference shows.
//!
//! With transitive priorities a low entity must dodge everything ranked
//! above it, including entities it never met. Direct priorities only keep
//! explicitly ordered pairs apart and here find a cheaper plan.

use tmapf::io::canonical_instance;
use tmapf::model::{CostFunction, Mode};
use tmapf::oracle::certify;
use tmapf::solver::{priority_search, tfcbs_solve, with_assignment, PriorityMode, SolverConfig};

fn main() {
    let inst = canonical_instance("SHORTCUT").unwrap();
    println!("{}\n{}", inst.description, inst.map_text);
    let cfg = SolverConfig::with_cost(CostFunction::Cost1);
    let p = with_assignment(&inst.problem);
    for mode in [PriorityMode::Direct, PriorityMode::Transitive] {
        let r = priority_search(&p, &cfg, mode);
        let ok = r.solution().is_some_and(|s| certify(&p, s, Mode::Tmapf).unwrap().ok);
        println!(
            "{mode:?}: cost {:?}, expanded {}, certified {ok}",
            r.cost(),
            r.stats.high_level_expanded
        );
    }
    let best = tfcbs_solve(&p, &cfg).unwrap();
    println!("optimum (tfcbs): {:?}", best.cost());
}
