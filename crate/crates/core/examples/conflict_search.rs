//! Optimal search on the bundled instances: CBS without terraforming and
//! TF-CBS with it, side by side with the search effort.

use tmapf::io::canonical_instances;
use tmapf::model::CostFunction;
use tmapf::solver::{cbs_solve, tfcbs_solve, SolverConfig};

fn main() {
    println!(
        "{:<10} {:>12} {:>12} {:>12} {:>10}",
        "instance", "cbs (soc)", "tfcbs cost1", "tfcbs cost2", "ct nodes"
    );
    for inst in canonical_instances() {
        let stat = cbs_solve(&inst.problem.static_version(), &SolverConfig::default()).unwrap();
        let c1 = tfcbs_solve(&inst.problem, &SolverConfig::with_cost(CostFunction::Cost1)).unwrap();
        let c2 = tfcbs_solve(&inst.problem, &SolverConfig::with_cost(CostFunction::Cost2)).unwrap();
        let show = |c: Option<u64>, fallback: &str| c.map_or_else(|| fallback.to_string(), |c| c.to_string());
        println!(
            "{:<10} {:>12} {:>12} {:>12} {:>10}",
            inst.name,
            show(stat.cost(), stat.outcome.name()),
            show(c1.cost(), c1.outcome.name()),
            show(c2.cost(), c2.outcome.name()),
            c1.stats.high_level_generated,
        );
    }
}
