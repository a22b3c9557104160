//! Priority-based search: fast, but neither complete nor optimal.
//!
//! The corridor with a single pocket (TOY-3) defeats both priority orders,
//! while conflict-based search finds the plan.

use tmapf::io::canonical_instance;
use tmapf::model::CostFunction;
use tmapf::solver::{cbs_solve, pbs_solve, tfcbs_solve, tfpbs_solve, SolverConfig};

fn main() {
    let cfg = SolverConfig::with_cost(CostFunction::Cost1);
    for name in ["TOY-4", "SHORTCUT", "TOY-3"] {
        let inst = canonical_instance(name).unwrap();
        println!("{name}: {}", inst.description);
        let stat = inst.problem.static_version();
        for (label, r) in [
            ("pbs", pbs_solve(&stat, &cfg).unwrap()),
            ("cbs", cbs_solve(&stat, &cfg).unwrap()),
            ("tfpbs", tfpbs_solve(&inst.problem, &cfg).unwrap()),
            ("tfcbs", tfcbs_solve(&inst.problem, &cfg).unwrap()),
        ] {
            println!(
                "  {label:<6} {:<12} cost {:>4}  expanded {}",
                r.outcome.name(),
                r.cost().map_or("-".into(), |c| c.to_string()),
                r.stats.high_level_expanded
            );
        }
    }
}
