use super::{parse_map, parse_scenario, MapData, ScenarioFile};
use crate::model::Problem;

/// A shipped instance with its optimal costs, computed once by the
/// brute-force oracle and frozen here.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: &'static str,
    pub description: &'static str,
    pub map_text: &'static str,
    pub scenario_text: &'static str,
    pub map: MapData,
    pub scenario: ScenarioFile,
    pub problem: Problem,
    /// Sum-of-costs optimum with every movable obstacle frozen in place;
    /// `None` when that plain MAPF instance is infeasible.
    pub static_optimum: Option<u64>,
    pub cost1_optimum: u64,
    pub cost2_optimum: u64,
}

struct Source {
    name: &'static str,
    description: &'static str,
    map: &'static str,
    scenario: &'static str,
    optima: (Option<u64>, u64, u64),
}

const SOURCES: [Source; 5] = [
    Source {
        name: "TOY-1",
        description: "3x3, a shelf row with a movable in the middle splits the grid; only terraforming connects start and goal",
        map: include_str!("../../data/toy1.map"),
        scenario: include_str!("../../data/toy1.scen"),
        optima: (None, 8, 9),
    },
    Source {
        name: "TOY-2",
        description: "a single agent crossing a 1x3 row",
        map: include_str!("../../data/toy2.map"),
        scenario: include_str!("../../data/toy2.scen"),
        optima: (Some(2), 2, 2),
    },
    Source {
        name: "TOY-3",
        description: "two agents swap ends of a corridor with one side pocket; every fixed priority order fails",
        map: include_str!("../../data/toy3.map"),
        scenario: include_str!("../../data/toy3.scen"),
        optima: (Some(11), 11, 11),
    },
    Source {
        name: "TOY-4",
        description: "7x4 aisle map; clearing the movable in the wall beats the detour",
        map: include_str!("../../data/toy4.map"),
        scenario: include_str!("../../data/toy4.scen"),
        optima: (Some(9), 7, 7),
    },
    Source {
        name: "SHORTCUT",
        description: "3x4, two agents below a row of two movables; direct priorities let the second agent keep the cleared shortcut",
        map: include_str!("../../data/shortcut.map"),
        scenario: include_str!("../../data/shortcut.scen"),
        optima: (Some(10), 8, 8),
    },
];

/// The shipped toy instances.
pub fn canonical_instances() -> Vec<NamedInstance> {
    SOURCES.iter().map(load).collect()
}

pub fn canonical_instance(name: &str) -> Option<NamedInstance> {
    SOURCES.iter().find(|s| s.name.eq_ignore_ascii_case(name)).map(load)
}

fn load(s: &Source) -> NamedInstance {
    let map = parse_map(s.map).expect("shipped map parses");
    let scenario = parse_scenario(s.scenario).expect("shipped scenario parses");
    let problem = scenario.to_problem(&map).expect("shipped scenario fits its map");
    NamedInstance {
        name: s.name,
        description: s.description,
        map_text: s.map,
        scenario_text: s.scenario,
        map,
        scenario,
        problem,
        static_optimum: s.optima.0,
        cost1_optimum: s.optima.1,
        cost2_optimum: s.optima.2,
    }
}
