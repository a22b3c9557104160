//! Acceptance suite: one verdict line per criterion, non-zero exit if any
//! criterion fails. Every threshold is a named constant below.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{approach_moves, random_mapf, random_tmapf, reference_cost1, settle_time, Tracks};
use tmapf::bench::{run_batch, Algorithm, BenchCase, BenchConfig, RunRecord};
use tmapf::grid::Vertex;
use tmapf::io::{
    canonical_instance, canonical_instances, generate_scenario, generate_warehouse, MoverStartPolicy, ScenarioRng,
    WarehouseLayout, WarehouseProfile,
};
use tmapf::model::{cost1, cost2, CostFunction, Mode, Problem, Rule, Solution};
use tmapf::oracle::{brute_force_optimal, certify, OracleOutcome, DEFAULT_STATE_CAP};
use tmapf::solver::{cbs_solve, pbs_solve, tfcbs_solve, tfpbs_solve, Outcome, SolveReport, SolverConfig};

// 1: oracle equivalence
const MAPF_INSTANCES: usize = 200;
const TMAPF_INSTANCES: usize = 100;
const CORPUS_SEED: u64 = 2024;
const SMALL_TIMEOUT: Duration = Duration::from_secs(60);
// 2: validity fuzzing
const MUTATIONS: usize = 1000;
const MUTATION_SEED: u64 = 99;
// 3: terraforming helps
const TOY1_COST1: u64 = 8;
const TOY4_COST1: u64 = 7;
const TOY4_STATIC: u64 = 9;
// 4: never worse on the small warehouse
const NEVER_WORSE_SCENARIOS: u64 = 50;
const NEVER_WORSE_AGENTS: usize = 6;
const NEVER_WORSE_MIN_COMMON: usize = 15;
// 5: trend on the downsized warehouse
const TREND_AGENTS: [usize; 3] = [8, 12, 16];
const TREND_SEEDS: u64 = 10;
// Deterministic budget in high-level expansions, with a wall-clock backstop.
const NODE_BUDGET: u64 = 1000;
const WALL_CAP: Duration = Duration::from_secs(30);

struct Verdict {
    id: u8,
    pass: bool,
    detail: String,
}

fn verdict(id: u8, pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        id,
        pass,
        detail: detail.into(),
    }
}

fn config(cost: CostFunction, timeout: Duration) -> SolverConfig {
    SolverConfig {
        timeout: Some(timeout),
        ..SolverConfig::with_cost(cost)
    }
}

struct MapfCase {
    problem: Problem,
    optimum: u64,
    cbs: SolveReport,
}

struct TmapfCase {
    problem: Problem,
    optimum: [u64; 2],
    tfcbs: [SolveReport; 2],
}

struct Corpus {
    mapf: Vec<MapfCase>,
    tmapf: Vec<TmapfCase>,
    skipped_infeasible: usize,
}

const COSTS: [CostFunction; 2] = [CostFunction::Cost1, CostFunction::Cost2];

/// Draws oracle-feasible random instances and solves them optimally.
fn build_corpus() -> Corpus {
    let mut rng = ScenarioRng::new(CORPUS_SEED);
    let mut corpus = Corpus {
        mapf: Vec::new(),
        tmapf: Vec::new(),
        skipped_infeasible: 0,
    };
    while corpus.mapf.len() < MAPF_INSTANCES {
        let Some(p) = random_mapf(&mut rng) else { continue };
        match brute_force_optimal(&p, Mode::Mapf, CostFunction::SumOfCosts, DEFAULT_STATE_CAP).unwrap() {
            OracleOutcome::Optimal { cost, .. } => {
                let cbs = cbs_solve(&p, &config(CostFunction::SumOfCosts, SMALL_TIMEOUT)).unwrap();
                corpus.mapf.push(MapfCase {
                    problem: p,
                    optimum: cost,
                    cbs,
                });
            }
            _ => corpus.skipped_infeasible += 1,
        }
    }
    while corpus.tmapf.len() < TMAPF_INSTANCES {
        let Some(p) = random_tmapf(&mut rng) else { continue };
        let oracle = COSTS.map(|c| brute_force_optimal(&p, Mode::Tmapf, c, DEFAULT_STATE_CAP).unwrap());
        let (Some(c1), Some(c2)) = (oracle[0].cost(), oracle[1].cost()) else {
            corpus.skipped_infeasible += 1;
            continue;
        };
        let tfcbs = COSTS.map(|c| tfcbs_solve(&p, &config(c, SMALL_TIMEOUT)).unwrap());
        corpus.tmapf.push(TmapfCase {
            problem: p,
            optimum: [c1, c2],
            tfcbs,
        });
    }
    corpus
}

fn criterion_1(corpus: &Corpus) -> Verdict {
    let mapf_bad = corpus.mapf.iter().filter(|c| c.cbs.cost() != Some(c.optimum)).count();
    let tmapf_bad: [usize; 2] = [0, 1].map(|k| {
        corpus
            .tmapf
            .iter()
            .filter(|c| c.tfcbs[k].cost() != Some(c.optimum[k]))
            .count()
    });
    let pass = corpus.mapf.len() >= MAPF_INSTANCES
        && corpus.tmapf.len() >= TMAPF_INSTANCES
        && mapf_bad == 0
        && tmapf_bad == [0, 0];
    verdict(
        1,
        pass,
        format!(
            "cbs == oracle on {}/{} MAPF; tfcbs == oracle on {}/{} tMAPF (cost1), {}/{} (cost2); {} oracle-infeasible draws skipped",
            corpus.mapf.len() - mapf_bad,
            corpus.mapf.len(),
            corpus.tmapf.len() - tmapf_bad[0],
            corpus.tmapf.len(),
            corpus.tmapf.len() - tmapf_bad[1],
            corpus.tmapf.len(),
            corpus.skipped_infeasible
        ),
    )
}

/// A valid solution to corrupt, with the problem and mode it is valid for.
struct Specimen<'a> {
    problem: &'a Problem,
    solution: &'a Solution,
    mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Template {
    SharedVertex,
    StaticCell,
    UnderObstacle,
    Jump,
    Swap,
    Unescorted,
    Start,
    Goal,
    Restore,
}

impl Template {
    const ALL: [Template; 9] = [
        Template::SharedVertex,
        Template::StaticCell,
        Template::UnderObstacle,
        Template::Jump,
        Template::Swap,
        Template::Unescorted,
        Template::Start,
        Template::Goal,
        Template::Restore,
    ];

    fn rule(self) -> Rule {
        match self {
            Template::SharedVertex => Rule::S1,
            Template::StaticCell => Rule::S2,
            Template::UnderObstacle => Rule::S3,
            Template::Jump => Rule::T1,
            Template::Swap => Rule::T2,
            Template::Unescorted => Rule::T3,
            Template::Start => Rule::Start,
            Template::Goal => Rule::Goal,
            Template::Restore => Rule::ObstacleRestore,
        }
    }
}

fn pick<T: Copy>(rng: &mut ScenarioRng, items: &[T]) -> Option<T> {
    (!items.is_empty()).then(|| items[rng.below(items.len() as u64) as usize])
}

/// Applies `template` to a copy of the specimen. Returns the corrupted
/// solution and the timestep at which the rule must be reported, or `None`
/// when the template does not apply to this specimen.
fn mutate(rng: &mut ScenarioRng, s: &Specimen<'_>, template: Template) -> Option<(Solution, usize)> {
    let mut sol = s.solution.clone();
    let g = &s.problem.graph;
    let len = sol.states.len();
    let end = len - 1;
    let tmapf = s.mode == Mode::Tmapf;
    let n_tasks = s.problem.tasks.len();
    let n_agents = n_tasks + if tmapf { s.problem.movers.len() } else { 0 };
    let get = |sol: &Solution, a: usize, t: usize| {
        if a < n_tasks {
            sol.states[t].tasks[a]
        } else {
            sol.states[t].movers[a - n_tasks]
        }
    };
    let set = |sol: &mut Solution, a: usize, t: usize, v: Vertex| {
        if a < n_tasks {
            sol.states[t].tasks[a] = v;
        } else {
            sol.states[t].movers[a - n_tasks] = v;
        }
    };
    let n_obstacles = if tmapf { s.problem.movables.len() } else { 0 };
    let vertices: Vec<Vertex> = g.vertices().collect();
    let t = rng.below(len as u64) as usize;
    match template {
        Template::SharedVertex => {
            if n_agents < 2 {
                return None;
            }
            let a = rng.below(n_agents as u64) as usize;
            let b = (a + 1 + rng.below(n_agents as u64 - 1) as usize) % n_agents;
            let v = get(&sol, b, t);
            set(&mut sol, a, t, v);
            Some((sol, t))
        }
        Template::StaticCell => {
            let statics: Vec<Vertex> = vertices.iter().copied().filter(|&v| g.is_static(v)).collect();
            let v = pick(rng, &statics)?;
            if n_obstacles > 0 && rng.coin() {
                let k = rng.below(n_obstacles as u64) as usize;
                sol.states[t].obstacles[k] = v;
            } else {
                let i = rng.below(n_tasks as u64) as usize;
                sol.states[t].tasks[i] = v;
            }
            Some((sol, t))
        }
        Template::UnderObstacle => {
            if n_obstacles == 0 || n_tasks == 0 {
                return None;
            }
            let i = rng.below(n_tasks as u64) as usize;
            let k = rng.below(n_obstacles as u64) as usize;
            sol.states[t].tasks[i] = sol.states[t].obstacles[k];
            Some((sol, t))
        }
        Template::Jump => {
            if len < 2 {
                return None;
            }
            let t = 1 + rng.below(end as u64) as usize;
            let a = rng.below(n_agents as u64) as usize;
            let prev = get(&sol, a, t - 1);
            let far: Vec<Vertex> = vertices
                .iter()
                .copied()
                .filter(|&v| g.manhattan(v, prev) >= 2)
                .collect();
            let v = pick(rng, &far)?;
            set(&mut sol, a, t, v);
            Some((sol, t))
        }
        Template::Swap => {
            if n_agents < 2 {
                return None;
            }
            let moves: Vec<(usize, usize)> = (1..len)
                .flat_map(|t| (0..n_agents).map(move |a| (a, t)))
                .filter(|&(a, t)| get(&sol, a, t - 1) != get(&sol, a, t))
                .collect();
            let (a, t) = pick(rng, &moves)?;
            let b = (a + 1 + rng.below(n_agents as u64 - 1) as usize) % n_agents;
            let (from, to) = (get(&sol, a, t - 1), get(&sol, a, t));
            set(&mut sol, b, t - 1, to);
            set(&mut sol, b, t, from);
            Some((sol, t))
        }
        Template::Unescorted => {
            if n_obstacles == 0 || len < 2 {
                return None;
            }
            let k = rng.below(n_obstacles as u64) as usize;
            let j = s.problem.carrier_of(k)?;
            let loose: Vec<usize> = (1..len)
                .filter(|&t| sol.states[t - 1].movers[j] != sol.states[t - 1].obstacles[k])
                .collect();
            let t = pick(rng, &loose)?;
            let here = sol.states[t - 1].obstacles[k];
            let next: Vec<Vertex> = g.neighbors(here).filter(|&v| v != sol.states[t].obstacles[k]).collect();
            sol.states[t].obstacles[k] = pick(rng, &next)?;
            Some((sol, t))
        }
        Template::Start => {
            let a = rng.below(n_agents as u64) as usize;
            let here = get(&sol, a, 0);
            let other: Vec<Vertex> = vertices.iter().copied().filter(|&v| v != here).collect();
            let v = pick(rng, &other)?;
            set(&mut sol, a, 0, v);
            Some((sol, 0))
        }
        Template::Goal => {
            let i = rng.below(n_tasks as u64) as usize;
            let goal = s.problem.tasks[i].goal;
            let other: Vec<Vertex> = vertices.iter().copied().filter(|&v| v != goal).collect();
            sol.states[end].tasks[i] = pick(rng, &other)?;
            Some((sol, end))
        }
        Template::Restore => {
            if n_obstacles == 0 {
                return None;
            }
            let k = rng.below(n_obstacles as u64) as usize;
            let home = s.problem.movables[k];
            let other: Vec<Vertex> = vertices.iter().copied().filter(|&v| v != home).collect();
            sol.states[end].obstacles[k] = pick(rng, &other)?;
            Some((sol, end))
        }
    }
}

fn criterion_2(corpus: &Corpus) -> Verdict {
    let mut specimens = Vec::new();
    for c in &corpus.mapf {
        if let Some(s) = c.cbs.solution() {
            specimens.push(Specimen {
                problem: &c.problem,
                solution: s,
                mode: Mode::Mapf,
            });
        }
    }
    for c in &corpus.tmapf {
        for r in &c.tfcbs {
            if let Some(s) = r.solution() {
                specimens.push(Specimen {
                    problem: &c.problem,
                    solution: s,
                    mode: Mode::Tmapf,
                });
            }
        }
    }
    let false_positives = specimens
        .iter()
        .filter(|s| !certify(s.problem, s.solution, s.mode).map(|c| c.ok).unwrap_or(false))
        .count();

    let mut rng = ScenarioRng::new(MUTATION_SEED);
    let mut per_rule: BTreeMap<Template, (usize, usize)> = BTreeMap::new();
    let mut applied = 0;
    let mut attempts = 0;
    while applied < MUTATIONS && attempts < 100 * MUTATIONS {
        attempts += 1;
        let template = Template::ALL[applied % Template::ALL.len()];
        let s = &specimens[rng.below(specimens.len() as u64) as usize];
        let Some((corrupted, time)) = mutate(&mut rng, s, template) else {
            continue;
        };
        applied += 1;
        let flagged = certify(s.problem, &corrupted, s.mode)
            .map(|c| {
                c.violations
                    .iter()
                    .any(|v| v.rule == template.rule().id() && v.time == time)
            })
            .unwrap_or(false);
        let entry = per_rule.entry(template).or_default();
        entry.0 += 1;
        entry.1 += usize::from(flagged);
    }
    let flagged: usize = per_rule.values().map(|e| e.1).sum();
    let breakdown: Vec<String> = per_rule
        .iter()
        .map(|(t, (n, f))| format!("{} {f}/{n}", t.rule().id()))
        .collect();
    verdict(
        2,
        applied == MUTATIONS && flagged == applied && false_positives == 0,
        format!(
            "{flagged}/{applied} mutations flagged with the right rule and time [{}]; {false_positives} false positives on {} originals",
            breakdown.join(", "),
            specimens.len()
        ),
    )
}

fn criterion_3() -> Verdict {
    let toy1 = canonical_instance("TOY-1").unwrap();
    let cbs = cbs_solve(&toy1.problem.static_version(), &SolverConfig::default()).unwrap();
    let tf = tfcbs_solve(&toy1.problem, &SolverConfig::with_cost(CostFunction::Cost1)).unwrap();
    let oracle1 = brute_force_optimal(&toy1.problem, Mode::Tmapf, CostFunction::Cost1, DEFAULT_STATE_CAP).unwrap();
    let toy1_ok = cbs.outcome == Outcome::Infeasible
        && tf.cost() == Some(TOY1_COST1)
        && oracle1.cost() == Some(TOY1_COST1)
        && toy1.cost1_optimum == TOY1_COST1;

    let toy4 = canonical_instance("TOY-4").unwrap();
    let stat = cbs_solve(&toy4.problem.static_version(), &SolverConfig::default()).unwrap();
    let tf4 = tfcbs_solve(&toy4.problem, &SolverConfig::with_cost(CostFunction::Cost1)).unwrap();
    let toy4_ok = stat.cost() == Some(TOY4_STATIC)
        && tf4.cost() == Some(TOY4_COST1)
        && TOY4_COST1 < TOY4_STATIC
        && toy4.static_optimum == Some(TOY4_STATIC)
        && toy4.cost1_optimum == TOY4_COST1;
    verdict(
        3,
        toy1_ok && toy4_ok,
        format!(
            "TOY-1: cbs {}, tfcbs cost1 {:?} (oracle {:?}, frozen {TOY1_COST1}); TOY-4: tfcbs cost1 {:?} < static cbs {:?} (frozen {TOY4_COST1} < {TOY4_STATIC})",
            cbs.outcome.name(),
            tf.cost(),
            oracle1.cost(),
            tf4.cost(),
            stat.cost()
        ),
    )
}

fn budget(algorithms: Vec<Algorithm>) -> BenchConfig {
    BenchConfig {
        algorithms,
        cost: CostFunction::Cost1,
        timeout: Some(WALL_CAP),
        node_limit: Some(NODE_BUDGET),
        validate: true,
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn warehouse_cases(layout: WarehouseProfile, agents: &[usize], seeds: u64, tag: &str) -> Vec<BenchCase> {
    let map = generate_warehouse(layout, 0).unwrap();
    let mut cases = Vec::new();
    for &n in agents {
        for seed in 0..seeds {
            let scen = generate_scenario(&map, n, map.movables.len(), seed, MoverStartPolicy::UnderShelf).unwrap();
            cases.push(BenchCase {
                id: format!("{tag}-{n}-{seed}"),
                map: tag.into(),
                seed: Some(seed),
                problem: scen.to_problem(&map).unwrap(),
            });
        }
    }
    cases
}

/// Records keyed by scenario, then algorithm.
fn by_scenario(records: &[RunRecord]) -> BTreeMap<&str, BTreeMap<Algorithm, &RunRecord>> {
    let mut out: BTreeMap<&str, BTreeMap<Algorithm, &RunRecord>> = BTreeMap::new();
    for r in records {
        out.entry(r.scenario.as_str()).or_default().insert(r.algorithm, r);
    }
    out
}

fn criterion_4() -> Verdict {
    let cases = warehouse_cases(
        WarehouseProfile::Small,
        &[NEVER_WORSE_AGENTS],
        NEVER_WORSE_SCENARIOS,
        "small",
    );
    let records = run_batch(&cases, &budget(vec![Algorithm::Cbs, Algorithm::Tfcbs]));
    let mut common = 0;
    let mut worse = 0;
    let mut better = 0;
    for cells in by_scenario(&records).values() {
        if let (Some(a), Some(b)) = (cells[&Algorithm::Cbs].cost, cells[&Algorithm::Tfcbs].cost) {
            common += 1;
            worse += usize::from(b > a);
            better += usize::from(b < a);
        }
    }
    let invalid = records.iter().filter(|r| r.certified == Some(false)).count();
    verdict(
        4,
        worse == 0 && invalid == 0 && common >= NEVER_WORSE_MIN_COMMON,
        format!(
            "tfcbs cost1 <= cbs on {}/{common} commonly solved small-warehouse scenarios ({better} strictly better, need >= {NEVER_WORSE_MIN_COMMON} common); {invalid} invalid",
            common - worse
        ),
    )
}

fn criterion_5(records: &[RunRecord]) -> Verdict {
    let largest = *TREND_AGENTS.last().unwrap();
    let rate = |algo: Algorithm| {
        let cells: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.algorithm == algo && r.n_tasks == largest)
            .collect();
        cells.iter().filter(|r| r.solved()).count() as f64 / cells.len() as f64
    };
    let (pbs_rate, cbs_rate) = (rate(Algorithm::Tfpbs), rate(Algorithm::Tfcbs));
    let mut means = Vec::new();
    let mut expansions_ok = true;
    for n in TREND_AGENTS {
        let rows: Vec<&RunRecord> = records.iter().filter(|r| r.n_tasks == n).collect();
        let grouped = by_scenario(&rows.iter().map(|r| (*r).clone()).collect::<Vec<_>>())
            .into_iter()
            .filter(|(_, cells)| cells[&Algorithm::Tfcbs].solved() && cells[&Algorithm::Tfpbs].solved())
            .map(|(_, cells)| {
                (
                    cells[&Algorithm::Tfcbs].high_level_expanded,
                    cells[&Algorithm::Tfpbs].high_level_expanded,
                )
            })
            .collect::<Vec<_>>();
        if grouped.is_empty() {
            expansions_ok = false;
            means.push(format!("n={n}: no common cells"));
            continue;
        }
        let m = grouped.len() as f64;
        let cbs_mean = grouped.iter().map(|g| g.0 as f64).sum::<f64>() / m;
        let pbs_mean = grouped.iter().map(|g| g.1 as f64).sum::<f64>() / m;
        expansions_ok &= pbs_mean < cbs_mean;
        means.push(format!("n={n}: {pbs_mean:.1} vs {cbs_mean:.1}"));
    }
    let invalid = records.iter().filter(|r| r.certified == Some(false)).count();
    verdict(
        5,
        pbs_rate >= cbs_rate && expansions_ok && invalid == 0,
        format!(
            "success at n={largest}: tfpbs {:.0}% >= tfcbs {:.0}%; mean high-level expansions tfpbs < tfcbs on common cells [{}]",
            100.0 * pbs_rate,
            100.0 * cbs_rate,
            means.join("; ")
        ),
    )
}

fn criterion_6(corpus: &Corpus, trend: &[RunRecord]) -> Verdict {
    let mut checked = 0;
    let mut violations = 0;
    let mut compare = |lower: Option<u64>, upper: Option<u64>| {
        if let (Some(l), Some(u)) = (lower, upper) {
            checked += 1;
            violations += usize::from(u < l);
        }
    };
    for c in &corpus.mapf {
        let pbs = pbs_solve(&c.problem, &config(CostFunction::SumOfCosts, SMALL_TIMEOUT)).unwrap();
        compare(c.cbs.cost(), pbs.cost());
    }
    for c in &corpus.tmapf {
        for (k, cost) in COSTS.into_iter().enumerate() {
            let tfpbs = tfpbs_solve(&c.problem, &config(cost, SMALL_TIMEOUT)).unwrap();
            compare(c.tfcbs[k].cost(), tfpbs.cost());
        }
    }
    for cells in by_scenario(trend).values() {
        compare(cells[&Algorithm::Cbs].cost, cells[&Algorithm::Pbs].cost);
        compare(cells[&Algorithm::Tfcbs].cost, cells[&Algorithm::Tfpbs].cost);
    }
    verdict(
        6,
        violations == 0 && checked > 0,
        format!(
            "priority cost >= optimal cost on {}/{checked} commonly solved pairs",
            checked - violations
        ),
    )
}

fn run_cli(args: &[&str], dir: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_tmapf"))
        .args(args)
        .current_dir(dir)
        .output()
        .map(|o| o.status.code().is_some_and(|c| c == 0 || c == 1))
        .unwrap_or(false)
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().is_some_and(|n| n != "timings.csv") {
                out.insert(
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

fn criterion_7() -> Verdict {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let toy1 = data.join("toy1.scen");
    let toy1 = toy1.to_str().unwrap();
    let script: Vec<Vec<&str>> = vec![
        vec!["gen-map", "--profile", "downsized", "--out", "d.map"],
        vec![
            "gen-scen", "--map", "d.map", "--agents", "8", "--seed", "3", "--count", "3", "--out", "scens",
        ],
        vec![
            "solve",
            "--scen",
            "scens/d-8-3.scen",
            "--algo",
            "tfpbs",
            "--out",
            "a.json",
        ],
        vec![
            "solve",
            "--scen",
            "scens/d-8-4.scen",
            "--algo",
            "cbs",
            "--out",
            "b.json",
        ],
        vec![
            "solve", "--scen", toy1, "--algo", "tfcbs", "--cost", "cost2", "--out", "c.json",
        ],
        vec![
            "bench",
            "--scen",
            "scens",
            "--algo",
            "cbs,pbs,tfcbs,tfpbs",
            "--node-limit",
            "500",
            "--jobs",
            "2",
            "--out",
            "bench",
        ],
    ];
    let runs: Vec<(bool, BTreeMap<String, Vec<u8>>)> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let ok = script.iter().all(|args| run_cli(args, dir.path()));
            (ok, snapshot(dir.path()))
        })
        .collect();
    let files = runs[0].1.len();
    let identical = runs[0].1 == runs[1].1;
    verdict(
        7,
        runs.iter().all(|r| r.0) && identical && files >= 9,
        format!("two runs of gen-map, gen-scen, solve and bench: {files} files, byte-identical: {identical}"),
    )
}

/// Inserts a wait into one entity's track at `t` and returns the new solution.
fn with_wait(s: &Solution, t: usize, edit: impl Fn(&mut Tracks, usize)) -> Solution {
    let mut tracks = Tracks::of(s);
    edit(&mut tracks, t);
    tracks.assemble()
}

fn criterion_8(corpus: &Corpus) -> Verdict {
    let mut instances: Vec<(Problem, Solution)> = Vec::new();
    for c in &corpus.tmapf {
        for r in &c.tfcbs {
            if let Some(s) = r.solution() {
                instances.push((c.problem.clone(), s.clone()));
            }
        }
    }
    for inst in canonical_instances() {
        let p = tmapf::solver::with_assignment(&inst.problem);
        for cost in COSTS {
            if let Some(s) = tfcbs_solve(&p, &SolverConfig::with_cost(cost)).unwrap().solution() {
                instances.push((p.clone(), s.clone()));
            }
        }
    }
    let mut algebra_bad = 0;
    let mut waits = 0;
    let mut waits_bad = 0;
    for (p, s) in &instances {
        let (c1, c2) = (cost1(p, s).unwrap(), cost2(p, s).unwrap());
        if c2 - c1 != approach_moves(p, s) || Some(c1) != reference_cost1(p, s) {
            algebra_bad += 1;
        }
        let mut check = |changed: Solution, task_delta: u64| {
            waits += 1;
            let ok =
                cost1(p, &changed).ok() == Some(c1 + task_delta) && cost2(p, &changed).ok() == Some(c2 + task_delta);
            waits_bad += usize::from(!ok);
        };
        for j in 0..p.movers.len() {
            let k = p.assigned_obstacle(j);
            let pickup = common::first_pickup(p, s, j).unwrap_or(0);
            // before pickup, and while the coupled pair stands still
            for t in [0, pickup / 2, pickup, s.len() - 1] {
                check(
                    with_wait(s, t, |tr, t| {
                        let m = tr.movers[j][t];
                        tr.movers[j].insert(t, m);
                        let o = tr.obstacles[k][t];
                        tr.obstacles[k].insert(t, o);
                    }),
                    0,
                );
            }
        }
        for i in 0..p.tasks.len() {
            let settle = settle_time(p, s, i).unwrap();
            if settle > 0 {
                check(
                    with_wait(s, settle - 1, |tr, t| {
                        let v = tr.tasks[i][t];
                        tr.tasks[i].insert(t, v);
                    }),
                    1,
                );
            }
        }
    }
    verdict(
        8,
        algebra_bad == 0 && waits_bad == 0 && !instances.is_empty(),
        format!(
            "cost2 - cost1 == pre-pickup mover moves on {}/{} solutions; {}/{waits} wait insertions shift costs as predicted",
            instances.len() - algebra_bad,
            instances.len(),
            waits - waits_bad
        ),
    )
}

fn main() {
    let started = Instant::now();
    let mut verdicts = Vec::new();
    let corpus = build_corpus();
    verdicts.push(criterion_1(&corpus));
    verdicts.push(criterion_2(&corpus));
    verdicts.push(criterion_3());
    verdicts.push(criterion_4());
    let trend_cases = warehouse_cases(
        WarehouseProfile::Custom(WarehouseLayout::DOWNSIZED),
        &TREND_AGENTS,
        TREND_SEEDS,
        "downsized",
    );
    let trend = run_batch(&trend_cases, &budget(Algorithm::ALL.to_vec()));
    verdicts.push(criterion_5(&trend));
    verdicts.push(criterion_6(&corpus, &trend));
    verdicts.push(criterion_7());
    verdicts.push(criterion_8(&corpus));

    for v in &verdicts {
        println!(
            "criterion {}: {} | {}",
            v.id,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance finished in {:.1} s", started.elapsed().as_secs_f64());
    if verdicts.iter().any(|v| !v.pass) {
        std::process::exit(1);
    }
}
