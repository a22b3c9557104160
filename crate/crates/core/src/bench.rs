//! Experiment harness: algorithm dispatch, the single-agent baseline,
//! parallel batch runs and the aggregate report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::grid::UNREACHABLE;
use crate::io::IoError;
use crate::model::{CostFunction, Mode, Problem};
use crate::oracle::certify;
use crate::solver::{cbs_solve, pbs_solve, tfcbs_solve, tfpbs_solve, Outcome, SolveReport, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cbs,
    Pbs,
    Tfcbs,
    Tfpbs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Cbs, Algorithm::Pbs, Algorithm::Tfcbs, Algorithm::Tfpbs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cbs => "cbs",
            Algorithm::Pbs => "pbs",
            Algorithm::Tfcbs => "tfcbs",
            Algorithm::Tfpbs => "tfpbs",
        }
    }

    /// Static algorithms see every movable obstacle as a wall and no movers.
    pub fn is_static(self) -> bool {
        matches!(self, Algorithm::Cbs | Algorithm::Pbs)
    }

    /// Validity mode of this algorithm's solutions.
    pub fn mode(self) -> Mode {
        if self.is_static() {
            Mode::Mapf
        } else {
            Mode::Tmapf
        }
    }

    /// The problem this algorithm actually solves.
    pub fn instance(self, problem: &Problem) -> Problem {
        if self.is_static() {
            problem.static_version()
        } else {
            problem.clone()
        }
    }

    /// The objective it optimises or reports under `requested`.
    pub fn cost_function(self, requested: CostFunction) -> CostFunction {
        if self.is_static() {
            CostFunction::SumOfCosts
        } else {
            requested
        }
    }

    /// Runs the algorithm on `problem`, freezing movables first for the
    /// static ones.
    pub fn solve(self, problem: &Problem, config: &SolverConfig) -> SolveReport {
        let instance = self.instance(problem);
        let result = match self {
            Algorithm::Cbs => cbs_solve(&instance, config),
            Algorithm::Pbs => pbs_solve(&instance, config),
            Algorithm::Tfcbs => tfcbs_solve(&instance, config),
            Algorithm::Tfpbs => tfpbs_solve(&instance, config),
        };
        result.expect("static algorithms receive the static version")
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected cbs, pbs, tfcbs or tfpbs)"))
    }
}

/// Sum of single-agent shortest paths with every obstacle, static or
/// movable, in place and the other agents ignored. `None` when some task
/// agent cannot reach its goal that way.
pub fn baseline_cost(problem: &Problem) -> Option<u64> {
    let g = &problem.graph;
    let blocked = |v| g.is_static(v) || problem.movables.contains(&v);
    let mut total = 0u64;
    for t in &problem.tasks {
        let d = g.bfs_distances(t.start, |v| !blocked(v))[t.goal.index()];
        if d == UNREACHABLE {
            return None;
        }
        total += u64::from(d);
    }
    Some(total)
}

/// One instance of a batch.
#[derive(Clone, Debug)]
pub struct BenchCase {
    /// Unique scenario name, usually the file stem.
    pub id: String,
    /// Map name used for grouping.
    pub map: String,
    pub seed: Option<u64>,
    pub problem: Problem,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub cost: CostFunction,
    pub timeout: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Re-certify every solved cell before recording it.
    pub validate: bool,
    /// Worker threads; cells are independent.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: vec![Algorithm::Cbs, Algorithm::Tfcbs, Algorithm::Tfpbs],
            cost: CostFunction::Cost1,
            timeout: Some(crate::solver::DEFAULT_TIMEOUT),
            node_limit: None,
            validate: false,
            jobs: 1,
        }
    }
}

/// Result of one (scenario, algorithm) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    pub map: String,
    pub n_tasks: usize,
    pub algorithm: Algorithm,
    pub cost_function: CostFunction,
    pub outcome: String,
    pub cost: Option<u64>,
    pub baseline: Option<u64>,
    /// `cost / baseline`; may drop below 1 when terraforming opens shortcuts.
    pub suboptimality: Option<f64>,
    pub high_level_expanded: u64,
    pub high_level_generated: u64,
    pub low_level_expanded: u64,
    pub seed: Option<u64>,
    /// Certificate verdict under `--validate`, empty otherwise.
    pub certified: Option<bool>,
    /// Kept out of the records file so that reports are reproducible; see
    /// [`write_timings`].
    #[serde(skip)]
    pub wall_ms: u128,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.cost.is_some()
    }
}

/// Runs every (case, algorithm) cell on up to `config.jobs` threads. The
/// records come back in case order, then in `config.algorithms` order,
/// whatever the schedule.
pub fn run_batch(cases: &[BenchCase], config: &BenchConfig) -> Vec<RunRecord> {
    let cells: Vec<(usize, Algorithm)> = (0..cases.len())
        .flat_map(|c| config.algorithms.iter().map(move |&a| (c, a)))
        .collect();
    let slots: Vec<Mutex<Option<RunRecord>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..config.jobs.clamp(1, cells.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(c, algo)) = cells.get(k) else { break };
                let record = run_cell(&cases[c], algo, config);
                *slots[k].lock().expect("no worker panics while holding a slot") = Some(record);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("unpoisoned").expect("every cell ran"))
        .collect()
}

pub fn run_cell(case: &BenchCase, algo: Algorithm, config: &BenchConfig) -> RunRecord {
    let cost_function = algo.cost_function(config.cost);
    let solver_config = SolverConfig {
        cost: cost_function,
        timeout: config.timeout,
        node_limit: config.node_limit,
        horizon: None,
    };
    let report = algo.solve(&case.problem, &solver_config);
    let baseline = baseline_cost(&case.problem);
    let cost = report.cost();
    let certified = match (&report.outcome, config.validate) {
        (Outcome::Solved { solution, .. }, true) => {
            let instance = algo.instance(&case.problem);
            let instance = if algo.is_static() {
                instance
            } else {
                crate::solver::with_assignment(&instance)
            };
            Some(certify(&instance, solution, algo.mode()).is_ok_and(|c| c.ok))
        }
        _ => None,
    };
    RunRecord {
        scenario: case.id.clone(),
        map: case.map.clone(),
        n_tasks: case.problem.tasks.len(),
        algorithm: algo,
        cost_function,
        outcome: report.outcome.name().to_string(),
        cost,
        baseline,
        suboptimality: match (cost, baseline) {
            (Some(c), Some(b)) if b > 0 => Some(c as f64 / b as f64),
            _ => None,
        },
        high_level_expanded: report.stats.high_level_expanded,
        high_level_generated: report.stats.high_level_generated,
        low_level_expanded: report.stats.low_level_expanded,
        seed: case.seed,
        certified,
        wall_ms: report.stats.elapsed.as_millis(),
    }
}

pub fn write_records<W: Write>(records: &[RunRecord], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>, IoError> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<Vec<RunRecord>, _>>()
        .map_err(csv_error)
}

/// Wall-clock times per cell, the only non-reproducible output of a batch.
pub fn write_timings<W: Write>(records: &[RunRecord], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "algorithm", "wall_ms"])
        .map_err(csv_error)?;
    for r in records {
        w.write_record([r.scenario.as_str(), r.algorithm.name(), &r.wall_ms.to_string()])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> IoError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => IoError::File(e),
        other => IoError::Config(format!("records file: {other:?}")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub cells: usize,
    pub solved: usize,
    pub timeouts: usize,
    pub success_rate: f64,
    /// Means and medians below range over the commonly solved scenarios.
    pub mean_high_level_expanded: Option<f64>,
    pub mean_low_level_expanded: Option<f64>,
    pub mean_suboptimality: Option<f64>,
    pub median_suboptimality: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub map: String,
    pub n_tasks: usize,
    pub scenarios: usize,
    /// Scenarios solved by every algorithm of the group.
    pub commonly_solved: usize,
    pub algorithms: Vec<AlgorithmSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
}

/// Aggregates per (map, agent count). A pure function of the records.
pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut groups: BTreeMap<(String, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.map.clone(), r.n_tasks)).or_default().push(r);
    }
    let groups = groups
        .into_iter()
        .map(|((map, n_tasks), rs)| {
            let algos: BTreeSet<Algorithm> = rs.iter().map(|r| r.algorithm).collect();
            let scenarios: BTreeSet<&str> = rs.iter().map(|r| r.scenario.as_str()).collect();
            let common: BTreeSet<&str> = scenarios
                .iter()
                .copied()
                .filter(|s| {
                    algos
                        .iter()
                        .all(|&a| rs.iter().any(|r| r.scenario == *s && r.algorithm == a && r.solved()))
                })
                .collect();
            let algorithms = algos
                .iter()
                .map(|&a| {
                    let mine: Vec<&RunRecord> = rs.iter().copied().filter(|r| r.algorithm == a).collect();
                    let shared: Vec<&RunRecord> = mine
                        .iter()
                        .copied()
                        .filter(|r| common.contains(r.scenario.as_str()))
                        .collect();
                    let solved = mine.iter().filter(|r| r.solved()).count();
                    let subopt: Vec<f64> = shared.iter().filter_map(|r| r.suboptimality).collect();
                    AlgorithmSummary {
                        algorithm: a,
                        cells: mine.len(),
                        solved,
                        timeouts: mine.iter().filter(|r| r.outcome == "timeout").count(),
                        success_rate: solved as f64 / mine.len() as f64,
                        mean_high_level_expanded: mean(shared.iter().map(|r| r.high_level_expanded as f64)),
                        mean_low_level_expanded: mean(shared.iter().map(|r| r.low_level_expanded as f64)),
                        mean_suboptimality: mean(subopt.iter().copied()),
                        median_suboptimality: median(subopt),
                    }
                })
                .collect();
            GroupSummary {
                map,
                n_tasks,
                scenarios: scenarios.len(),
                commonly_solved: common.len(),
                algorithms,
            }
        })
        .collect();
    Summary { groups }
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

pub fn summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("plain data serializes");
    s.push('\n');
    s
}

/// Process exit status for a finished batch: 3 when any certificate failed,
/// 4 when every cell timed out, 0 otherwise.
pub fn batch_status(records: &[RunRecord]) -> i32 {
    if records.iter().any(|r| r.certified == Some(false)) {
        3
    } else if !records.is_empty() && records.iter().all(|r| r.outcome == "timeout") {
        4
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::canonical_instance;

    fn record(scenario: &str, algorithm: Algorithm, cost: Option<u64>, hl: u64) -> RunRecord {
        RunRecord {
            scenario: scenario.into(),
            map: "m".into(),
            n_tasks: 2,
            algorithm,
            cost_function: CostFunction::Cost1,
            outcome: if cost.is_some() { "solved" } else { "timeout" }.into(),
            cost,
            baseline: Some(4),
            suboptimality: cost.map(|c| c as f64 / 4.0),
            high_level_expanded: hl,
            high_level_generated: hl,
            low_level_expanded: 10 * hl,
            seed: None,
            certified: None,
            wall_ms: 5,
        }
    }

    #[test]
    fn baseline_of_toys() {
        assert_eq!(baseline_cost(&canonical_instance("TOY-2").unwrap().problem), Some(2));
        assert_eq!(baseline_cost(&canonical_instance("TOY-1").unwrap().problem), None);
        assert_eq!(baseline_cost(&canonical_instance("TOY-4").unwrap().problem), Some(9));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("astar".parse::<Algorithm>().is_err());
    }

    #[test]
    fn aggregates_use_common_cells_only() {
        let rs = vec![
            record("a", Algorithm::Cbs, Some(4), 10),
            record("a", Algorithm::Tfpbs, Some(6), 2),
            record("b", Algorithm::Cbs, None, 100),
            record("b", Algorithm::Tfpbs, Some(8), 4),
        ];
        let s = summarize(&rs);
        let g = &s.groups[0];
        assert_eq!(g.commonly_solved, 1);
        let cbs = &g.algorithms[0];
        assert_eq!(cbs.success_rate, 0.5);
        assert_eq!(cbs.mean_high_level_expanded, Some(10.0));
        let tfpbs = &g.algorithms[1];
        assert_eq!(tfpbs.success_rate, 1.0);
        assert_eq!(tfpbs.mean_suboptimality, Some(1.5));
        assert_eq!(tfpbs.median_suboptimality, Some(1.5));
    }

    #[test]
    fn records_round_trip_through_csv() {
        let rs = vec![
            record("a", Algorithm::Tfcbs, Some(5), 3),
            record("b", Algorithm::Pbs, None, 7),
        ];
        let mut buf = Vec::new();
        write_records(&rs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(!text.contains("wall"));
        let back = read_records(buf.as_slice()).unwrap();
        let strip = |r: &RunRecord| RunRecord {
            wall_ms: 0,
            ..r.clone()
        };
        assert_eq!(
            back.iter().map(strip).collect::<Vec<_>>(),
            rs.iter().map(strip).collect::<Vec<_>>()
        );
        assert_eq!(summary_json(&summarize(&back)), summary_json(&summarize(&rs)));
    }

    #[test]
    fn exit_status() {
        let mut r = record("a", Algorithm::Cbs, None, 1);
        assert_eq!(batch_status(&[r.clone()]), 4);
        r.certified = Some(false);
        r.cost = Some(1);
        r.outcome = "solved".into();
        assert_eq!(batch_status(&[r]), 3);
        assert_eq!(batch_status(&[record("a", Algorithm::Cbs, Some(3), 1)]), 0);
    }

    #[test]
    fn batch_order_is_schedule_independent() {
        let cases: Vec<BenchCase> = ["TOY-2", "TOY-3", "TOY-4"]
            .iter()
            .map(|n| BenchCase {
                id: n.to_string(),
                map: "toy".into(),
                seed: None,
                problem: canonical_instance(n).unwrap().problem,
            })
            .collect();
        let mut config = BenchConfig {
            algorithms: Algorithm::ALL.to_vec(),
            validate: true,
            ..Default::default()
        };
        let serial = run_batch(&cases, &config);
        config.jobs = 4;
        let parallel = run_batch(&cases, &config);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_records(&serial, &mut a).unwrap();
        write_records(&parallel, &mut b).unwrap();
        assert_eq!(a, b);
        assert_eq!(serial.len(), 12);
        for r in &serial {
            assert_eq!(r.certified, r.cost.map(|_| true), "{} {}", r.scenario, r.algorithm);
        }
        // neither priority order lets the low agent duck into the pocket in time
        let gave_up: Vec<_> = serial
            .iter()
            .filter(|r| !r.solved())
            .map(|r| (r.scenario.as_str(), r.algorithm))
            .collect();
        assert_eq!(gave_up, vec![("TOY-3", Algorithm::Pbs), ("TOY-3", Algorithm::Tfpbs)]);
        assert_eq!(batch_status(&serial), 0);
    }
}
