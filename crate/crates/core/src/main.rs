//! `tmapf`: solve, generate, certify and benchmark tMAPF instances.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use tmapf::bench::{self, Algorithm, BenchCase, BenchConfig};
use tmapf::io::{
    self, emit_map, emit_scenario, emit_solution, generate_scenario, generate_warehouse, parse_map, parse_scenario,
    parse_solution, MapData, MoverStartPolicy, SolutionFile, SolutionMeta, WarehouseLayout, WarehouseProfile,
};
use tmapf::model::{CostFunction, Mode, Problem};
use tmapf::oracle::{brute_force_optimal, certify, OracleOutcome, DEFAULT_STATE_CAP};
use tmapf::solver::{with_assignment, Outcome, SolverConfig};

const EXIT_UNSOLVED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "tmapf", version, about = "Multi-agent path finding with movable obstacles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write the solution file.
    Solve(SolveArgs),
    /// Run a batch of scenarios against several algorithms.
    Bench(BenchArgs),
    /// Generate a warehouse map.
    GenMap(GenMapArgs),
    /// Generate seeded scenarios for a map.
    GenScen(GenScenArgs),
    /// Check a solution file against every validity rule.
    Certify(CertifyArgs),
    /// Exact optimum of a tiny instance by joint-state search.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Instance {
    /// Map file; defaults to the `map` named in the scenario, next to it.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    scen: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value = "tfcbs")]
    algo: Algorithm,
    #[arg(long, default_value = "cost1")]
    cost: CostFunction,
    #[arg(long, default_value_t = 300)]
    timeout_secs: u64,
    /// Stop after this many high-level expansions.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Recorded in the solution metadata.
    #[arg(long)]
    seed: Option<u64>,
    /// Solution file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certify the solution before writing it.
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Map shared by all scenarios; otherwise each scenario names its own.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Scenario files or directories of `.scen` files.
    #[arg(long, num_args = 1.., required_unless_present = "records")]
    scen: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "cbs,tfcbs,tfpbs")]
    algo: Vec<Algorithm>,
    #[arg(long, default_value = "cost1")]
    cost: CostFunction,
    #[arg(long, default_value_t = 300)]
    timeout_secs: u64,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    validate: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory for records.csv, timings.csv and summary.json.
    #[arg(long)]
    out: PathBuf,
    /// Rebuild summary.json from an existing records file instead of running.
    #[arg(long, conflicts_with = "scen")]
    records: Option<PathBuf>,
}

#[derive(Args)]
struct GenMapArgs {
    /// small, large, downsized or custom.
    #[arg(long, default_value = "small")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    shelf_rows: Option<u32>,
    #[arg(long)]
    blocks: Option<u32>,
    #[arg(long)]
    block_width: Option<u32>,
    #[arg(long)]
    cross_aisle: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenScenArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    agents: usize,
    /// Seed of the first scenario; later ones count up from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value = "under-shelf")]
    mover_start_policy: MoverStartPolicy,
    /// A file for a single scenario, a directory for several.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long)]
    solution: PathBuf,
    /// mapf or tmapf; inferred from the solution's algorithm by default.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value = "cost1")]
    cost: CostFunction,
    /// Solve the static version (movables frozen, no movers) instead.
    #[arg(long)]
    r#static: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Where to write the witness solution.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_CONFIG, e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => run_bench(a),
        Command::GenMap(a) => gen_map(a),
        Command::GenScen(a) => gen_scen(a),
        Command::Certify(a) => run_certify(a),
        Command::Oracle(a) => run_oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_CONFIG, format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_CONFIG, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

struct Loaded {
    map_path: PathBuf,
    scenario: io::ScenarioFile,
    problem: Problem,
}

fn load(map: Option<&Path>, scen: &Path) -> Result<Loaded, Failure> {
    let scenario =
        parse_scenario(&read(scen)?).map_err(|e| Failure(EXIT_CONFIG, format!("{}: {e}", scen.display())))?;
    let map_path = match (map, &scenario.map) {
        (Some(m), _) => m.to_path_buf(),
        (None, Some(name)) => scen.parent().unwrap_or(Path::new(".")).join(name),
        (None, None) => {
            return Err(Failure(
                EXIT_CONFIG,
                format!("{} names no map; pass --map", scen.display()),
            ))
        }
    };
    let map: MapData =
        parse_map(&read(&map_path)?).map_err(|e| Failure(EXIT_CONFIG, format!("{}: {e}", map_path.display())))?;
    let problem = scenario.to_problem(&map)?;
    Ok(Loaded {
        map_path,
        scenario,
        problem,
    })
}

fn solve(a: SolveArgs) -> CliResult {
    let loaded = load(a.instance.map.as_deref(), &a.instance.scen)?;
    let config = SolverConfig {
        cost: a.cost,
        timeout: Some(Duration::from_secs(a.timeout_secs)),
        node_limit: a.node_limit,
        horizon: None,
    };
    let report = a.algo.solve(&loaded.problem, &config);
    let instance = a.algo.instance(&loaded.problem);
    let meta = SolutionMeta {
        algorithm: a.algo.name().into(),
        cost_function: a.algo.cost_function(a.cost).name().into(),
        seed: a.seed.or(loaded.scenario.seed),
        map: Some(stem(&loaded.map_path)),
        scenario: Some(stem(&a.instance.scen)),
        outcome: report.outcome.name().into(),
        cost: report.cost(),
        assignment: report.assignment.clone(),
        stats: report.stats.clone(),
    };
    eprintln!(
        "{}: {} cost={} high-level expanded={} low-level expanded={} ({} ms)",
        a.algo,
        report.outcome.name(),
        report.cost().map_or("-".into(), |c| c.to_string()),
        report.stats.high_level_expanded,
        report.stats.low_level_expanded,
        report.stats.elapsed.as_millis()
    );
    if a.validate {
        if let Some(solution) = report.solution() {
            let checked = if a.algo.is_static() {
                instance.clone()
            } else {
                with_assignment(&instance)
            };
            let cert = certify(&checked, solution, a.algo.mode())?;
            if !cert.ok {
                println!("{}", serde_json::to_string_pretty(&cert)?);
                return Err(Failure(EXIT_INVALID, "the solution failed certification".into()));
            }
        }
    }
    let file = SolutionFile::new(meta, &instance.graph, report.solution());
    write_or_print(a.out.as_deref(), &emit_solution(&file))?;
    Ok(match report.outcome {
        Outcome::Solved { .. } => 0,
        Outcome::Timeout => EXIT_TIMEOUT,
        Outcome::Infeasible | Outcome::NoSolution => EXIT_UNSOLVED,
    })
}

fn scenario_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "scen"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn run_bench(a: BenchArgs) -> CliResult {
    fs::create_dir_all(&a.out)?;
    let records = match &a.records {
        Some(path) => bench::read_records(fs::File::open(path)?)?,
        None => {
            if a.jobs == 0 {
                return Err(Failure(EXIT_CONFIG, "--jobs must be at least 1".into()));
            }
            let mut cases = Vec::new();
            for scen in scenario_files(&a.scen)? {
                let loaded = load(a.map.as_deref(), &scen)?;
                cases.push(BenchCase {
                    id: stem(&scen),
                    map: stem(&loaded.map_path),
                    seed: loaded.scenario.seed,
                    problem: loaded.problem,
                });
            }
            let config = BenchConfig {
                algorithms: a.algo.clone(),
                cost: a.cost,
                timeout: Some(Duration::from_secs(a.timeout_secs)),
                node_limit: a.node_limit,
                validate: a.validate,
                jobs: a.jobs,
            };
            let records = bench::run_batch(&cases, &config);
            bench::write_records(&records, fs::File::create(a.out.join("records.csv"))?)?;
            bench::write_timings(&records, fs::File::create(a.out.join("timings.csv"))?)?;
            records
        }
    };
    let summary = bench::summarize(&records);
    fs::write(a.out.join("summary.json"), bench::summary_json(&summary))?;
    for g in &summary.groups {
        for s in &g.algorithms {
            eprintln!(
                "{} n={} {}: solved {}/{} mean expansions {}",
                g.map,
                g.n_tasks,
                s.algorithm,
                s.solved,
                s.cells,
                s.mean_high_level_expanded.map_or("-".into(), |m| format!("{m:.1}"))
            );
        }
    }
    Ok(bench::batch_status(&records) as u8)
}

fn gen_map(a: GenMapArgs) -> CliResult {
    let base = match a.profile.as_str() {
        "small" => WarehouseLayout::SMALL,
        "large" => WarehouseLayout::LARGE,
        "downsized" | "custom" => WarehouseLayout::DOWNSIZED,
        other => return Err(Failure(EXIT_CONFIG, format!("unknown profile `{other}`"))),
    };
    let overridden = [a.height, a.width, a.shelf_rows, a.blocks, a.block_width, a.cross_aisle]
        .iter()
        .any(Option::is_some);
    let profile = match a.profile.as_str() {
        "small" if !overridden => WarehouseProfile::Small,
        "large" if !overridden => WarehouseProfile::Large,
        _ => WarehouseProfile::Custom(WarehouseLayout {
            height: a.height.unwrap_or(base.height),
            width: a.width.unwrap_or(base.width),
            shelf_rows: a.shelf_rows.unwrap_or(base.shelf_rows),
            blocks: a.blocks.unwrap_or(base.blocks),
            block_width: a.block_width.unwrap_or(base.block_width),
            cross_aisle: a.cross_aisle.unwrap_or(base.cross_aisle),
        }),
    };
    let map = generate_warehouse(profile, a.seed)?;
    write_or_print(a.out.as_deref(), &emit_map(&map))?;
    Ok(0)
}

fn gen_scen(a: GenScenArgs) -> CliResult {
    let map = parse_map(&read(&a.map)?)?;
    let map_name = Some(map_reference(&a.map, a.out.as_deref())?);
    let mut texts = Vec::new();
    for seed in a.seed..a.seed + a.count {
        let mut scen = generate_scenario(&map, a.agents, map.movables.len(), seed, a.mover_start_policy)?;
        scen.map = map_name.clone();
        texts.push((seed, emit_scenario(&scen)));
    }
    match (&a.out, texts.len()) {
        (Some(dir), n) if n > 1 || dir.is_dir() => {
            fs::create_dir_all(dir)?;
            for (seed, text) in &texts {
                let name = format!("{}-{}-{seed}.scen", stem(&a.map), a.agents);
                fs::write(dir.join(name), text)?;
            }
        }
        (out, _) => {
            let joined: String = texts.into_iter().map(|(_, t)| t).collect();
            write_or_print(out.as_deref(), &joined)?;
        }
    }
    Ok(0)
}

/// How a scenario written under `out` should name `map`: a bare file name
/// when both live in the same directory, an absolute path otherwise.
/// How a scenario written next to `out` should name `map`: relative to the
/// scenario's directory when possible, so generated trees can be moved.
fn map_reference(map: &Path, out: Option<&Path>) -> Result<String, Failure> {
    let map = fs::canonicalize(map)?;
    let dir = match out {
        Some(o) if o.is_dir() || !o.exists() && o.extension().is_none() => o.to_path_buf(),
        Some(o) => o.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
        None => PathBuf::from("."),
    };
    let dir = if dir.as_os_str().is_empty() {
        PathBuf::from(".")
    } else {
        dir
    };
    // the directory may not exist yet; resolve it against the working directory
    let dir = if dir.is_absolute() {
        dir
    } else {
        std::env::current_dir()?.join(dir)
    };
    let dir = fs::canonicalize(&dir).unwrap_or(dir);
    let rel = pathdiff::diff_paths(&map, &dir).unwrap_or(map);
    Ok(rel.display().to_string())
}

fn run_certify(a: CertifyArgs) -> CliResult {
    let loaded = load(a.instance.map.as_deref(), &a.instance.scen)?;
    let file = parse_solution(&read(&a.solution)?)?;
    let mode = match a.mode.as_deref() {
        Some("mapf") => Mode::Mapf,
        Some("tmapf") => Mode::Tmapf,
        Some(other) => return Err(Failure(EXIT_CONFIG, format!("unknown mode `{other}`"))),
        None => match file.meta.algorithm.parse::<Algorithm>() {
            Ok(algo) => algo.mode(),
            Err(_) if file.meta.algorithm == "oracle-static" => Mode::Mapf,
            Err(_) => Mode::Tmapf,
        },
    };
    let problem = match mode {
        Mode::Mapf => loaded.problem.static_version(),
        Mode::Tmapf if file.meta.assignment.is_empty() => loaded.problem.clone(),
        Mode::Tmapf => loaded.problem.clone().with_assignment(file.meta.assignment.clone())?,
    };
    let solution = file.to_solution(&problem.graph)?;
    let cert = certify(&problem, &solution, mode)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    Ok(if cert.ok { 0 } else { EXIT_INVALID })
}

fn run_oracle(a: OracleArgs) -> CliResult {
    let loaded = load(a.instance.map.as_deref(), &a.instance.scen)?;
    let (problem, mode, cost) = if a.r#static {
        (loaded.problem.static_version(), Mode::Mapf, CostFunction::SumOfCosts)
    } else {
        (with_assignment(&loaded.problem), Mode::Tmapf, a.cost)
    };
    let outcome = brute_force_optimal(&problem, mode, cost, a.state_cap)?;
    let (name, code) = match &outcome {
        OracleOutcome::Optimal { .. } => ("optimal", 0),
        OracleOutcome::Infeasible => ("infeasible", EXIT_UNSOLVED),
        OracleOutcome::CapExceeded => ("cap-exceeded", EXIT_TIMEOUT),
    };
    let report = serde_json::json!({ "outcome": name, "cost_function": cost.name(), "cost": outcome.cost() });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let (Some(out), OracleOutcome::Optimal { cost: c, witness }) = (&a.out, &outcome) {
        let meta = SolutionMeta {
            algorithm: if a.r#static { "oracle-static" } else { "oracle" }.into(),
            cost_function: cost.name().into(),
            seed: loaded.scenario.seed,
            map: Some(stem(&loaded.map_path)),
            scenario: Some(stem(&a.instance.scen)),
            outcome: "solved".into(),
            cost: Some(*c),
            assignment: problem.assignment.clone().unwrap_or_default(),
            stats: Default::default(),
        };
        fs::write(
            out,
            emit_solution(&SolutionFile::new(meta, &problem.graph, Some(witness))),
        )?;
    }
    Ok(code)
}
