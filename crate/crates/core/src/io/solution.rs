use serde::{Deserialize, Serialize};

use super::IoError;
use crate::grid::{Cell, Graph, Vertex};
use crate::model::{ModelError, Solution, State};
use crate::solver::SearchStats;

const FORMAT: &str = "tmapf-solution";
const VERSION: u32 = 1;

/// Run metadata stored next to the states. Wall-clock time is deliberately
/// absent so that repeated runs produce identical files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMeta {
    pub algorithm: String,
    pub cost_function: String,
    pub seed: Option<u64>,
    pub map: Option<String>,
    pub scenario: Option<String>,
    pub outcome: String,
    pub cost: Option<u64>,
    pub assignment: Vec<usize>,
    pub stats: SearchStats,
}

/// One joint state as `[column, row]` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCells {
    pub tasks: Vec<[u32; 2]>,
    pub movers: Vec<[u32; 2]>,
    pub obstacles: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub version: u32,
    pub meta: SolutionMeta,
    pub states: Vec<StateCells>,
}

impl SolutionFile {
    pub fn new(meta: SolutionMeta, graph: &Graph, solution: Option<&Solution>) -> Self {
        let cells = |vs: &[Vertex]| vs.iter().map(|&v| graph.cell(v)).map(|c| [c.x, c.y]).collect();
        let states = solution
            .map(|s| {
                s.states
                    .iter()
                    .map(|st| StateCells {
                        tasks: cells(&st.tasks),
                        movers: cells(&st.movers),
                        obstacles: cells(&st.obstacles),
                    })
                    .collect()
            })
            .unwrap_or_default();
        SolutionFile {
            format: FORMAT.into(),
            version: VERSION,
            meta,
            states,
        }
    }

    /// The stored states as vertices of `graph`.
    pub fn to_solution(&self, graph: &Graph) -> Result<Solution, IoError> {
        let vertices = |cells: &[[u32; 2]]| {
            cells
                .iter()
                .map(|&[x, y]| {
                    graph
                        .vertex(Cell::new(x, y))
                        .ok_or_else(|| ModelError::Malformed(format!("cell ({x},{y}) outside the map")))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let states = self
            .states
            .iter()
            .map(|s| {
                Ok(State {
                    tasks: vertices(&s.tasks)?,
                    movers: vertices(&s.movers)?,
                    obstacles: vertices(&s.obstacles)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(Solution::new(states))
    }
}

fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Canonical JSON text: the envelope is indented, each state sits on a line
/// of its own.
pub fn emit_solution(file: &SolutionFile) -> String {
    let mut out = String::from("{\n");
    out += &format!("  \"format\": {},\n", compact(&file.format));
    out += &format!("  \"version\": {},\n", file.version);
    out += &format!("  \"meta\": {},\n", compact(&file.meta));
    if file.states.is_empty() {
        out += "  \"states\": []\n}\n";
        return out;
    }
    out += "  \"states\": [\n";
    for (i, s) in file.states.iter().enumerate() {
        let sep = if i + 1 == file.states.len() { "" } else { "," };
        out += &format!("    {}{sep}\n", compact(s));
    }
    out += "  ]\n}\n";
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, IoError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    if file.format != FORMAT || file.version != VERSION {
        return Err(IoError::Model(ModelError::Malformed(format!(
            "expected {FORMAT} version {VERSION}, found {} version {}",
            file.format, file.version
        ))));
    }
    Ok(file)
}
