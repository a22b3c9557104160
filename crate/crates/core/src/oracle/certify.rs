use serde::{Deserialize, Serialize};

use crate::model::{validate_state, validate_transition, Mode, ModelError, Problem, Rule, Solution, State};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedViolation {
    pub time: usize,
    pub rule: String,
    pub detail: String,
}

/// Outcome of [`certify`]: `ok` holds exactly when `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub ok: bool,
    pub violations: Vec<CertifiedViolation>,
}

impl Certificate {
    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule.id())
    }

    pub fn rules(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.rule.as_str()).collect()
    }
}

/// Checks a full solution: every state and transition rule, plus the
/// boundary conditions (starts at `t = 0`, task agents on their goals and
/// movable obstacles back on their start vertices at the end).
///
/// In [`Mode::Mapf`] the states list task agents only.
pub fn certify(problem: &Problem, solution: &Solution, mode: Mode) -> Result<Certificate, ModelError> {
    let Some(first) = solution.states.first() else {
        return Err(ModelError::Malformed("solution has no states".into()));
    };
    let last = solution.states.last().expect("non-empty");
    let mut violations = Vec::new();
    let mut push = |time: usize, rule: Rule, detail: String| {
        violations.push(CertifiedViolation {
            time,
            rule: rule.id().to_string(),
            detail,
        });
    };
    let g = &problem.graph;

    let expected = match mode {
        Mode::Tmapf => problem.start_state(),
        Mode::Mapf => State {
            tasks: problem.tasks.iter().map(|t| t.start).collect(),
            movers: Vec::new(),
            obstacles: Vec::new(),
        },
    };
    // shape problems surface as Malformed from the state check below
    validate_state(problem, first, mode)?;
    for (what, got, want) in [
        ("task", &first.tasks, &expected.tasks),
        ("mover", &first.movers, &expected.movers),
        ("obstacle", &first.obstacles, &expected.obstacles),
    ] {
        for (i, (a, b)) in got.iter().zip(want).enumerate() {
            if a != b {
                push(
                    0,
                    Rule::Start,
                    format!("{what} {i} starts at {} not {}", g.cell(*a), g.cell(*b)),
                );
            }
        }
    }

    for (t, s) in solution.states.iter().enumerate() {
        for v in validate_state(problem, s, mode)?.violations {
            push(t, v.rule, v.detail);
        }
        if t > 0 {
            let prev = &solution.states[t - 1];
            for v in validate_transition(problem, prev, s, mode)?.violations {
                push(t, v.rule, v.detail);
            }
        }
    }

    let end = solution.states.len() - 1;
    for (i, (task, &v)) in problem.tasks.iter().zip(&last.tasks).enumerate() {
        if v != task.goal {
            push(
                end,
                Rule::Goal,
                format!("task {i} ends at {} not {}", g.cell(v), g.cell(task.goal)),
            );
        }
    }
    if mode == Mode::Tmapf {
        for (k, (&home, &v)) in problem.movables.iter().zip(&last.obstacles).enumerate() {
            if v != home {
                push(
                    end,
                    Rule::ObstacleRestore,
                    format!("obstacle {k} ends at {} not {}", g.cell(v), g.cell(home)),
                );
            }
        }
    }
    Ok(Certificate {
        ok: violations.is_empty(),
        violations,
    })
}
