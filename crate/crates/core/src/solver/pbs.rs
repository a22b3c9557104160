use std::collections::{BTreeSet, VecDeque};
use std::rc::Rc;

use thiserror::Error;

use super::conflict::{detect_conflicts, paths_collide};
use super::{with_assignment, Budget, Entities, Outcome, SearchStats, SolveReport, SolverConfig, SolverError};
use crate::lowlevel::{ConstraintTable, EntityId, EntityPath, LowLevelError, SearchContext};
use crate::model::{CostFunction, Problem};

/// How a replanned entity treats the priority pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PriorityMode {
    /// Avoid only entities with an explicit pair `x ≺ e`; replan only the
    /// newly ranked entity.
    Direct,
    /// Avoid every entity above `e` in the transitive closure and cascade
    /// replans down the topological order.
    Transitive,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("the priority pairs contain a cycle")]
pub struct CycleError;

/// Total order of `0..n` consistent with every `(higher, lower)` pair.
///
/// Entities appearing in some pair are ordered by Kahn's algorithm, always
/// taking the smallest ready index; the rest follow in index order.
pub fn topological_order(pairs: &[(usize, usize)], n: usize) -> Result<Vec<usize>, CycleError> {
    let mut mentioned = vec![false; n];
    let mut indegree = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let unique: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    for &(hi, lo) in &unique {
        if hi == lo {
            return Err(CycleError);
        }
        mentioned[hi] = true;
        mentioned[lo] = true;
        indegree[lo] += 1;
        succ[hi].push(lo);
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&e| mentioned[e] && indegree[e] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(e) = ready.pop_first() {
        out.push(e);
        for &s in &succ[e] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.insert(s);
            }
        }
    }
    if out.len() != mentioned.iter().filter(|&&m| m).count() {
        return Err(CycleError);
    }
    out.extend((0..n).filter(|&e| !mentioned[e]));
    Ok(out)
}

#[derive(Clone)]
struct PtNode {
    /// `(higher, lower)` entity slots.
    pairs: BTreeSet<(usize, usize)>,
    paths: Vec<Rc<EntityPath>>,
    etas: Vec<Option<usize>>,
    cost: u64,
}

impl PtNode {
    fn direct_above(&self, e: usize) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.1 == e).map(|p| p.0).collect()
    }

    fn reach(&self, from: usize, up: bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(hi, lo) in &self.pairs {
                let next = match (up, x) {
                    (true, x) if lo == x => hi,
                    (false, x) if hi == x => lo,
                    _ => continue,
                };
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    fn ancestors(&self, e: usize) -> BTreeSet<usize> {
        self.reach(e, true)
    }

    fn descendants(&self, e: usize) -> BTreeSet<usize> {
        self.reach(e, false)
    }

    fn above(&self, e: usize, mode: PriorityMode) -> Vec<usize> {
        match mode {
            PriorityMode::Direct => self.direct_above(e),
            PriorityMode::Transitive => self.ancestors(e).into_iter().collect(),
        }
    }

    fn ordered(&self, a: usize, b: usize, mode: PriorityMode) -> Option<(usize, usize)> {
        let has = |hi: usize, lo: usize| match mode {
            PriorityMode::Direct => self.pairs.contains(&(hi, lo)),
            PriorityMode::Transitive => self.ancestors(lo).contains(&hi),
        };
        if has(a, b) {
            Some((a, b))
        } else if has(b, a) {
            Some((b, a))
        } else {
            None
        }
    }
}

/// Priority-based search for plain MAPF with transitive priorities.
/// Incomplete and suboptimal.
pub fn pbs_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    if problem.has_terraforming() {
        return Err(SolverError::RequiresMapf);
    }
    let config = SolverConfig {
        cost: CostFunction::SumOfCosts,
        ..config.clone()
    };
    Ok(priority_search(problem, &config, PriorityMode::Transitive))
}

/// Priority-based search over task agents and mover entities with direct
/// priorities and cheaper-child-first expansion.
pub fn tfpbs_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    Ok(priority_search(problem, config, PriorityMode::Direct))
}

/// The priority tree search under either priority semantics.
pub fn priority_search(problem: &Problem, config: &SolverConfig, mode: PriorityMode) -> SolveReport {
    let problem = with_assignment(problem);
    let budget = Budget::new(config);
    let ents = Entities::new(&problem, config.cost);
    let ctx = ents.context(config, &budget);
    let mut stats = SearchStats::default();
    let outcome = run(&ents, &ctx, &budget, mode, &mut stats);
    stats.low_level_expanded = ctx.expansions();
    stats.elapsed = budget.elapsed();
    SolveReport {
        outcome,
        stats,
        assignment: problem.assignment.clone().unwrap_or_default(),
    }
}

type Step<T> = Result<T, LowLevelError>;

fn run(
    ents: &Entities<'_>,
    ctx: &SearchContext<'_>,
    budget: &Budget,
    mode: PriorityMode,
    stats: &mut SearchStats,
) -> Outcome {
    let root = match root(ents, ctx) {
        Ok(Some(n)) => n,
        Ok(None) => return Outcome::Infeasible,
        Err(_) => return Outcome::Timeout,
    };
    stats.high_level_generated = 1;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if budget.exhausted(stats.high_level_expanded) {
            return Outcome::Timeout;
        }
        let conflicts = detect_conflicts(ents.n_tasks, &node.paths);
        let Some(c) = conflicts.first() else {
            let paths: Vec<EntityPath> = node.paths.iter().map(|p| (**p).clone()).collect();
            return Outcome::Solved {
                solution: ents.assemble(&paths),
                cost: node.cost,
            };
        };
        stats.high_level_expanded += 1;
        let a = c.first.0.slot(ents.n_tasks);
        let b = c.second.0.slot(ents.n_tasks);

        if let Some((_, lo)) = node.ordered(a, b, mode) {
            // the lower entity went stale after a higher one was replanned
            match update(ents, ctx, node.clone(), lo, mode) {
                Ok(Some(ch)) => {
                    stats.high_level_generated += 1;
                    stack.push(ch);
                }
                Ok(None) => {}
                Err(_) => return Outcome::Timeout,
            }
            continue;
        }

        let mut children = Vec::with_capacity(2);
        for (hi, lo) in [(a, b), (b, a)] {
            if node.ancestors(hi).contains(&lo) {
                continue;
            }
            let mut ch = node.clone();
            ch.pairs.insert((hi, lo));
            match update(ents, ctx, ch, lo, mode) {
                Ok(Some(ch)) => {
                    stats.high_level_generated += 1;
                    // rank the costlier entity lower on cost ties
                    let key = (
                        ch.cost,
                        node.paths[lo].cost(ents.cost) < node.paths[hi].cost(ents.cost),
                        (hi, lo),
                    );
                    children.push((key, ch));
                }
                Ok(None) => {}
                Err(_) => return Outcome::Timeout,
            }
        }
        children.sort_by_key(|c| std::cmp::Reverse(c.0));
        stack.extend(children.into_iter().map(|(_, ch)| ch));
    }
    Outcome::NoSolution
}

fn root(ents: &Entities<'_>, ctx: &SearchContext<'_>) -> Step<Option<PtNode>> {
    let mut etas = Vec::with_capacity(ents.homes.len());
    for j in 0..ents.homes.len() {
        etas.push(ents.eta(ctx, j, &ConstraintTable::new(EntityId::Mover(j)))?);
    }
    let timed = ents.timed(&etas);
    let mut paths = Vec::with_capacity(ents.count());
    for slot in 0..ents.count() {
        let table = ConstraintTable::build(ents.id(slot), &[], &timed)?;
        match ents.plan(ctx, slot, &table) {
            Ok(p) => paths.push(Rc::new(p)),
            Err(LowLevelError::Timeout) => return Err(LowLevelError::Timeout),
            Err(_) => return Ok(None),
        }
    }
    let cost = paths.iter().map(|p| p.cost(ents.cost)).sum();
    Ok(Some(PtNode {
        pairs: BTreeSet::new(),
        paths,
        etas,
        cost,
    }))
}

/// Replans `e` so that it avoids the entities ranked above it. `None` when
/// it cannot reach its goal past them.
fn replan(
    ents: &Entities<'_>,
    ctx: &SearchContext<'_>,
    node: &mut PtNode,
    e: usize,
    mode: PriorityMode,
) -> Step<Option<()>> {
    let id = ents.id(e);
    let mut table = ConstraintTable::new(id);
    for x in node.above(e, mode) {
        table.avoid_path(ents.id(x), &node.paths[x]);
    }
    if let EntityId::Mover(j) = id {
        node.etas[j] = ents.eta(ctx, j, &table)?;
    }
    for t in ents.timed(&node.etas) {
        table.add_timed(t);
    }
    match ents.plan(ctx, e, &table) {
        Ok(p) => {
            node.paths[e] = Rc::new(p);
            Ok(Some(()))
        }
        Err(LowLevelError::Timeout) => Err(LowLevelError::Timeout),
        Err(_) => Ok(None),
    }
}

fn update(
    ents: &Entities<'_>,
    ctx: &SearchContext<'_>,
    mut node: PtNode,
    lo: usize,
    mode: PriorityMode,
) -> Step<Option<PtNode>> {
    if replan(ents, ctx, &mut node, lo, mode)?.is_none() {
        return Ok(None);
    }
    if mode == PriorityMode::Transitive {
        let pairs: Vec<(usize, usize)> = node.pairs.iter().copied().collect();
        let Ok(order) = topological_order(&pairs, ents.count()) else {
            return Ok(None);
        };
        let below = node.descendants(lo);
        for e in order.into_iter().filter(|e| below.contains(e)) {
            let stale = node
                .ancestors(e)
                .into_iter()
                .any(|x| paths_collide(ents.id(x), &node.paths[x], ents.id(e), &node.paths[e]));
            if stale && replan(ents, ctx, &mut node, e, mode)?.is_none() {
                return Ok(None);
            }
        }
    }
    node.cost = node.paths.iter().map(|p| p.cost(ents.cost)).sum();
    Ok(Some(node))
}
