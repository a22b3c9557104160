use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::rc::Rc;

use super::conflict::{detect_conflicts, Conflict, ConflictKind};
use super::{with_assignment, Budget, Entities, Outcome, SearchStats, SolveReport, SolverConfig, SolverError};
use crate::lowlevel::{
    Aspect, Constraint, ConstraintTable, EntityId, EntityPath, Locus, LowLevelError, Polarity, SearchContext,
};
use crate::model::{CostFunction, Problem};

/// Constraints are shared along a branch as a linked list.
struct Link {
    constraint: Constraint,
    parent: Option<Rc<Link>>,
}

fn collect(mut link: Option<&Rc<Link>>) -> Vec<Constraint> {
    let mut out = Vec::new();
    while let Some(l) = link {
        out.push(l.constraint);
        link = l.parent.as_ref();
    }
    out.reverse();
    out
}

struct CtNode {
    constraints: Option<Rc<Link>>,
    /// Per mover: earliest possible pickup under this node's constraints.
    etas: Vec<Option<usize>>,
    paths: Vec<Rc<EntityPath>>,
    cost: u64,
    first_conflict: Option<Conflict>,
}

/// Conflict-based search for plain MAPF, optimal for the sum of costs.
pub fn cbs_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    if problem.has_terraforming() {
        return Err(SolverError::RequiresMapf);
    }
    Ok(ct_search(problem, CostFunction::SumOfCosts, config))
}

/// Conflict-based search over task agents and mover entities. Optimal for
/// `config.cost` under the problem's (or the greedy) mover assignment.
pub fn tfcbs_solve(problem: &Problem, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    let problem = with_assignment(problem);
    Ok(ct_search(&problem, config.cost, config))
}

fn ct_search(problem: &Problem, cost: CostFunction, config: &SolverConfig) -> SolveReport {
    let budget = Budget::new(config);
    let ents = Entities::new(problem, cost);
    let ctx = ents.context(config, &budget);
    let mut stats = SearchStats::default();
    let outcome = run(&ents, &ctx, &budget, &mut stats);
    stats.low_level_expanded = ctx.expansions();
    stats.elapsed = budget.elapsed();
    SolveReport {
        outcome,
        stats,
        assignment: problem.assignment.clone().unwrap_or_default(),
    }
}

fn run(ents: &Entities<'_>, ctx: &SearchContext<'_>, budget: &Budget, stats: &mut SearchStats) -> Outcome {
    let root = match root(ents, ctx) {
        Ok(Some(n)) => n,
        Ok(None) => return Outcome::Infeasible,
        Err(_) => return Outcome::Timeout,
    };
    let mut nodes: Vec<Option<CtNode>> = Vec::new();
    let mut open = BinaryHeap::new();
    let push = |node: CtNode, count: usize, nodes: &mut Vec<Option<CtNode>>, open: &mut BinaryHeap<_>| {
        open.push(Reverse((node.cost, count, nodes.len())));
        nodes.push(Some(node));
    };
    let mut root = root;
    let (n, first) = count_conflicts(ents, &root);
    root.first_conflict = first;
    push(root, n, &mut nodes, &mut open);
    stats.high_level_generated = 1;

    loop {
        let Some(Reverse((_, _, id))) = open.pop() else {
            return Outcome::Infeasible;
        };
        if budget.exhausted(stats.high_level_expanded) {
            return Outcome::Timeout;
        }
        let node = nodes[id].take().expect("each node is popped once");
        let Some(conflict) = node.first_conflict else {
            let paths: Vec<EntityPath> = node.paths.iter().map(|p| (**p).clone()).collect();
            let solution = ents.assemble(&paths);
            debug_assert_eq!(
                crate::model::solution_cost(ents.problem, &solution, ents.cost).ok(),
                Some(node.cost)
            );
            return Outcome::Solved {
                solution,
                cost: node.cost,
            };
        };
        stats.high_level_expanded += 1;
        let (subject, aspect, locus) = split(&conflict);
        for polarity in [Polarity::Positive, Polarity::Negative] {
            let c = Constraint {
                polarity,
                subject,
                aspect,
                locus,
            };
            match child(ents, ctx, &node, c) {
                Ok(Some(mut ch)) => {
                    let (n, first) = count_conflicts(ents, &ch);
                    ch.first_conflict = first;
                    stats.high_level_generated += 1;
                    push(ch, n, &mut nodes, &mut open);
                }
                Ok(None) => {}
                Err(_) => return Outcome::Timeout,
            }
        }
    }
}

fn count_conflicts(ents: &Entities<'_>, node: &CtNode) -> (usize, Option<Conflict>) {
    let all = detect_conflicts(ents.n_tasks, &node.paths);
    (all.len(), all.first().copied())
}

/// Which entity, footprint and locus to branch on. Task agents are split
/// first; between two movers the lower-index one is split on the footprint
/// taking part in the collision.
fn split(c: &Conflict) -> (EntityId, Aspect, Locus) {
    let (entity, aspect) = match c.first {
        (EntityId::Task(i), _) => (EntityId::Task(i), Aspect::Body),
        other => other,
    };
    let locus = match c.kind {
        ConflictKind::Vertex { vertex } => Locus::Vertex { vertex, time: c.time },
        ConflictKind::Edge { from, to } => Locus::Edge { from, to, time: c.time },
    };
    (entity, aspect, locus)
}

type Step<T> = Result<T, LowLevelError>;

/// Maps a low-level failure to "prune this node", keeping timeouts fatal.
fn prune<T>(r: Step<T>) -> Step<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(LowLevelError::Timeout) => Err(LowLevelError::Timeout),
        Err(_) => Ok(None),
    }
}

fn root(ents: &Entities<'_>, ctx: &SearchContext<'_>) -> Step<Option<CtNode>> {
    let mut etas = Vec::with_capacity(ents.homes.len());
    for j in 0..ents.homes.len() {
        let table = ConstraintTable::new(EntityId::Mover(j));
        etas.push(ents.eta(ctx, j, &table)?);
    }
    let timed = ents.timed(&etas);
    let mut paths = Vec::with_capacity(ents.count());
    for slot in 0..ents.count() {
        let table = ConstraintTable::build(ents.id(slot), &[], &timed)?;
        match prune(ents.plan(ctx, slot, &table))? {
            Some(p) => paths.push(Rc::new(p)),
            None => return Ok(None),
        }
    }
    let cost = paths.iter().map(|p| p.cost(ents.cost)).sum();
    Ok(Some(CtNode {
        constraints: None,
        etas,
        paths,
        cost,
        first_conflict: None,
    }))
}

fn child(ents: &Entities<'_>, ctx: &SearchContext<'_>, parent: &CtNode, c: Constraint) -> Step<Option<CtNode>> {
    let link = Rc::new(Link {
        constraint: c,
        parent: parent.constraints.clone(),
    });
    let constraints = collect(Some(&link));
    let affected = |id: EntityId| c.subject == id || !c.implied_for(id).is_empty();

    let mut etas = parent.etas.clone();
    let mut etas_changed = false;
    for (j, old) in etas.iter_mut().enumerate() {
        let id = EntityId::Mover(j);
        if !affected(id) {
            continue;
        }
        let Some(table) = prune(ConstraintTable::build(id, &constraints, &[]))? else {
            return Ok(None);
        };
        let eta = ents.eta(ctx, j, &table)?;
        if eta != *old {
            *old = eta;
            etas_changed = true;
        }
    }
    let timed = ents.timed(&etas);

    let mut paths = parent.paths.clone();
    for (slot, path) in paths.iter_mut().enumerate() {
        let id = ents.id(slot);
        if !affected(id) && !etas_changed {
            continue;
        }
        let Some(table) = prune(ConstraintTable::build(id, &constraints, &timed))? else {
            return Ok(None);
        };
        if table.permits(path) {
            continue;
        }
        match prune(ents.plan(ctx, slot, &table))? {
            Some(p) => *path = Rc::new(p),
            None => return Ok(None),
        }
    }
    let cost = paths.iter().map(|p| p.cost(ents.cost)).sum();
    Ok(Some(CtNode {
        constraints: Some(link),
        etas,
        paths,
        cost,
        first_conflict: None,
    }))
}
