use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::grid::Vertex;
use crate::lowlevel::{Aspect, EntityId, EntityPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConflictKind {
    /// Both footprints on `vertex` at the conflict time.
    Vertex { vertex: Vertex },
    /// The first entity moves `from -> to` while the second moves `to -> from`.
    Edge { from: Vertex, to: Vertex },
}

/// A collision between two entities. Obstacle footprints are attributed to
/// the mover entity carrying them; `first.0 < second.0` always holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Conflict {
    pub time: usize,
    pub first: (EntityId, Aspect),
    pub second: (EntityId, Aspect),
    pub kind: ConflictKind,
}

/// Whether the two footprints may not share a vertex.
pub fn footprints_clash(a: (EntityId, Aspect), b: (EntityId, Aspect)) -> bool {
    use Aspect::*;
    match (a.0, a.1, b.0, b.1) {
        (EntityId::Task(_), _, _, _) | (_, _, EntityId::Task(_), _) => true,
        // mover bodies may pass under obstacles
        (_, Body, _, Body) | (_, Obstacle, _, Obstacle) => true,
        _ => false,
    }
}

fn footprints(path: &EntityPath, t: usize) -> impl Iterator<Item = (Vertex, Aspect)> {
    std::iter::once((path.body_at(t), Aspect::Body)).chain(path.obstacle_at(t).map(|o| (o, Aspect::Obstacle)))
}

/// All conflicts among `paths`, indexed by entity slot (`tasks ++ movers`).
/// At most one conflict is reported per entity pair and timestep, preferring
/// a body-body vertex collision, then any vertex collision, then a swap.
/// Sorted by time, then entity ids.
pub fn detect_conflicts<P: Borrow<EntityPath>>(n_tasks: usize, paths: &[P]) -> Vec<Conflict> {
    let paths: Vec<&EntityPath> = paths.iter().map(Borrow::borrow).collect();
    let horizon = paths.iter().map(|p| p.len()).max().unwrap_or(0);
    let ids: Vec<EntityId> = (0..paths.len()).map(|s| EntityId::from_slot(s, n_tasks)).collect();
    let mut out = Vec::new();
    let mut occupancy: HashMap<Vertex, Vec<(EntityId, Aspect)>> = HashMap::new();
    let mut moves: HashMap<(Vertex, Vertex), Vec<EntityId>> = HashMap::new();
    for t in 0..horizon {
        occupancy.clear();
        moves.clear();
        let mut found: BTreeMap<(EntityId, EntityId), Conflict> = BTreeMap::new();
        for (slot, path) in paths.iter().enumerate() {
            for (v, aspect) in footprints(path, t) {
                occupancy.entry(v).or_default().push((ids[slot], aspect));
            }
        }
        for (&vertex, here) in &occupancy {
            for (i, &a) in here.iter().enumerate() {
                for &b in &here[i + 1..] {
                    if a.0 == b.0 || !footprints_clash(a, b) {
                        continue;
                    }
                    let (first, second) = if a.0 < b.0 { (a, b) } else { (b, a) };
                    let c = Conflict {
                        time: t,
                        first,
                        second,
                        kind: ConflictKind::Vertex { vertex },
                    };
                    found
                        .entry((first.0, second.0))
                        .and_modify(|old| {
                            if rank(&c) < rank(old) {
                                *old = c;
                            }
                        })
                        .or_insert(c);
                }
            }
        }
        if t > 0 {
            for (slot, path) in paths.iter().enumerate() {
                let (from, to) = (path.body_at(t - 1), path.body_at(t));
                if from != to {
                    moves.entry((from, to)).or_default().push(ids[slot]);
                }
            }
            for (&(from, to), forward) in &moves {
                let Some(backward) = moves.get(&(to, from)) else {
                    continue;
                };
                for (&a, &b) in forward.iter().flat_map(|a| backward.iter().map(move |b| (a, b))) {
                    if a < b && !found.contains_key(&(a, b)) {
                        found.insert(
                            (a, b),
                            Conflict {
                                time: t,
                                first: (a, Aspect::Body),
                                second: (b, Aspect::Body),
                                kind: ConflictKind::Edge { from, to },
                            },
                        );
                    }
                }
            }
        }
        out.extend(found.into_values());
    }
    out
}

/// Preference among vertex conflicts of one pair: body-body first, then by
/// aspects and vertex for determinism.
fn rank(c: &Conflict) -> (bool, Aspect, Aspect, ConflictKind) {
    let body_body = c.first.1 == Aspect::Body && c.second.1 == Aspect::Body;
    (!body_body, c.first.1, c.second.1, c.kind)
}

/// Whether two entities' padded paths collide at any timestep.
pub fn paths_collide(a: EntityId, pa: &EntityPath, b: EntityId, pb: &EntityPath) -> bool {
    let horizon = pa.len().max(pb.len());
    for t in 0..horizon {
        for (va, aa) in footprints(pa, t) {
            for (vb, ab) in footprints(pb, t) {
                if va == vb && footprints_clash((a, aa), (b, ab)) {
                    return true;
                }
            }
        }
        if t > 0 {
            let (fa, ta) = (pa.body_at(t - 1), pa.body_at(t));
            let (fb, tb) = (pb.body_at(t - 1), pb.body_at(t));
            if fa != ta && fa == tb && ta == fb {
                return true;
            }
        }
    }
    false
}
