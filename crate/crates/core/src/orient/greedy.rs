//! Lift, then direct-and-delete along a vertex schedule.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{is_valid_orientation, z3, OrientError, Orientation, Prescription};
use crate::surface::{EdgeId, EmbeddedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyFailure {
    #[error("vertex {vertex}: {reason}")]
    Stuck { vertex: VertexId, reason: String },
    #[error("bad lift {e1}/{e2}: {reason}")]
    BadLift {
        e1: EdgeId,
        e2: EdgeId,
        reason: String,
    },
    #[error("edges left undirected after the schedule: {0:?}")]
    Leftover(Vec<EdgeId>),
    #[error("schedule produced an invalid orientation")]
    Invalid,
    #[error(transparent)]
    Orient(#[from] OrientError),
}

/// Working edge: either an original edge or the image of a lift.
#[derive(Clone, Copy)]
struct WorkEdge {
    ends: [VertexId; 2],
    // For lifted edges: (e1 at ends[0], e2 at ends[1], middle vertex).
    from: Option<(EdgeId, EdgeId, VertexId)>,
}

struct Work {
    edges: BTreeMap<EdgeId, WorkEdge>,
    tails: BTreeMap<EdgeId, VertexId>,
    deleted: Vec<VertexId>,
}

impl Work {
    fn undirected_at(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(id, e)| {
                (e.ends[0] == v || e.ends[1] == v)
                    && e.ends[0] != e.ends[1]
                    && !self.tails.contains_key(id)
            })
            .map(|(&id, _)| id)
            .collect()
    }

    fn current(&self, v: VertexId) -> i64 {
        let mut x = 0;
        for (id, e) in &self.edges {
            if e.ends[0] == e.ends[1] || !(e.ends[0] == v || e.ends[1] == v) {
                continue;
            }
            if let Some(&t) = self.tails.get(id) {
                x += if t == v { -1 } else { 1 };
            }
        }
        x
    }

    fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let w = self.edges[&e];
        if w.ends[0] == v {
            w.ends[1]
        } else {
            w.ends[0]
        }
    }

    /// Pushes directions of lifted edges down to the pair they replaced,
    /// newest lift first.
    fn unlift(&mut self, lifted: &BTreeMap<EdgeId, WorkEdge>) {
        for (id, w) in lifted.iter().rev() {
            let (e1, e2, mid) = w.from.unwrap();
            let Some(t) = self.tails.remove(id) else {
                continue;
            };
            // t -> far becomes t -> mid -> far.
            let (first, second) = if t == w.ends[0] { (e1, e2) } else { (e2, e1) };
            self.tails.insert(first, t);
            self.tails.insert(second, mid);
        }
    }
}

/// Applies `lifts` in order, then walks `order`: each vertex gets its
/// remaining undirected edges directed so its residue matches `p` and is
/// deleted. With `k >= 2` free edges the fewest incoming edges are used,
/// taken in id order. The result is validated before it is returned.
pub fn greedy_direct_and_delete(
    g: &EmbeddedGraph,
    p: &Prescription,
    lifts: &[(EdgeId, EdgeId)],
    order: &[VertexId],
) -> Result<Orientation, GreedyFailure> {
    let mut w = Work {
        edges: g
            .edges()
            .map(|(id, e)| {
                (
                    id,
                    WorkEdge {
                        ends: e.ends,
                        from: None,
                    },
                )
            })
            .collect(),
        tails: Orientation::from_directed(g).tails,
        deleted: Vec::new(),
    };
    let mut next = g.next_edge_id().0;
    let mut lifted = BTreeMap::new();
    for &(e1, e2) in lifts {
        let bad = |reason: &str| GreedyFailure::BadLift {
            e1,
            e2,
            reason: reason.into(),
        };
        let (a, b) = match (w.edges.get(&e1), w.edges.get(&e2)) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(bad("edge not present")),
        };
        if w.tails.contains_key(&e1) || w.tails.contains_key(&e2) {
            return Err(bad("edge already directed"));
        }
        let mid = a
            .ends
            .iter()
            .copied()
            .find(|v| b.ends.contains(v))
            .ok_or_else(|| bad("edges are not adjacent"))?;
        let u = w.other(e1, mid);
        let far = w.other(e2, mid);
        if u == far {
            return Err(bad("lift would create a loop"));
        }
        w.edges.remove(&e1);
        w.edges.remove(&e2);
        w.edges.insert(
            EdgeId(next),
            WorkEdge {
                ends: [u, far],
                from: Some((e1, e2, mid)),
            },
        );
        lifted.insert(EdgeId(next), w.edges[&EdgeId(next)]);
        next += 1;
    }
    for &v in order {
        if w.deleted.contains(&v) {
            return Err(GreedyFailure::Stuck {
                vertex: v,
                reason: "listed twice".into(),
            });
        }
        let free = w.undirected_at(v);
        let k = free.len() as i64;
        let target = p.get(v) as i64;
        let cur = w.current(v);
        let x = (0..=k).find(|x| z3(cur + 2 * x - k) as i64 == target);
        let Some(x) = x else {
            return Err(GreedyFailure::Stuck {
                vertex: v,
                reason: format!("{k} free edges cannot reach residue {target}"),
            });
        };
        for (i, &e) in free.iter().enumerate() {
            let tail = if (i as i64) < x { w.other(e, v) } else { v };
            w.tails.insert(e, tail);
        }
        w.deleted.push(v);
    }
    let left: Vec<EdgeId> = w
        .edges
        .iter()
        .filter(|(id, e)| e.ends[0] != e.ends[1] && !w.tails.contains_key(id))
        .map(|(&id, _)| id)
        .collect();
    if !left.is_empty() {
        return Err(GreedyFailure::Leftover(left));
    }
    w.unlift(&lifted);
    let mut o = Orientation::from_directed(g);
    for (id, e) in g.edges() {
        match w.tails.get(&id) {
            Some(&t) => o.direct(id, t),
            None if e.is_loop() => o.direct(id, e.ends[0]),
            None => return Err(GreedyFailure::Leftover(vec![id])),
        }
    }
    if !is_valid_orientation(g, p, &o)? {
        return Err(GreedyFailure::Invalid);
    }
    Ok(o)
}
