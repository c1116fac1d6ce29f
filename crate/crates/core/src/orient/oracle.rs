//! Exhaustive completion search.
//!
//! Undirected edges are branched in id order with the lower endpoint tried
//! as tail first. A vertex is pruned on its own state only: with `r`
//! undirected edges left and current residue `c`, it needs `c == p` when
//! `r == 0` and `c != p` when `r == 1`; two or more free edges reach every
//! residue.

use std::collections::BTreeMap;

use super::{OrientError, Orientation, Prescription};
use crate::surface::{EdgeId, EmbeddedGraph, VertexId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub nodes: u64,
    pub undirected: usize,
}

struct Search {
    // (edge, lo, hi) as compact vertex indices.
    free: Vec<(EdgeId, usize, usize)>,
    cur: Vec<i64>,
    rem: Vec<usize>,
    want: Vec<i64>,
    ids: Vec<VertexId>,
    nodes: u64,
}

impl Search {
    fn ok(&self, v: usize) -> bool {
        let c = self.cur[v].rem_euclid(3);
        match self.rem[v] {
            0 => c == self.want[v],
            1 => c != self.want[v],
            _ => true,
        }
    }

    fn push(&mut self, tail: usize, head: usize) {
        self.cur[tail] -= 1;
        self.cur[head] += 1;
        self.rem[tail] -= 1;
        self.rem[head] -= 1;
    }

    fn pop(&mut self, tail: usize, head: usize) {
        self.cur[tail] += 1;
        self.cur[head] -= 1;
        self.rem[tail] += 1;
        self.rem[head] += 1;
    }

    /// Depth-first; `pick` records tail choices (true = lower endpoint).
    /// `visit` returns true to stop.
    fn run(&mut self, i: usize, pick: &mut Vec<bool>, visit: &mut dyn FnMut(&[bool]) -> bool) -> bool {
        self.nodes += 1;
        if i == self.free.len() {
            return visit(pick);
        }
        let (_, a, b) = self.free[i];
        for lower_tail in [true, false] {
            let (t, h) = if lower_tail { (a, b) } else { (b, a) };
            self.push(t, h);
            if self.ok(t) && self.ok(h) {
                pick.push(lower_tail);
                let stop = self.run(i + 1, pick, visit);
                pick.pop();
                if stop {
                    self.pop(t, h);
                    return true;
                }
            }
            self.pop(t, h);
        }
        false
    }
}

enum Setup {
    Ready(Search),
    Infeasible,
}

fn setup(
    g: &EmbeddedGraph,
    p: &Prescription,
    partial: &Orientation,
    limit: usize,
) -> Result<(Setup, Orientation), OrientError> {
    let mut base = Orientation::from_directed(g);
    for (&e, &t) in &partial.tails {
        let edge = g.edge(e).map_err(|_| OrientError::UnknownEdge(e))?;
        if !edge.touches(t) {
            return Err(OrientError::BadTail { edge: e, tail: t });
        }
        if base.fixed.contains(&e) && base.tail(e) != Some(t) {
            return Err(OrientError::Invalid(format!(
                "partial orientation contradicts the directed arc on edge {e}"
            )));
        }
        base.tails.insert(e, t);
    }
    base.fixed.extend(partial.fixed.iter().copied());
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = ids.len();
    let mut cur = vec![0i64; n];
    let mut rem = vec![0usize; n];
    let mut free = Vec::new();
    for (e, edge) in g.edges() {
        if edge.is_loop() {
            if base.tail(e).is_none() {
                base.direct(e, edge.ends[0]);
            }
            continue;
        }
        let (a, b) = (index[&edge.ends[0]], index[&edge.ends[1]]);
        match base.tail(e) {
            Some(t) => {
                let (ti, hi) = if t == edge.ends[0] { (a, b) } else { (b, a) };
                cur[ti] -= 1;
                cur[hi] += 1;
            }
            None => {
                let (lo, hi) = if ids[a] <= ids[b] { (a, b) } else { (b, a) };
                rem[lo] += 1;
                rem[hi] += 1;
                free.push((e, lo, hi));
            }
        }
    }
    if free.len() > limit {
        return Err(OrientError::TooLarge {
            undirected: free.len(),
            limit,
        });
    }
    let want: Vec<i64> = ids.iter().map(|&v| (p.get(v) as i64).rem_euclid(3)).collect();
    let search = Search {
        free,
        cur,
        rem,
        want,
        ids,
        nodes: 0,
    };
    if !p.is_valid() || !(0..n).all(|v| search.ok(v)) {
        return Ok((Setup::Infeasible, base));
    }
    Ok((Setup::Ready(search), base))
}

/// Completes `partial` (and the directed vertex of `g`) to a valid
/// orientation, or proves none exists.
pub fn oracle_solve(
    g: &EmbeddedGraph,
    p: &Prescription,
    partial: &Orientation,
    limit: usize,
) -> Result<Option<Orientation>, OrientError> {
    oracle_solve_with_stats(g, p, partial, limit).map(|(o, _)| o)
}

pub fn oracle_solve_with_stats(
    g: &EmbeddedGraph,
    p: &Prescription,
    partial: &Orientation,
    limit: usize,
) -> Result<(Option<Orientation>, OracleStats), OrientError> {
    let (setup, base) = setup(g, p, partial, limit)?;
    let mut search = match setup {
        Setup::Infeasible => {
            let u = base.undirected(g).len();
            return Ok((None, OracleStats { nodes: 0, undirected: u }));
        }
        Setup::Ready(s) => s,
    };
    let mut found: Option<Vec<bool>> = None;
    let mut pick = Vec::new();
    search.run(0, &mut pick, &mut |sol| {
        found = Some(sol.to_vec());
        true
    });
    let stats = OracleStats {
        nodes: search.nodes,
        undirected: search.free.len(),
    };
    let Some(sol) = found else {
        return Ok((None, stats));
    };
    let mut o = base;
    for (&(e, lo, hi), lower) in search.free.iter().zip(sol) {
        o.direct(e, search.ids[if lower { lo } else { hi }]);
    }
    debug_assert_eq!(super::is_valid_orientation(g, p, &o), Ok(true));
    Ok((Some(o), stats))
}

/// Number of valid total orientations of `g` for `p`, counting both
/// directions of each loop.
pub fn count_valid(g: &EmbeddedGraph, p: &Prescription) -> Result<u64, OrientError> {
    if g.edge_count() > super::COUNT_LIMIT {
        return Err(OrientError::TooLarge {
            undirected: g.edge_count(),
            limit: super::COUNT_LIMIT,
        });
    }
    let loops = g.edges().filter(|(_, e)| e.is_loop()).count() as u32;
    let (setup, _) = setup(g, p, &Orientation::new(), super::COUNT_LIMIT)?;
    let Setup::Ready(mut search) = setup else {
        return Ok(0);
    };
    let mut count = 0u64;
    search.run(0, &mut Vec::new(), &mut |_| {
        count += 1;
        false
    });
    Ok(count << loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orient::{is_valid_orientation, z3};
    use crate::surface::Sign;

    fn triangle() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), Sign::Pos);
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), Sign::Pos);
        g.add_edge(EdgeId(2), VertexId(2), VertexId(0), Sign::Pos);
        g
    }

    // Unpruned: all 2^E assignments checked by the validator.
    fn brute_count(g: &EmbeddedGraph, p: &Prescription) -> u64 {
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        let mut n = 0;
        for mask in 0u32..(1 << ids.len()) {
            let mut o = Orientation::new();
            for (i, &e) in ids.iter().enumerate() {
                let ed = g.edge(e).unwrap();
                o.direct(e, ed.ends[((mask >> i) & 1) as usize]);
            }
            if is_valid_orientation(g, p, &o).unwrap() {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn empty_graph_counts_one() {
        let mut g = EmbeddedGraph::new();
        g.add_vertex(VertexId(0));
        assert_eq!(count_valid(&g, &Prescription::zero()), Ok(1));
    }

    #[test]
    fn triangle_zero_has_two() {
        assert_eq!(count_valid(&triangle(), &Prescription::zero()), Ok(2));
        assert_eq!(brute_count(&triangle(), &Prescription::zero()), 2);
    }

    #[test]
    fn invalid_prescription_has_none() {
        let mut p = Prescription::zero();
        p.set(VertexId(0), 1).unwrap();
        assert_eq!(
            oracle_solve(&triangle(), &p, &Orientation::new(), 28),
            Ok(None)
        );
    }

    #[test]
    fn limit_is_enforced() {
        let r = oracle_solve(&triangle(), &Prescription::zero(), &Orientation::new(), 2);
        assert!(matches!(r, Err(OrientError::TooLarge { .. })));
    }

    #[test]
    fn first_solution_prefers_lower_tails() {
        let o = oracle_solve(&triangle(), &Prescription::zero(), &Orientation::new(), 28)
            .unwrap()
            .unwrap();
        assert_eq!(o.tail(EdgeId(0)), Some(VertexId(0)));
        assert_eq!(o.tail(EdgeId(1)), Some(VertexId(1)));
        assert_eq!(o.tail(EdgeId(2)), Some(VertexId(2)));
    }

    #[test]
    fn k4_counts_match_brute_force() {
        let mut g = EmbeddedGraph::new();
        let mut id = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                g.add_edge(EdgeId(id), VertexId(a), VertexId(b), Sign::Pos);
                id += 1;
            }
        }
        for x in [-1i8, 0, 1] {
            for y in [-1i8, 0, 1] {
                for z in [-1i8, 0, 1] {
                    let mut p = Prescription::zero();
                    p.set(VertexId(0), x).unwrap();
                    p.set(VertexId(1), y).unwrap();
                    p.set(VertexId(2), z).unwrap();
                    p.set(VertexId(3), z3(-(x as i64 + y as i64 + z as i64))).unwrap();
                    assert_eq!(count_valid(&g, &p).unwrap(), brute_count(&g, &p));
                }
            }
        }
    }
}
