//! Prescriptions, orientations modulo 3, and the orientation/flow
//! correspondence.
//!
//! Residues are kept in `{-1, 0, 1}`. The residue of a vertex under an
//! orientation is `indeg - outdeg` reduced into that range.

mod greedy;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::surface::{EdgeId, EmbeddedGraph, VertexId};

pub use greedy::{greedy_direct_and_delete, GreedyFailure};
pub use oracle::{count_valid, oracle_solve, oracle_solve_with_stats, OracleStats};

/// Default bound on undirected edges handed to the oracle.
pub const ORACLE_LIMIT: usize = 28;
/// Bound on edges for `count_valid`.
pub const COUNT_LIMIT: usize = 24;

/// Reduces an integer into `{-1, 0, 1}` modulo 3.
pub fn z3(x: i64) -> i8 {
    match x.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("edge {0} is undirected")]
    Undirected(EdgeId),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("vertex {tail} is not an endpoint of edge {edge}")]
    BadTail { edge: EdgeId, tail: VertexId },
    #[error("{undirected} undirected edges exceeds the limit of {limit}")]
    TooLarge { undirected: usize, limit: usize },
    #[error("prescription value {0} is not in {{-1,0,1}}")]
    BadResidue(i8),
    #[error("{0}")]
    Invalid(String),
}

/// Vertex prescription. Missing vertices read as 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Prescription(pub BTreeMap<VertexId, i8>);

impl Prescription {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VertexId) -> i8 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: VertexId, r: i8) -> Result<(), OrientError> {
        if !(-1..=1).contains(&r) {
            return Err(OrientError::BadResidue(r));
        }
        self.0.insert(v, r);
        Ok(())
    }

    pub fn total(&self) -> i64 {
        self.0.values().map(|&r| r as i64).sum()
    }

    /// Sum is 0 mod 3.
    pub fn is_valid(&self) -> bool {
        self.total().rem_euclid(3) == 0
    }

    /// Restriction to the vertices of `g`, with every vertex listed.
    pub fn on(&self, g: &EmbeddedGraph) -> Prescription {
        Prescription(g.vertices().map(|v| (v, self.get(v))).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcDir {
    In,
    Out,
}

impl fmt::Display for ArcDir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArcDir::In => "in",
            ArcDir::Out => "out",
        })
    }
}

/// A vertex whose incident edges carry fixed directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedVertexSpec {
    pub vertex: VertexId,
    pub arcs: BTreeMap<EdgeId, ArcDir>,
}

impl DirectedVertexSpec {
    /// Residue the fixed arcs give the vertex.
    pub fn residue(&self) -> i8 {
        let x: i64 = self
            .arcs
            .values()
            .map(|a| match a {
                ArcDir::In => 1,
                ArcDir::Out => -1,
            })
            .sum();
        z3(x)
    }

    /// Tail implied by the arc on edge `e` of `g`.
    pub fn tail(&self, g: &EmbeddedGraph, e: EdgeId) -> Option<VertexId> {
        let dir = *self.arcs.get(&e)?;
        let edge = g.edge(e).ok()?;
        Some(match dir {
            ArcDir::Out => self.vertex,
            ArcDir::In => edge.other(self.vertex),
        })
    }
}

/// A possibly partial orientation, stored as the tail of each directed edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Orientation {
    pub tails: BTreeMap<EdgeId, VertexId>,
    pub fixed: BTreeSet<EdgeId>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    /// The arcs of the directed vertex, frozen.
    pub fn from_directed(g: &EmbeddedGraph) -> Self {
        let mut o = Orientation::new();
        if let Some(spec) = g.directed() {
            for &e in spec.arcs.keys() {
                if let Some(t) = spec.tail(g, e) {
                    o.tails.insert(e, t);
                    o.fixed.insert(e);
                }
            }
        }
        o
    }

    pub fn tail(&self, e: EdgeId) -> Option<VertexId> {
        self.tails.get(&e).copied()
    }

    pub fn direct(&mut self, e: EdgeId, tail: VertexId) {
        self.tails.insert(e, tail);
    }

    pub fn is_total(&self, g: &EmbeddedGraph) -> bool {
        g.edge_ids().all(|e| self.tails.contains_key(&e))
    }

    pub fn undirected(&self, g: &EmbeddedGraph) -> Vec<EdgeId> {
        g.edge_ids().filter(|e| !self.tails.contains_key(e)).collect()
    }

    /// Reverses edge `e`. Loops are left alone.
    pub fn reverse(&mut self, g: &EmbeddedGraph, e: EdgeId) -> Result<(), OrientError> {
        let edge = g.edge(e).map_err(|_| OrientError::UnknownEdge(e))?;
        let t = self.tail(e).ok_or(OrientError::Undirected(e))?;
        self.tails.insert(e, edge.other(t));
        Ok(())
    }

    fn check_tails(&self, g: &EmbeddedGraph) -> Result<(), OrientError> {
        for (&e, &t) in &self.tails {
            let edge = g.edge(e).map_err(|_| OrientError::UnknownEdge(e))?;
            if !edge.touches(t) {
                return Err(OrientError::BadTail { edge: e, tail: t });
            }
        }
        Ok(())
    }
}

/// `(indeg - outdeg) mod 3` at `v`. Loops contribute nothing.
pub fn residue(g: &EmbeddedGraph, o: &Orientation, v: VertexId) -> Result<i8, OrientError> {
    let mut x = 0i64;
    for e in g.incident_edges(v) {
        let edge = g.edge(e).map_err(|_| OrientError::UnknownEdge(e))?;
        let t = o.tail(e).ok_or(OrientError::Undirected(e))?;
        if edge.is_loop() {
            continue;
        }
        x += if t == v { -1 } else { 1 };
    }
    Ok(z3(x))
}

/// Whether `o` is total, meets `p` at every vertex, and extends the directed
/// vertex of `g` if there is one.
pub fn is_valid_orientation(
    g: &EmbeddedGraph,
    p: &Prescription,
    o: &Orientation,
) -> Result<bool, OrientError> {
    if let Some(e) = o.undirected(g).first() {
        return Err(OrientError::Undirected(*e));
    }
    o.check_tails(g)?;
    if let Some(spec) = g.directed() {
        for &e in spec.arcs.keys() {
            if spec.tail(g, e) != o.tail(e) {
                return Ok(false);
            }
        }
    }
    for v in g.vertices() {
        if residue(g, o, v)? != p.get(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Z3 flow values relative to `reference`: 1 where `o` agrees, 2 where it is
/// reversed.
pub fn orientation_to_flow(
    g: &EmbeddedGraph,
    o: &Orientation,
    reference: &Orientation,
) -> Result<BTreeMap<EdgeId, u8>, OrientError> {
    let mut out = BTreeMap::new();
    for e in g.edge_ids() {
        let t = o.tail(e).ok_or(OrientError::Undirected(e))?;
        let r = reference.tail(e).ok_or(OrientError::Undirected(e))?;
        out.insert(e, if t == r { 1 } else { 2 });
    }
    Ok(out)
}

/// Net Z3 inflow at `v` of a flow given against `reference`.
pub fn flow_excess(
    g: &EmbeddedGraph,
    reference: &Orientation,
    flow: &BTreeMap<EdgeId, u8>,
    v: VertexId,
) -> Result<i8, OrientError> {
    let mut x = 0i64;
    for e in g.incident_edges(v) {
        let edge = g.edge(e).map_err(|_| OrientError::UnknownEdge(e))?;
        if edge.is_loop() {
            continue;
        }
        let t = reference.tail(e).ok_or(OrientError::Undirected(e))?;
        let f = *flow.get(&e).ok_or(OrientError::Undirected(e))? as i64;
        x += if t == v { -f } else { f };
    }
    Ok(z3(x))
}

/// Result of moving a solution of `G / side` back to `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    /// Directions on every edge not inside `side`.
    pub partial: Orientation,
    /// Directions of the cut edges as seen from the vertex the complement of
    /// `side` contracts to.
    pub cut_arcs: BTreeMap<EdgeId, ArcDir>,
}

/// Transfers an orientation of the graph with `side` contracted to one vertex
/// back onto `g`. Edges inside `side` stay undirected.
pub fn transfer_orientation(
    g: &EmbeddedGraph,
    side: &BTreeSet<VertexId>,
    solved: &Orientation,
) -> Result<Transfer, OrientError> {
    let mut partial = Orientation::new();
    let mut cut_arcs = BTreeMap::new();
    for (e, edge) in g.edges() {
        let a = side.contains(&edge.ends[0]);
        let b = side.contains(&edge.ends[1]);
        if a && b {
            continue;
        }
        let t = solved.tail(e).ok_or(OrientError::Undirected(e))?;
        let tail = if a || b {
            let (inner, outer) = if a {
                (edge.ends[0], edge.ends[1])
            } else {
                (edge.ends[1], edge.ends[0])
            };
            let tail = if t == outer { outer } else { inner };
            cut_arcs.insert(e, if tail == outer { ArcDir::Out } else { ArcDir::In });
            tail
        } else {
            if !edge.touches(t) {
                return Err(OrientError::BadTail { edge: e, tail: t });
            }
            t
        };
        partial.direct(e, tail);
        if solved.fixed.contains(&e) {
            partial.fixed.insert(e);
        }
    }
    Ok(Transfer { partial, cut_arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Sign;

    pub(crate) fn triangle() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), Sign::Pos);
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), Sign::Pos);
        g.add_edge(EdgeId(2), VertexId(2), VertexId(0), Sign::Pos);
        g
    }

    fn cyclic() -> Orientation {
        let mut o = Orientation::new();
        for i in 0..3 {
            o.direct(EdgeId(i), VertexId(i));
        }
        o
    }

    #[test]
    fn z3_range() {
        assert_eq!(z3(-4), -1);
        assert_eq!(z3(2), -1);
        assert_eq!(z3(-2), 1);
        assert_eq!(z3(6), 0);
    }

    #[test]
    fn isolated_vertex_has_zero_residue() {
        let mut g = EmbeddedGraph::new();
        g.add_vertex(VertexId(3));
        assert_eq!(residue(&g, &Orientation::new(), VertexId(3)), Ok(0));
    }

    #[test]
    fn all_out_of_degree_four() {
        let mut g = EmbeddedGraph::new();
        let mut o = Orientation::new();
        for i in 1..=4 {
            g.add_edge(EdgeId(i), VertexId(0), VertexId(i), Sign::Pos);
            o.direct(EdgeId(i), VertexId(0));
        }
        assert_eq!(residue(&g, &o, VertexId(0)), Ok(-1));
    }

    #[test]
    fn cyclic_triangle_is_valid_for_zero() {
        let g = triangle();
        let p = Prescription::zero();
        assert_eq!(is_valid_orientation(&g, &p, &cyclic()), Ok(true));
        let mut o = cyclic();
        o.reverse(&g, EdgeId(0)).unwrap();
        assert_eq!(is_valid_orientation(&g, &p, &o), Ok(false));
    }

    #[test]
    fn partial_orientation_is_an_error() {
        let g = triangle();
        let mut o = cyclic();
        o.tails.remove(&EdgeId(1));
        assert_eq!(
            is_valid_orientation(&g, &Prescription::zero(), &o),
            Err(OrientError::Undirected(EdgeId(1)))
        );
    }

    #[test]
    fn flow_against_itself_is_all_ones() {
        let g = triangle();
        let o = cyclic();
        let f = orientation_to_flow(&g, &o, &o).unwrap();
        assert!(f.values().all(|&x| x == 1));
        let mut r = o.clone();
        r.reverse(&g, EdgeId(2)).unwrap();
        let f = orientation_to_flow(&g, &o, &r).unwrap();
        assert_eq!(f[&EdgeId(2)], 2);
        assert_eq!(f.values().filter(|&&x| x == 1).count(), 2);
    }

    #[test]
    fn transfer_of_single_vertex_is_identity() {
        let g = triangle();
        let o = cyclic();
        let t = transfer_orientation(&g, &BTreeSet::from([VertexId(1)]), &o).unwrap();
        assert_eq!(t.partial.tails, o.tails);
        assert_eq!(t.cut_arcs.len(), 2);
        // Edge 0 runs 0 -> 1, so from the far side it leaves.
        assert_eq!(t.cut_arcs[&EdgeId(0)], ArcDir::Out);
        assert_eq!(t.cut_arcs[&EdgeId(1)], ArcDir::In);
    }

    #[test]
    fn directed_spec_residue() {
        let spec = DirectedVertexSpec {
            vertex: VertexId(0),
            arcs: (0..4).map(|i| (EdgeId(i), ArcDir::Out)).collect(),
        };
        assert_eq!(spec.residue(), -1);
    }
}
