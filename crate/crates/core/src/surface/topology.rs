use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeId, EmbeddedGraph, GraphError, Sign, VertexId};

impl EmbeddedGraph {
    /// Product of edge signs around a cycle. `+1` iff the cycle is
    /// contractible (bounds a disk) in the projective plane.
    pub fn cycle_sign(&self, cycle: &[EdgeId]) -> Result<Sign, GraphError> {
        if cycle.is_empty() {
            return Err(GraphError::NotACycle);
        }
        let ids: BTreeSet<EdgeId> = cycle.iter().copied().collect();
        if ids.len() != cycle.len() {
            return Err(GraphError::NotACycle);
        }
        let mut degree: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut sign = Sign::Pos;
        let mut sub = EmbeddedGraph::new();
        for &id in cycle {
            let e = *self.edge(id)?;
            *degree.entry(e.ends[0]).or_default() += 1;
            *degree.entry(e.ends[1]).or_default() += 1;
            sign = sign.mul(e.sign);
            sub.add_edge(id, e.ends[0], e.ends[1], e.sign);
        }
        if degree.values().any(|&d| d != 2) || !sub.is_connected() {
            return Err(GraphError::NotACycle);
        }
        Ok(sign)
    }

    /// True when every cycle of the subgraph induced by `side` is
    /// two-sided, i.e. the subgraph can be switched to all-positive signs.
    /// `side` may be disconnected.
    pub fn is_balanced(&self, side: &BTreeSet<VertexId>) -> bool {
        self.balancing_switches(side).is_some()
    }

    /// Whether the connected subgraph induced by `side` lies in an open disk.
    pub fn side_in_open_disk(&self, side: &BTreeSet<VertexId>) -> Result<bool, GraphError> {
        for v in side {
            if !self.has_vertex(*v) {
                return Err(GraphError::UnknownVertex(*v));
            }
        }
        if self.components(Some(side)).len() != 1 {
            return Err(GraphError::SideNotConnected);
        }
        Ok(self.is_balanced(side))
    }

    /// A chord of the specified face's boundary cycle is contractible when it
    /// closes a two-sided cycle with either boundary arc.
    pub fn is_contractible_chord(&self, e: EdgeId) -> Result<bool, GraphError> {
        let (verts, bedges) = self.boundary_cycle()?;
        let edge = *self.edge(e)?;
        if bedges.contains(&e) || edge.is_loop() {
            return Err(GraphError::NotAChord(e));
        }
        let (Some(i), Some(j)) = (
            verts.iter().position(|&v| v == edge.ends[0]),
            verts.iter().position(|&v| v == edge.ends[1]),
        ) else {
            return Err(GraphError::NotAChord(e));
        };
        let (lo, hi) = (i.min(j), i.max(j));
        let arc = bedges[lo..hi].iter().fold(edge.sign, |s, id| s.mul(self.edges[id].sign));
        Ok(arc == Sign::Pos)
    }

    /// Chords of the specified face's boundary cycle.
    pub fn chords(&self) -> Result<Vec<EdgeId>, GraphError> {
        let (verts, bedges) = self.boundary_cycle()?;
        let on: BTreeSet<VertexId> = verts.into_iter().collect();
        Ok(self
            .edges()
            .filter(|(id, e)| {
                !e.is_loop()
                    && !bedges.contains(id)
                    && on.contains(&e.ends[0])
                    && on.contains(&e.ends[1])
            })
            .map(|(id, _)| id)
            .collect())
    }
}
