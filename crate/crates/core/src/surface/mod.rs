//! Multigraphs embedded in the plane or the projective plane.
//!
//! An embedding is a signed rotation system: every vertex carries a cyclic
//! order of the dart ends incident with it, and every edge carries a sign.
//! A `-1` edge passes through the crosscap, so face tracing flips its local
//! orientation when crossing it. The plane is the balanced case.
//!
//! The graph also records up to two specified-face anchors plus the optional
//! special vertices `t` (degree three) and `d` (directed).

mod faces;
mod ops;
mod topology;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::orient::DirectedVertexSpec;

pub use faces::{Corner, FaceIndex, FaceStep, FaceWalk};
pub use ops::DeleteTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One end of an edge. `end == 0` sits at `ends[0]` of the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: EdgeId, end: u8) -> Self {
        Dart { edge, end }
    }

    pub fn opposite(self) -> Dart {
        Dart {
            edge: self.edge,
            end: self.end ^ 1,
        }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge.0, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn from_i8(x: i8) -> Option<Sign> {
        match x {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => f.write_str("+1"),
            Sign::Neg => f.write_str("-1"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub ends: [VertexId; 2],
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite `v`; for a loop this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: VertexId, reason: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("deleting {0} would disconnect the graph")]
    WouldDisconnect(String),
    #[error("edge list is not a closed cycle")]
    NotACycle,
    #[error("vertex set does not induce a connected subgraph")]
    SideNotConnected,
    #[error("no specified face")]
    NoSpecifiedFace,
    #[error("specified face boundary is not a cycle")]
    BoundaryNotCycle,
    #[error("edge {0} is not a chord of the specified face")]
    NotAChord(EdgeId),
    #[error("chord {0} is contractible")]
    ContractibleChord(EdgeId),
    #[error("edges {0} and {1} do not meet at vertex {2}")]
    NotAdjacent(EdgeId, EdgeId, VertexId),
    #[error("lifting {0} and {1} would create a loop")]
    WouldCreateLoop(EdgeId, EdgeId),
    #[error("vertex {0} appears only once on the specified face")]
    NotDoubled(VertexId),
    #[error("vertex {0} has no crosscap corner pair on the specified face")]
    NoCrosscapCorners(VertexId),
    #[error("subgraph is not balanced; cannot re-sign to the plane")]
    Unbalanced,
    #[error("too many specified faces (max 2)")]
    TooManyFaces,
    #[error("{0}")]
    Invalid(String),
}

/// A multigraph with a signed rotation system.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmbeddedGraph {
    rotation: BTreeMap<VertexId, Vec<Dart>>,
    edges: BTreeMap<EdgeId, Edge>,
    faces: Vec<Dart>,
    special_t: Option<VertexId>,
    directed: Option<DirectedVertexSpec>,
}

impl EmbeddedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an isolated vertex. Rotation is filled in by `add_edge` or
    /// `set_rotation`.
    pub fn add_vertex(&mut self, v: VertexId) {
        self.rotation.entry(v).or_default();
    }

    /// Adds an edge and appends its darts to the end of both rotations.
    pub fn add_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId, sign: Sign) {
        self.add_vertex(u);
        self.add_vertex(v);
        self.edges.insert(id, Edge { ends: [u, v], sign });
        self.rotation.get_mut(&u).unwrap().push(Dart::new(id, 0));
        self.rotation.get_mut(&v).unwrap().push(Dart::new(id, 1));
    }

    /// Adds an edge without touching rotations; used by parsers that set
    /// every rotation explicitly afterwards.
    pub fn insert_edge_raw(&mut self, id: EdgeId, u: VertexId, v: VertexId, sign: Sign) {
        self.add_vertex(u);
        self.add_vertex(v);
        self.edges.insert(id, Edge { ends: [u, v], sign });
    }

    pub fn set_rotation(&mut self, v: VertexId, darts: Vec<Dart>) {
        self.rotation.insert(v, darts);
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(&id, e)| (id, e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge, GraphError> {
        self.edges.get(&e).ok_or(GraphError::UnknownEdge(e))
    }

    pub fn rotation(&self, v: VertexId) -> Result<&[Dart], GraphError> {
        self.rotation
            .get(&v)
            .map(|r| r.as_slice())
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation.get(&v).map_or(0, |r| r.len())
    }

    /// Vertex at which the dart sits.
    pub fn dart_vertex(&self, d: Dart) -> VertexId {
        self.edges[&d.edge].ends[d.end as usize]
    }

    /// Edge ids incident with `v`, in rotation order, loops listed twice.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.rotation
            .get(&v)
            .map(|r| r.iter().map(|d| d.edge).collect())
            .unwrap_or_default()
    }

    /// Neighbours of `v` with multiplicity, in rotation order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.incident_edges(v)
            .into_iter()
            .map(|e| self.edges[&e].other(v))
            .collect()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, e)| {
                (e.ends[0] == u && e.ends[1] == v) || (e.ends[0] == v && e.ends[1] == u)
            })
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.rotation.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub fn specified_faces(&self) -> &[Dart] {
        &self.faces
    }

    /// Anchors the specified face(s). A face is the one containing the
    /// traversal that leaves along the anchor dart with positive local
    /// orientation.
    pub fn set_specified_faces(&mut self, anchors: Vec<Dart>) -> Result<(), GraphError> {
        if anchors.len() > 2 {
            return Err(GraphError::TooManyFaces);
        }
        for a in &anchors {
            self.edge(a.edge)?;
            if a.end > 1 {
                return Err(GraphError::Invalid(format!("bad dart end in {a}")));
            }
        }
        self.faces = anchors;
        Ok(())
    }

    pub fn special_t(&self) -> Option<VertexId> {
        self.special_t
    }

    pub fn set_special_t(&mut self, t: Option<VertexId>) {
        self.special_t = t;
    }

    pub fn directed(&self) -> Option<&DirectedVertexSpec> {
        self.directed.as_ref()
    }

    pub fn set_directed(&mut self, spec: Option<DirectedVertexSpec>) {
        self.directed = spec;
    }

    pub fn without_directed_vertex(&self) -> EmbeddedGraph {
        let mut g = self.clone();
        g.directed = None;
        g
    }

    /// Checks that every rotation lists exactly the darts of its incident
    /// edges, each once.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut expected: BTreeMap<VertexId, BTreeSet<Dart>> = self
            .rotation
            .keys()
            .map(|&v| (v, BTreeSet::new()))
            .collect();
        for (&id, e) in &self.edges {
            for end in 0..2u8 {
                let v = e.ends[end as usize];
                expected
                    .get_mut(&v)
                    .ok_or(GraphError::UnknownVertex(v))?
                    .insert(Dart::new(id, end));
            }
        }
        for (&v, rot) in &self.rotation {
            let seen: BTreeSet<Dart> = rot.iter().copied().collect();
            if seen.len() != rot.len() {
                return Err(GraphError::MalformedRotation {
                    vertex: v,
                    reason: "dart repeated".into(),
                });
            }
            if seen != expected[&v] {
                return Err(GraphError::MalformedRotation {
                    vertex: v,
                    reason: "rotation does not match incident darts".into(),
                });
            }
        }
        for a in &self.faces {
            self.edge(a.edge)?;
        }
        if let Some(t) = self.special_t {
            if !self.has_vertex(t) {
                return Err(GraphError::UnknownVertex(t));
            }
        }
        if let Some(d) = &self.directed {
            if !self.has_vertex(d.vertex) {
                return Err(GraphError::UnknownVertex(d.vertex));
            }
            for e in d.arcs.keys() {
                if !self.edge(*e)?.touches(d.vertex) {
                    return Err(GraphError::Invalid(format!(
                        "directed arc {e} is not incident with {}",
                        d.vertex
                    )));
                }
            }
        }
        Ok(())
    }

    /// Connected components of the subgraph induced by `within`
    /// (all vertices when `None`).
    pub fn components(&self, within: Option<&BTreeSet<VertexId>>) -> Vec<BTreeSet<VertexId>> {
        let inside = |v: &VertexId| within.is_none_or(|w| w.contains(v));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices().filter(inside) {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = BTreeSet::from([v]);
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if inside(&y) && seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).len() <= 1
    }

    /// Flips the local orientation at `v`: reverses its rotation and negates
    /// the sign of every non-loop edge at `v`. Faces are unchanged.
    pub fn switch_vertex(&mut self, v: VertexId) {
        if let Some(rot) = self.rotation.get_mut(&v) {
            rot.reverse();
            let ids: BTreeSet<EdgeId> = rot.iter().map(|d| d.edge).collect();
            for id in ids {
                let e = self.edges.get_mut(&id).unwrap();
                if !e.is_loop() {
                    e.sign = e.sign.flip();
                }
            }
        }
    }

    /// Switching labels that make every edge of the induced subgraph positive,
    /// or `None` when the subgraph is unbalanced. Vertices outside `within`
    /// get no label.
    pub(crate) fn balancing_switches(
        &self,
        within: &BTreeSet<VertexId>,
    ) -> Option<BTreeMap<VertexId, Sign>> {
        let mut label: BTreeMap<VertexId, Sign> = BTreeMap::new();
        for &root in within {
            if label.contains_key(&root) {
                continue;
            }
            label.insert(root, Sign::Pos);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for id in self.incident_edges(x) {
                    let e = &self.edges[&id];
                    let y = e.other(x);
                    if !within.contains(&y) {
                        continue;
                    }
                    let want = label[&x].mul(e.sign);
                    match label.get(&y) {
                        None => {
                            label.insert(y, want);
                            queue.push_back(y);
                        }
                        Some(&have) if have != want => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(label)
    }

    #[cfg(test)]
    pub(crate) fn edges_mut(&mut self) -> &mut BTreeMap<EdgeId, Edge> {
        &mut self.edges
    }
}
