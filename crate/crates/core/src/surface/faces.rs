use std::collections::{BTreeSet, HashMap};

use super::{Dart, EmbeddedGraph, GraphError, Sign, VertexId};

/// Leaving a vertex along `dart` with local orientation `frame`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceStep {
    pub dart: Dart,
    pub frame: Sign,
}

/// A closed facial walk. Each step leaves the tail of its dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceWalk {
    pub steps: Vec<FaceStep>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A corner of a face at `vertex`: the walk arrives through `arrive` and
/// leaves through `depart`, with `frame` the local orientation at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: VertexId,
    pub arrive: Dart,
    pub depart: Dart,
    pub frame: Sign,
}

/// The faces of an embedding plus a lookup from every traversal state (both
/// directions) to the face it belongs to.
#[derive(Debug, Clone)]
pub struct FaceIndex {
    pub walks: Vec<FaceWalk>,
    owner: HashMap<FaceStep, usize>,
    isolated: Vec<VertexId>,
}

impl FaceIndex {
    pub fn face_count(&self) -> usize {
        self.walks.len()
    }

    pub fn face_of(&self, step: FaceStep) -> Option<usize> {
        self.owner.get(&step).copied()
    }

    /// The lowest dart whose positive-frame traversal lies on face `f`.
    pub fn anchor_of(&self, f: usize) -> Option<Dart> {
        self.owner
            .iter()
            .filter(|(s, &o)| o == f && s.frame == Sign::Pos)
            .map(|(s, _)| s.dart)
            .min()
    }

    /// All traversal states of face `f`, forward walk first then the reverse
    /// twins, in a deterministic order.
    pub fn states_of(&self, f: usize) -> Vec<FaceStep> {
        let mut fwd = self.walks[f].steps.clone();
        let mut twins: Vec<FaceStep> = self
            .owner
            .iter()
            .filter(|(s, &o)| o == f && !fwd.contains(s))
            .map(|(s, _)| *s)
            .collect();
        twins.sort();
        fwd.append(&mut twins);
        fwd
    }

    pub fn isolated_vertices(&self) -> &[VertexId] {
        &self.isolated
    }
}

impl EmbeddedGraph {
    fn rotation_positions(&self) -> HashMap<Dart, (VertexId, usize)> {
        let mut pos = HashMap::new();
        for (&v, rot) in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                pos.insert(d, (v, i));
            }
        }
        pos
    }

    /// Traces every face of the signed rotation system.
    ///
    /// Walks start from the lowest untraced (dart, frame) state, positive
    /// frame first. Each face is reported once; its reverse traversal is
    /// recorded only in the lookup table.
    pub fn trace_faces(&self) -> Result<FaceIndex, GraphError> {
        self.validate()?;
        let pos = self.rotation_positions();
        let mut owner: HashMap<FaceStep, usize> = HashMap::new();
        let mut walks = Vec::new();
        for (&id, _) in &self.edges {
            for end in 0..2u8 {
                for frame in [Sign::Pos, Sign::Neg] {
                    let start = FaceStep {
                        dart: Dart::new(id, end),
                        frame,
                    };
                    if owner.contains_key(&start) {
                        continue;
                    }
                    let f = walks.len();
                    let mut steps = Vec::new();
                    let mut cur = start;
                    loop {
                        let e = &self.edges[&cur.dart.edge];
                        let arrive = cur.dart.opposite();
                        let frame_after = cur.frame.mul(e.sign);
                        owner.insert(cur, f);
                        owner.insert(
                            FaceStep {
                                dart: arrive,
                                frame: frame_after.flip(),
                            },
                            f,
                        );
                        steps.push(cur);
                        let (u, i) = pos[&arrive];
                        let rot = &self.rotation[&u];
                        let n = rot.len();
                        let next = match frame_after {
                            Sign::Pos => rot[(i + 1) % n],
                            Sign::Neg => rot[(i + n - 1) % n],
                        };
                        cur = FaceStep {
                            dart: next,
                            frame: frame_after,
                        };
                        if cur == start {
                            break;
                        }
                        if steps.len() > 4 * self.edges.len() + 4 {
                            return Err(GraphError::MalformedRotation {
                                vertex: u,
                                reason: "facial walk does not close".into(),
                            });
                        }
                    }
                    walks.push(FaceWalk { steps });
                }
            }
        }
        let isolated: Vec<VertexId> = self
            .rotation
            .iter()
            .filter(|(_, r)| r.is_empty())
            .map(|(&v, _)| v)
            .collect();
        for _ in &isolated {
            walks.push(FaceWalk { steps: Vec::new() });
        }
        Ok(FaceIndex {
            walks,
            owner,
            isolated,
        })
    }

    /// V - E + F for a connected graph.
    pub fn euler_characteristic(&self) -> Result<i64, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let faces = self.trace_faces()?;
        Ok(self.vertex_count() as i64 - self.edge_count() as i64 + faces.face_count() as i64)
    }

    /// Vertex the step leaves from.
    pub fn step_tail(&self, s: FaceStep) -> VertexId {
        self.dart_vertex(s.dart)
    }

    /// Indices (into `faces.walks`) of the specified faces.
    pub fn specified_face_indices(&self, faces: &FaceIndex) -> Result<Vec<usize>, GraphError> {
        self.faces
            .iter()
            .map(|&d| {
                faces
                    .face_of(FaceStep {
                        dart: d,
                        frame: Sign::Pos,
                    })
                    .ok_or(GraphError::NoSpecifiedFace)
            })
            .collect()
    }

    /// Vertex sequence of a walk (tails of its steps).
    pub fn walk_vertices(&self, w: &FaceWalk) -> Vec<VertexId> {
        w.steps.iter().map(|s| self.step_tail(*s)).collect()
    }

    /// Union of vertices on the specified face(s). Empty when no face is set.
    pub fn boundary_vertices(&self) -> Result<BTreeSet<VertexId>, GraphError> {
        let faces = self.trace_faces()?;
        let mut out = BTreeSet::new();
        for f in self.specified_face_indices(&faces)? {
            out.extend(self.walk_vertices(&faces.walks[f]));
        }
        // A lone vertex with no edges is its own face boundary.
        if self.edges.is_empty() {
            out.extend(self.vertices());
        }
        Ok(out)
    }

    /// Edge ids on the specified face(s), with multiplicity of traversal.
    pub fn boundary_edges(&self) -> Result<Vec<super::EdgeId>, GraphError> {
        let faces = self.trace_faces()?;
        let mut out = Vec::new();
        for f in self.specified_face_indices(&faces)? {
            out.extend(faces.walks[f].steps.iter().map(|s| s.dart.edge));
        }
        Ok(out)
    }

    /// The walk of the first specified face.
    pub fn specified_walk(&self) -> Result<FaceWalk, GraphError> {
        let faces = self.trace_faces()?;
        let idx = self.specified_face_indices(&faces)?;
        let f = *idx.first().ok_or(GraphError::NoSpecifiedFace)?;
        Ok(faces.walks[f].clone())
    }

    /// The first specified face as a cycle: vertex order and edges, where
    /// edge `i` joins vertex `i` to vertex `i + 1`.
    pub fn boundary_cycle(&self) -> Result<(Vec<VertexId>, Vec<super::EdgeId>), GraphError> {
        let walk = self.specified_walk()?;
        let verts = self.walk_vertices(&walk);
        let distinct: BTreeSet<_> = verts.iter().collect();
        if walk.is_empty() || distinct.len() != verts.len() {
            return Err(GraphError::BoundaryNotCycle);
        }
        let edges: Vec<_> = walk.steps.iter().map(|s| s.dart.edge).collect();
        let distinct_e: BTreeSet<_> = edges.iter().collect();
        if distinct_e.len() != edges.len() {
            return Err(GraphError::BoundaryNotCycle);
        }
        Ok((verts, edges))
    }

    /// Corners of a walk, one per step: the corner at the tail of step `i`.
    pub fn corners(&self, w: &FaceWalk) -> Vec<Corner> {
        let n = w.steps.len();
        (0..n)
            .map(|i| {
                let prev = w.steps[(i + n - 1) % n];
                let cur = w.steps[i];
                Corner {
                    vertex: self.step_tail(cur),
                    arrive: prev.dart.opposite(),
                    depart: cur.dart,
                    frame: cur.frame,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{EdgeId, Sign};

    fn triangle() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), Sign::Pos);
        g.add_edge(EdgeId(1), VertexId(1), VertexId(2), Sign::Pos);
        g.add_edge(EdgeId(2), VertexId(2), VertexId(0), Sign::Pos);
        g
    }

    #[test]
    fn single_vertex_has_one_empty_face() {
        let mut g = EmbeddedGraph::new();
        g.add_vertex(VertexId(0));
        let f = g.trace_faces().unwrap();
        assert_eq!(f.face_count(), 1);
        assert!(f.walks[0].is_empty());
        assert_eq!(g.euler_characteristic().unwrap(), 2);
    }

    #[test]
    fn triangle_has_two_faces_of_length_three() {
        let g = triangle();
        let f = g.trace_faces().unwrap();
        let lens: Vec<_> = f.walks.iter().map(|w| w.len()).collect();
        assert_eq!(lens, vec![3, 3]);
        assert_eq!(g.euler_characteristic().unwrap(), 2);
    }

    #[test]
    fn single_edge_is_planar() {
        let mut g = EmbeddedGraph::new();
        g.add_edge(EdgeId(0), VertexId(0), VertexId(1), Sign::Pos);
        assert_eq!(g.euler_characteristic().unwrap(), 2);
    }

    #[test]
    fn malformed_rotation_is_rejected() {
        let mut g = triangle();
        g.set_rotation(VertexId(0), vec![Dart::new(EdgeId(0), 0)]);
        assert!(matches!(
            g.trace_faces(),
            Err(GraphError::MalformedRotation { .. })
        ));
    }

    #[test]
    fn disconnected_graph_has_no_characteristic() {
        let mut g = triangle();
        g.add_vertex(VertexId(7));
        assert_eq!(g.euler_characteristic(), Err(GraphError::Disconnected));
    }

    #[test]
    fn a_crosscap_edge_on_a_triangle_gives_projective_plane() {
        let mut g = triangle();
        g.edges_mut().get_mut(&EdgeId(0)).unwrap().sign = Sign::Neg;
        // One face of length 6 through the crosscap: 3 - 3 + 1.
        let f = g.trace_faces().unwrap();
        assert_eq!(f.face_count(), 1);
        assert_eq!(f.walks[0].len(), 6);
        assert_eq!(g.euler_characteristic().unwrap(), 1);
    }
}
