//! Face-preserving reductions: deletion, contraction, lifting, and the two
//! re-embeddings used for the projective plane (planarizing along a
//! non-contractible chord and splitting a doubled boundary vertex).
//!
//! All operations are pure. Ids are never renumbered; new vertices and edges
//! take the next free id.

use std::collections::{BTreeMap, BTreeSet};

use super::{Corner, Dart, EdgeId, EmbeddedGraph, FaceStep, GraphError, Sign, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteTarget {
    Edge(EdgeId),
    Vertex(VertexId),
}

/// Traversal states and edges of each specified face, captured before an
/// operation so the face can be located again afterwards.
struct AnchorMemo {
    faces: Vec<(Vec<FaceStep>, Vec<EdgeId>, BTreeSet<VertexId>)>,
}

impl EmbeddedGraph {
    fn remember_anchors(&self) -> Result<AnchorMemo, GraphError> {
        let idx = self.trace_faces()?;
        let faces = self
            .specified_face_indices(&idx)?
            .into_iter()
            .map(|f| {
                let states = idx.states_of(f);
                let edges = idx.walks[f].steps.iter().map(|s| s.dart.edge).collect();
                let verts = self.walk_vertices(&idx.walks[f]).into_iter().collect();
                (states, edges, verts)
            })
            .collect();
        Ok(AnchorMemo { faces })
    }

    /// Re-locates the remembered faces in `self`.
    ///
    /// A remembered state survives when its edge still exists, still leaves
    /// the same vertex, and that vertex was not merged; its frame flips if the
    /// vertex was switched. Failing that, the face sharing the most surviving
    /// boundary edges is taken.
    fn restore_anchors(
        &mut self,
        memo: &AnchorMemo,
        merged: &BTreeSet<VertexId>,
        switched: &BTreeSet<VertexId>,
        drop: &[bool],
    ) -> Result<(), GraphError> {
        self.faces.clear();
        let idx = self.trace_faces()?;
        let mut anchors = Vec::new();
        for (k, (states, edges, _)) in memo.faces.iter().enumerate() {
            if drop.get(k).copied().unwrap_or(false) {
                continue;
            }
            let mut found = None;
            for s in states {
                if !self.edges.contains_key(&s.dart.edge) {
                    continue;
                }
                let tail = self.dart_vertex(s.dart);
                if merged.contains(&tail) {
                    continue;
                }
                let frame = if switched.contains(&tail) {
                    s.frame.flip()
                } else {
                    s.frame
                };
                if let Some(f) = idx.face_of(FaceStep {
                    dart: s.dart,
                    frame,
                }) {
                    found = Some(f);
                    break;
                }
            }
            if found.is_none() {
                let survivors: BTreeSet<EdgeId> = edges
                    .iter()
                    .filter(|e| self.edges.contains_key(e))
                    .copied()
                    .collect();
                let mut best: Option<(usize, usize)> = None;
                for (f, w) in idx.walks.iter().enumerate() {
                    let hits = w
                        .steps
                        .iter()
                        .filter(|s| survivors.contains(&s.dart.edge))
                        .count();
                    if hits > 0 && best.is_none_or(|(b, _)| hits > b) {
                        best = Some((hits, f));
                    }
                }
                found = best.map(|(_, f)| f);
            }
            if let Some(f) = found {
                if let Some(a) = idx.anchor_of(f) {
                    let fa = idx.face_of(FaceStep {
                        dart: a,
                        frame: Sign::Pos,
                    });
                    let dup = anchors.iter().any(|&b: &Dart| {
                        idx.face_of(FaceStep {
                            dart: b,
                            frame: Sign::Pos,
                        }) == fa
                    });
                    if !dup {
                        anchors.push(a);
                    }
                }
            }
        }
        self.faces = anchors;
        Ok(())
    }

    /// Anchors the specified face on the face that leaves `v` along its first
    /// dart. Used when a contraction swallows the whole boundary and the
    /// caller wants a face at the contraction vertex.
    pub fn anchor_at_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let first = self.rotation(v)?.first().copied();
        let Some(d) = first else {
            self.faces.clear();
            return Ok(());
        };
        let idx = self.trace_faces()?;
        let f = idx
            .face_of(FaceStep {
                dart: d,
                frame: Sign::Pos,
            })
            .ok_or(GraphError::NoSpecifiedFace)?;
        self.faces = idx.anchor_of(f).into_iter().collect();
        Ok(())
    }

    fn remove_edge_raw(&mut self, id: EdgeId) {
        if let Some(e) = self.edges.remove(&id) {
            for end in 0..2u8 {
                if let Some(rot) = self.rotation.get_mut(&e.ends[end as usize]) {
                    rot.retain(|d| *d != Dart::new(id, end));
                }
            }
            if let Some(d) = self.directed.as_mut() {
                d.arcs.remove(&id);
            }
        }
    }

    fn remove_vertex_raw(&mut self, v: VertexId) {
        for id in self.incident_edges(v) {
            self.remove_edge_raw(id);
        }
        self.rotation.remove(&v);
        if self.special_t == Some(v) {
            self.special_t = None;
        }
        if self.directed.as_ref().is_some_and(|d| d.vertex == v) {
            self.directed = None;
        }
    }

    /// Deletes an edge or a vertex, updating the specified face by merging it
    /// with the faces that lose their separating elements.
    pub fn delete_element(&self, x: DeleteTarget) -> Result<EmbeddedGraph, GraphError> {
        let out = self.delete_unchecked(x)?;
        let before = self.components(None).len();
        if out.components(None).len() > before {
            let what = match x {
                DeleteTarget::Edge(e) => format!("edge {e}"),
                DeleteTarget::Vertex(v) => format!("vertex {v}"),
            };
            return Err(GraphError::WouldDisconnect(what));
        }
        Ok(out)
    }

    /// As `delete_element` but allows the result to fall apart.
    pub fn delete_unchecked(&self, x: DeleteTarget) -> Result<EmbeddedGraph, GraphError> {
        let memo = self.remember_anchors()?;
        let mut g = self.clone();
        match x {
            DeleteTarget::Edge(e) => {
                self.edge(e)?;
                g.remove_edge_raw(e);
            }
            DeleteTarget::Vertex(v) => {
                if !self.has_vertex(v) {
                    return Err(GraphError::UnknownVertex(v));
                }
                g.remove_vertex_raw(v);
            }
        }
        g.restore_anchors(&memo, &BTreeSet::new(), &BTreeSet::new(), &[])?;
        Ok(g)
    }

    /// Contracts the connected subgraph induced by `side` to a single new
    /// vertex. Internal edges vanish, cut edges keep their ids, and the new
    /// rotation follows the boundary of the contracted patch.
    ///
    /// A specified face whose whole boundary lies in `side` is dropped; the
    /// caller picks a replacement.
    pub fn contract_subgraph(&self, side: &BTreeSet<VertexId>) -> Result<EmbeddedGraph, GraphError> {
        for v in side {
            if !self.has_vertex(*v) {
                return Err(GraphError::UnknownVertex(*v));
            }
        }
        let comps = self.components(Some(side));
        if comps.len() != 1 {
            return Err(GraphError::SideNotConnected);
        }
        if side.len() == 1 {
            return Ok(self.clone());
        }
        let memo = self.remember_anchors()?;
        let drop: Vec<bool> = memo
            .faces
            .iter()
            .map(|(_, _, verts)| !verts.is_empty() && verts.is_subset(side))
            .collect();
        let new_id = self.next_vertex_id();
        let mut g = self.clone();

        let root = *side.iter().next().unwrap();
        let mut merged = BTreeSet::from([root]);
        // Grow a spanning tree of the side, contracting each tree edge into
        // the root as soon as it is found.
        loop {
            let next = g
                .incident_edges(root)
                .into_iter()
                .map(|id| (id, g.edges[&id]))
                .find(|(_, e)| !e.is_loop() && side.contains(&e.other(root)));
            let Some((id, e)) = next else { break };
            let child = e.other(root);
            if e.sign == Sign::Neg {
                g.switch_vertex(child);
            }
            let at_root = if e.ends[0] == root {
                Dart::new(id, 0)
            } else {
                Dart::new(id, 1)
            };
            let at_child = at_root.opposite();
            let mut a = g.rotation.remove(&root).unwrap();
            let ia = a.iter().position(|d| *d == at_root).unwrap();
            a.rotate_left(ia + 1);
            a.pop();
            let mut b = g.rotation.remove(&child).unwrap();
            let ib = b.iter().position(|d| *d == at_child).unwrap();
            b.rotate_left(ib);
            b.remove(0);
            for d in &b {
                let edge = g.edges.get_mut(&d.edge).unwrap();
                edge.ends[d.end as usize] = root;
            }
            a.extend(b);
            g.rotation.insert(root, a);
            g.edges.remove(&id);
            merged.insert(child);
        }
        // Leftover internal edges are now loops.
        let loops: Vec<EdgeId> = g
            .incident_edges(root)
            .into_iter()
            .filter(|id| g.edges.get(id).is_some_and(|e| e.is_loop()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for id in loops {
            g.remove_edge_raw(id);
        }
        let rot = g.rotation.remove(&root).unwrap();
        for d in &rot {
            g.edges.get_mut(&d.edge).unwrap().ends[d.end as usize] = new_id;
        }
        g.rotation.insert(new_id, rot);
        if g.special_t.is_some_and(|t| side.contains(&t)) {
            g.special_t = None;
        }
        if g.directed.as_ref().is_some_and(|d| side.contains(&d.vertex)) {
            g.directed = None;
        }
        merged.insert(new_id);
        g.restore_anchors(&memo, &merged, &BTreeSet::new(), &drop)?;
        Ok(g)
    }

    /// Replaces `e1 = uv` and `e2 = vw` by a single edge `uw` whose sign is
    /// the product of the two. The new edge takes the slot of `e1` at `u` and
    /// of `e2` at `w`.
    pub fn lift_pair(&self, e1: EdgeId, e2: EdgeId, v: VertexId) -> Result<EmbeddedGraph, GraphError> {
        let a = *self.edge(e1)?;
        let b = *self.edge(e2)?;
        if e1 == e2 || a.is_loop() || b.is_loop() || !a.touches(v) || !b.touches(v) {
            return Err(GraphError::NotAdjacent(e1, e2, v));
        }
        let u = a.other(v);
        let w = b.other(v);
        if u == w {
            return Err(GraphError::WouldCreateLoop(e1, e2));
        }
        let memo = self.remember_anchors()?;
        let mut g = self.clone();
        let new = self.next_edge_id();
        let at_u = if a.ends[0] == u { Dart::new(e1, 0) } else { Dart::new(e1, 1) };
        let at_w = if b.ends[0] == w { Dart::new(e2, 0) } else { Dart::new(e2, 1) };
        for d in g.rotation.get_mut(&u).unwrap().iter_mut() {
            if *d == at_u {
                *d = Dart::new(new, 0);
            }
        }
        for d in g.rotation.get_mut(&w).unwrap().iter_mut() {
            if *d == at_w {
                *d = Dart::new(new, 1);
            }
        }
        g.rotation
            .get_mut(&v)
            .unwrap()
            .retain(|d| d.edge != e1 && d.edge != e2);
        g.edges.remove(&e1);
        g.edges.remove(&e2);
        g.edges.insert(
            new,
            super::Edge {
                ends: [u, w],
                sign: a.sign.mul(b.sign),
            },
        );
        if let Some(d) = g.directed.as_mut() {
            d.arcs.remove(&e1);
            d.arcs.remove(&e2);
        }
        g.restore_anchors(&memo, &BTreeSet::new(), &BTreeSet::new(), &[])?;
        Ok(g)
    }

    /// Switches vertices so every edge becomes positive. Returns the switched
    /// set, or an error when some cycle is one-sided.
    fn resign_to_plane(&mut self) -> Result<BTreeSet<VertexId>, GraphError> {
        let all: BTreeSet<VertexId> = self.vertices().collect();
        let labels = self.balancing_switches(&all).ok_or(GraphError::Unbalanced)?;
        let switched: BTreeSet<VertexId> = labels
            .into_iter()
            .filter(|(_, s)| *s == Sign::Neg)
            .map(|(v, _)| v)
            .collect();
        for &v in &switched {
            self.switch_vertex(v);
        }
        Ok(switched)
    }

    /// Deletes both ends of a non-contractible chord of the specified face.
    /// The rest lies in a disk; it is re-signed to all `+1`.
    pub fn planarize_along_chord(&self, e: EdgeId) -> Result<EmbeddedGraph, GraphError> {
        if self.is_contractible_chord(e)? {
            return Err(GraphError::ContractibleChord(e));
        }
        let edge = *self.edge(e)?;
        let memo = self.remember_anchors()?;
        let mut g = self.clone();
        g.remove_vertex_raw(edge.ends[0]);
        g.remove_vertex_raw(edge.ends[1]);
        let switched = g.resign_to_plane()?;
        g.restore_anchors(&memo, &BTreeSet::new(), &switched, &[])?;
        Ok(g)
    }

    /// Re-embeds a projective graph whose specified face passes twice through
    /// `v` (once on each side of the crosscap) as a plane graph with two
    /// specified faces meeting at `v`. All other faces are kept.
    pub fn split_doubled_boundary_vertex(&self, v: VertexId) -> Result<EmbeddedGraph, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let walk = self.specified_walk()?;
        let corners: Vec<Corner> = self
            .corners(&walk)
            .into_iter()
            .filter(|c| c.vertex == v)
            .collect();
        if corners.len() < 2 {
            return Err(GraphError::NotDoubled(v));
        }
        let pos = corners.iter().find(|c| c.frame == Sign::Pos);
        let neg = corners.iter().find(|c| c.frame == Sign::Neg);
        let (Some(c1), Some(c2)) = (pos, neg) else {
            return Err(GraphError::NoCrosscapCorners(v));
        };
        let before = self.trace_faces()?.face_count();

        let mut g = self.clone();
        let mut rot = g.rotation.remove(&v).unwrap();
        let start = rot.iter().position(|d| *d == c1.depart).unwrap();
        rot.rotate_left(start);
        let stop = rot.iter().position(|d| *d == c2.depart).unwrap();
        rot[..=stop].reverse();
        let mut flips: BTreeMap<EdgeId, u8> = BTreeMap::new();
        for d in &rot[..=stop] {
            *flips.entry(d.edge).or_default() += 1;
        }
        for (id, n) in flips {
            if n % 2 == 1 {
                let e = g.edges.get_mut(&id).unwrap();
                e.sign = e.sign.flip();
            }
        }
        g.rotation.insert(v, rot);

        let face_a = FaceStep {
            dart: c1.depart,
            frame: Sign::Neg,
        };
        let face_b = FaceStep {
            dart: c2.depart,
            frame: Sign::Pos,
        };
        let switched = g.resign_to_plane()?;
        let adjust = |s: FaceStep| {
            if switched.contains(&v) {
                FaceStep {
                    dart: s.dart,
                    frame: s.frame.flip(),
                }
            } else {
                s
            }
        };
        let idx = g.trace_faces()?;
        if idx.face_count() != before + 1 {
            return Err(GraphError::NoCrosscapCorners(v));
        }
        let fa = idx.face_of(adjust(face_a)).ok_or(GraphError::NoSpecifiedFace)?;
        let fb = idx.face_of(adjust(face_b)).ok_or(GraphError::NoSpecifiedFace)?;
        if fa == fb {
            return Err(GraphError::NoCrosscapCorners(v));
        }
        g.faces = vec![
            idx.anchor_of(fa).ok_or(GraphError::NoSpecifiedFace)?,
            idx.anchor_of(fb).ok_or(GraphError::NoSpecifiedFace)?,
        ];
        Ok(g)
    }

    /// Adds a new edge through the face that owns both corners, splitting it.
    pub fn add_edge_in_face(&self, c1: Corner, c2: Corner) -> Result<(EmbeddedGraph, EdgeId), GraphError> {
        if c1.vertex == c2.vertex && c1.arrive == c2.arrive {
            return Err(GraphError::Invalid("corners coincide".into()));
        }
        let memo = self.remember_anchors()?;
        let mut g = self.clone();
        let id = self.next_edge_id();
        g.edges.insert(
            id,
            super::Edge {
                ends: [c1.vertex, c2.vertex],
                sign: c1.frame.mul(c2.frame),
            },
        );
        for (c, end) in [(c1, 0u8), (c2, 1u8)] {
            let rot = g.rotation.get_mut(&c.vertex).unwrap();
            let i = rot.iter().position(|d| *d == c.arrive).unwrap();
            match c.frame {
                Sign::Pos => rot.insert(i + 1, Dart::new(id, end)),
                Sign::Neg => rot.insert(i, Dart::new(id, end)),
            }
        }
        g.restore_anchors(&memo, &BTreeSet::new(), &BTreeSet::new(), &[])?;
        Ok((g, id))
    }

    /// Adds a new pendant vertex inside the face at corner `c`.
    pub fn add_pendant_in_face(&self, c: Corner) -> Result<(EmbeddedGraph, VertexId), GraphError> {
        let memo = self.remember_anchors()?;
        let mut g = self.clone();
        let id = self.next_edge_id();
        let x = self.next_vertex_id();
        g.edges.insert(
            id,
            super::Edge {
                ends: [c.vertex, x],
                sign: Sign::Pos,
            },
        );
        let rot = g.rotation.get_mut(&c.vertex).unwrap();
        let i = rot.iter().position(|d| *d == c.arrive).unwrap();
        match c.frame {
            Sign::Pos => rot.insert(i + 1, Dart::new(id, 0)),
            Sign::Neg => rot.insert(i, Dart::new(id, 0)),
        }
        g.rotation.insert(x, vec![Dart::new(id, 1)]);
        g.restore_anchors(&memo, &BTreeSet::new(), &BTreeSet::new(), &[])?;
        Ok((g, x))
    }
}
