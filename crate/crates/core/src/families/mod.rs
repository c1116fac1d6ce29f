//! Generators for the circulant family `B_i`, the almost-circulant family
//! `A_i`, the counterexample family `CE(k)`, and random PT instances.
//!
//! Family embeddings put every vertex on one boundary cycle with `+1`
//! signs; every other edge is a `-1` chord through the crosscap. At each
//! vertex the rotation is: next boundary edge, chords, previous boundary
//! edge, with chords ordered by how far along the cycle their other end is.

mod random;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::orient::{ArcDir, DirectedVertexSpec, Prescription};
use crate::surface::{Dart, EdgeId, EmbeddedGraph, Sign, VertexId};

pub use random::{gen_random_pt, random_valid_prescription, MAX_RANDOM_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("parameter {0} must be odd and at least 5")]
    BadIndex(i64),
    #[error("parameter {0} must be non-negative")]
    Negative(i64),
    #[error("max_vertices {0} out of range")]
    BadSize(usize),
    #[error("no instance passed the filter after {0} retries")]
    Exhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    B,
    A,
    Ce,
    RandomPt,
}

/// A family member by kind and parameter. For `A` the parameter is the odd
/// index of the circulant it is built from, so `A(i)` has `i + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub parameter: i64,
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            FamilyKind::B => "b",
            FamilyKind::A => "a",
            FamilyKind::Ce => "ce",
            FamilyKind::RandomPt => "rpt",
        };
        write!(f, "{k}{}", self.parameter)
    }
}

fn check_odd(i: i64) -> Result<u32, FamilyError> {
    if i < 5 || i % 2 == 0 || i > u32::MAX as i64 / 4 {
        return Err(FamilyError::BadIndex(i));
    }
    Ok(i as u32)
}

/// Lays out `cycle` as the specified face with `+1` edges and adds `chords`
/// with sign `-1`. Edge ids: cycle edges first (edge `j` joins `cycle[j]` to
/// `cycle[j + 1]`), then chords in the given order.
pub(crate) fn cycle_with_chords(cycle: &[VertexId], chords: &[(VertexId, VertexId)]) -> EmbeddedGraph {
    let m = cycle.len();
    let pos: BTreeMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut g = EmbeddedGraph::new();
    for j in 0..m {
        g.insert_edge_raw(EdgeId(j as u32), cycle[j], cycle[(j + 1) % m], Sign::Pos);
    }
    let mut at: BTreeMap<VertexId, Vec<(usize, Dart)>> = BTreeMap::new();
    for (c, &(a, b)) in chords.iter().enumerate() {
        let id = EdgeId((m + c) as u32);
        g.insert_edge_raw(id, a, b, Sign::Neg);
        let (pa, pb) = (pos[&a], pos[&b]);
        at.entry(a).or_default().push(((pb + m - pa) % m, Dart::new(id, 0)));
        at.entry(b).or_default().push(((pa + m - pb) % m, Dart::new(id, 1)));
    }
    for j in 0..m {
        let v = cycle[j];
        let mut rot = vec![Dart::new(EdgeId(j as u32), 0)];
        let mut ch = at.remove(&v).unwrap_or_default();
        ch.sort_by(|x, y| y.0.cmp(&x.0));
        rot.extend(ch.into_iter().map(|(_, d)| d));
        rot.push(Dart::new(EdgeId(((j + m - 1) % m) as u32), 1));
        g.set_rotation(v, rot);
    }
    g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)])
        .expect("cycle edge exists");
    g
}

/// Circulant `B_i` on `v_1..v_i` (vertex ids `1..=i`) with jumps 1 and
/// `(i - 1) / 2`.
pub fn gen_circulant_b(i: i64) -> Result<EmbeddedGraph, FamilyError> {
    let i = check_odd(i)?;
    let h = (i - 1) / 2;
    let v = |j: u32| VertexId((j - 1) % i + 1);
    let cycle: Vec<VertexId> = (1..=i).map(v).collect();
    let chords: Vec<(VertexId, VertexId)> = (1..=i).map(|j| (v(j), v(j + h))).collect();
    Ok(cycle_with_chords(&cycle, &chords))
}

/// `B_i` with `v_1 v_i` subdivided by `v_0` (vertex id 0) and the extra chord
/// `v_0 v_{(i+1)/2}`.
pub fn gen_a(i: i64) -> Result<EmbeddedGraph, FamilyError> {
    let i = check_odd(i)?;
    let h = (i - 1) / 2;
    let v = |j: u32| VertexId((j - 1) % i + 1);
    let mut cycle = vec![VertexId(0)];
    cycle.extend((1..=i).map(v));
    let mut chords: Vec<(VertexId, VertexId)> = (1..=i).map(|j| (v(j), v(j + h))).collect();
    chords.push((VertexId(0), v(h + 1)));
    Ok(cycle_with_chords(&cycle, &chords))
}

/// Vertex ids of the counterexample family.
#[derive(Debug, Clone, Copy)]
pub struct CeLabels {
    pub n: u32,
}

impl CeLabels {
    pub fn t(&self) -> VertexId {
        VertexId(0)
    }

    pub fn w(&self) -> VertexId {
        VertexId(1)
    }

    /// `u_0 = t`, `u_{n+1} = w`.
    pub fn u(&self, i: u32) -> VertexId {
        match i {
            0 => self.t(),
            i if i == self.n + 1 => self.w(),
            i => VertexId(1 + i),
        }
    }

    /// `v_0 = t`, `v_{n+1} = w`.
    pub fn v(&self, i: u32) -> VertexId {
        match i {
            0 => self.t(),
            i if i == self.n + 1 => self.w(),
            i => VertexId(self.n + 1 + i),
        }
    }

    pub fn d(&self) -> VertexId {
        self.v(self.n - 1)
    }
}

/// The counterexample graph for `k`, with `n = 3k + 5`, its prescription, and
/// the directed vertex `d = v_{n-1}` with every arc out. The returned graph
/// already carries `t` and `d`.
pub fn gen_counterexample(k: i64) -> Result<(EmbeddedGraph, Prescription, DirectedVertexSpec), FamilyError> {
    if k < 0 {
        return Err(FamilyError::Negative(k));
    }
    if k > 100_000 {
        return Err(FamilyError::BadSize(k as usize));
    }
    let n = 3 * k as u32 + 5;
    let l = CeLabels { n };
    // Boundary: t u_1 .. u_n w v_n .. v_1.
    let mut cycle = vec![l.t()];
    cycle.extend((1..=n).map(|i| l.u(i)));
    cycle.push(l.w());
    cycle.extend((1..=n).rev().map(|i| l.v(i)));
    let mut chords = vec![(l.t(), l.w())];
    for i in 1..=n {
        chords.push((l.u(i), l.v(n - i + 1)));
        chords.push((l.u(i), l.v(n - i + 2)));
    }
    chords.push((l.w(), l.v(1)));
    let mut g = cycle_with_chords(&cycle, &chords);
    let d = l.d();
    let spec = DirectedVertexSpec {
        vertex: d,
        arcs: g.incident_edges(d).into_iter().map(|e| (e, ArcDir::Out)).collect(),
    };
    g.set_special_t(Some(l.t()));
    g.set_directed(Some(spec.clone()));
    let mut p = Prescription::zero();
    for x in g.vertices() {
        p.0.insert(x, 1);
    }
    p.0.insert(l.t(), 0);
    p.0.insert(l.w(), 0);
    p.0.insert(l.u(1), -1);
    p.0.insert(d, -1);
    Ok((g, p, spec))
}

/// The lifted pair and vertex order for the greedy orientation of `B_i`
/// (`with_v0 = false`) or `A_i` (`with_v0 = true`). The last vertex,
/// `v_{(i+3)/2}`, is left out.
pub fn lemma4_schedule(i: i64, with_v0: bool) -> Result<(Vec<(EdgeId, EdgeId)>, Vec<VertexId>), FamilyError> {
    let i = check_odd(i)?;
    let g = if with_v0 { gen_a(i as i64)? } else { gen_circulant_b(i as i64)? };
    let v = |j: u32| VertexId(j);
    let one_edge = |a: VertexId, b: VertexId| g.edges_between(a, b)[0];
    let lift = (one_edge(v(1), v(2)), one_edge(v(1), v((i + 3) / 2)));
    let mut order = vec![v(1)];
    if with_v0 {
        order.push(VertexId(0));
    }
    order.push(v(i));
    order.push(v((i + 1) / 2));
    for m in 1.. {
        let a = (i + 1) / 2 - m;
        let b = i - m;
        let a_ok = a >= 2;
        let b_ok = b >= (i + 5) / 2;
        if a_ok {
            order.push(v(a));
        }
        if b_ok {
            order.push(v(b));
        }
        if !a_ok && !b_ok {
            break;
        }
    }
    Ok((vec![lift], order))
}
