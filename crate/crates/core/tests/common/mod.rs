//! Builders and brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use z3orient::orient::{is_valid_orientation, Orientation, Prescription};
use z3orient::surface::{Dart, EdgeId, EmbeddedGraph, Sign, VertexId};

/// Connected multigraph on `n` vertices: a random spanning tree plus `extra`
/// random non-loop edges, random rotations, and random signs when `signed`.
pub fn random_embedded(rng: &mut impl Rng, n: u32, extra: u32, signed: bool) -> EmbeddedGraph {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        pairs.push((a, b));
    }
    build(rng, n, &pairs, signed)
}

/// Embeds the given edges with shuffled rotations; the specified face is the
/// one through dart `0.0`.
pub fn build(rng: &mut impl Rng, n: u32, pairs: &[(u32, u32)], signed: bool) -> EmbeddedGraph {
    let mut g = EmbeddedGraph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let s = if signed && rng.gen_bool(0.3) {
            Sign::Neg
        } else {
            Sign::Pos
        };
        g.add_edge(EdgeId(i as u32), VertexId(a), VertexId(b), s);
    }
    for v in 0..n {
        let mut rot = g.rotation(VertexId(v)).unwrap().to_vec();
        rot.shuffle(rng);
        g.set_rotation(VertexId(v), rot);
    }
    if !pairs.is_empty() {
        g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)])
            .unwrap();
    }
    g
}

/// Number of edges with exactly one end in `side`.
pub fn cut_size(g: &EmbeddedGraph, side: &BTreeSet<VertexId>) -> usize {
    g.edges()
        .filter(|(_, e)| side.contains(&e.ends[0]) != side.contains(&e.ends[1]))
        .count()
}

/// Every vertex subset as a set, by bitmask over the sorted vertex list.
pub fn subset(vs: &[VertexId], mask: u64) -> BTreeSet<VertexId> {
    vs.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// Smallest cut separating `v` from `targets`, by scanning every vertex set
/// that holds `v` and avoids `targets`.
pub fn min_separating_cut(g: &EmbeddedGraph, v: VertexId, targets: &BTreeSet<VertexId>) -> usize {
    let free: Vec<VertexId> = g
        .vertices()
        .filter(|&x| x != v && !targets.contains(&x))
        .collect();
    let mut best = usize::MAX;
    for mask in 0..1u64 << free.len() {
        let mut side = subset(&free, mask);
        side.insert(v);
        best = best.min(cut_size(g, &side));
    }
    best
}

/// Smallest cut over all proper non-empty vertex sets.
pub fn min_cut(g: &EmbeddedGraph) -> usize {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    (1..(1u64 << (n - 1)))
        .map(|m| cut_size(g, &subset(&vs[1..], m)))
        .min()
        .unwrap()
}

/// Random prescription with the given total modulo 3.
pub fn prescription_with_total(g: &EmbeddedGraph, rng: &mut impl Rng, total: i64) -> Prescription {
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut p = Prescription::zero();
    for &v in &vs[1..] {
        p.0.insert(v, rng.gen_range(-1..=1));
    }
    let r = (total - p.total()).rem_euclid(3);
    p.0.insert(vs[0], if r == 2 { -1 } else { r as i8 });
    p
}

/// Tries every assignment of tails; returns whether one is valid.
pub fn brute_force_exists(g: &EmbeddedGraph, p: &Prescription) -> bool {
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    assert!(ids.len() <= 16, "brute force limited to 16 edges");
    (0u32..1 << ids.len()).any(|mask| {
        let mut o = Orientation::new();
        for (i, &e) in ids.iter().enumerate() {
            let ends = g.edge(e).unwrap().ends;
            o.direct(e, ends[(mask >> i & 1) as usize]);
        }
        is_valid_orientation(g, p, &o) == Ok(true)
    })
}
