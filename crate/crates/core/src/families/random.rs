//! Seeded random PT instances.
//!
//! A circulant or almost-circulant base is grown by adding chords inside
//! faces other than the specified one and by inserting interior vertices of
//! degree at least five. Candidates are kept only if they pass the PT check.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gen_a, gen_circulant_b, FamilyError};
use crate::cuts::{check_class, Class};
use crate::orient::{Prescription, ORACLE_LIMIT};
use crate::surface::{Corner, EmbeddedGraph, VertexId};

pub const MAX_RANDOM_VERTICES: usize = 12;
const RETRIES: usize = 64;

/// Corners of faces other than the specified ones, grouped by face.
fn open_faces(g: &EmbeddedGraph) -> Vec<Vec<Corner>> {
    let Ok(idx) = g.trace_faces() else {
        return Vec::new();
    };
    let spec = g.specified_face_indices(&idx).unwrap_or_default();
    idx.walks
        .iter()
        .enumerate()
        .filter(|(f, w)| !spec.contains(f) && !w.is_empty())
        .map(|(_, w)| g.corners(w))
        .collect()
}

fn add_chord(g: &EmbeddedGraph, rng: &mut ChaCha8Rng) -> Option<EmbeddedGraph> {
    let faces = open_faces(g);
    let face = faces.choose(rng)?;
    let c1 = *face.choose(rng)?;
    let others: Vec<&Corner> = face.iter().filter(|c| c.vertex != c1.vertex).collect();
    let c2 = **others.choose(rng)?;
    g.add_edge_in_face(c1, c2).ok().map(|(h, _)| h)
}

fn add_interior_vertex(g: &EmbeddedGraph, degree: usize, rng: &mut ChaCha8Rng) -> Option<EmbeddedGraph> {
    let faces = open_faces(g);
    let c = *faces.choose(rng)?.choose(rng)?;
    let (mut h, x) = g.add_pendant_in_face(c).ok()?;
    while h.degree(x) < degree {
        let faces: Vec<Vec<Corner>> = open_faces(&h)
            .into_iter()
            .filter(|f| f.iter().any(|c| c.vertex == x))
            .collect();
        let face = faces.choose(rng)?;
        let here: Vec<&Corner> = face.iter().filter(|c| c.vertex == x).collect();
        let near = h.neighbors(x);
        // Fresh neighbours first; faces are often triangles, so parallel
        // edges are allowed when none is left.
        let mut there: Vec<&Corner> = face
            .iter()
            .filter(|c| c.vertex != x && !near.contains(&c.vertex))
            .collect();
        if there.is_empty() {
            there = face.iter().filter(|c| c.vertex != x).collect();
        }
        let (a, b) = (**here.choose(rng)?, **there.choose(rng)?);
        h = h.add_edge_in_face(a, b).ok()?.0;
    }
    Some(h)
}

fn candidate(max_vertices: usize, rng: &mut ChaCha8Rng) -> Option<EmbeddedGraph> {
    let bases: Vec<(bool, i64)> = (5..=11)
        .step_by(2)
        .flat_map(|i| [(false, i), (true, i)])
        .filter(|&(a, i)| i as usize + a as usize <= max_vertices)
        .collect();
    let &(almost, i) = bases.choose(rng)?;
    let mut g = if almost { gen_a(i).ok()? } else { gen_circulant_b(i).ok()? };
    if almost && rng.gen_bool(0.5) {
        // v0 has degree 3 and sits on the boundary.
        g.set_special_t(Some(VertexId(0)));
    }
    let room = max_vertices - g.vertex_count();
    for _ in 0..rng.gen_range(0..=room.min(2)) {
        let deg = rng.gen_range(5..=6);
        g = add_interior_vertex(&g, deg, rng)?;
    }
    for _ in 0..rng.gen_range(0..=2) {
        g = add_chord(&g, rng)?;
    }
    (g.edge_count() <= ORACLE_LIMIT && g.euler_characteristic().ok() == Some(1)).then_some(g)
}

/// A uniformly random valid prescription on the vertices of `g`.
pub fn random_valid_prescription(g: &EmbeddedGraph, rng: &mut impl Rng) -> Prescription {
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut p = Prescription::zero();
    let Some((&last, rest)) = vs.split_last() else {
        return p;
    };
    for &v in rest {
        p.0.insert(v, rng.gen_range(-1..=1));
    }
    p.0.insert(last, crate::orient::z3(-p.total()));
    p
}

/// A PT graph on at most `max_vertices` vertices and a valid prescription,
/// both determined by `seed`.
pub fn gen_random_pt(seed: u64, max_vertices: usize) -> Result<(EmbeddedGraph, Prescription), FamilyError> {
    if !(5..=MAX_RANDOM_VERTICES).contains(&max_vertices) {
        return Err(FamilyError::BadSize(max_vertices));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let Some(g) = candidate(max_vertices, &mut rng) else {
            continue;
        };
        let p = random_valid_prescription(&g, &mut rng);
        if check_class(&g, &p, Class::Pt).is_ok_and(|r| r.holds) {
            return Ok((g, p));
        }
    }
    Err(FamilyError::Exhausted(RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orient::oracle_solve;
    use crate::orient::Orientation;

    #[test]
    fn deterministic_and_in_class() {
        for seed in 0..20 {
            let (g, p) = gen_random_pt(seed, 9).unwrap();
            let (h, q) = gen_random_pt(seed, 9).unwrap();
            assert_eq!(g, h);
            assert_eq!(p, q);
            assert!(g.vertex_count() <= 9);
            assert!(check_class(&g, &p, Class::Pt).unwrap().holds);
            assert!(p.is_valid());
        }
    }

    #[test]
    fn sizes_vary() {
        let sizes: std::collections::BTreeSet<usize> = (0..40)
            .map(|s| gen_random_pt(s, 9).unwrap().0.vertex_count())
            .collect();
        assert!(sizes.len() >= 3, "{sizes:?}");
    }

    #[test]
    fn oracle_orients_samples() {
        for seed in 0..10 {
            let (g, p) = gen_random_pt(seed, 9).unwrap();
            let o = oracle_solve(&g, &p, &Orientation::new(), ORACLE_LIMIT).unwrap();
            assert!(o.is_some(), "seed {seed}");
        }
    }

    #[test]
    fn bad_size() {
        assert_eq!(gen_random_pt(0, 4), Err(FamilyError::BadSize(4)));
        assert_eq!(gen_random_pt(0, 13), Err(FamilyError::BadSize(13)));
    }
}
