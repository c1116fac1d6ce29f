mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z3orient::cuts::{
    boundary_connectivity, cuts_cross, edge_connectivity, enumerate_robust_cuts, local_edge_connectivity,
    EdgeCut,
};
use z3orient::orient::{
    count_valid, flow_excess, is_valid_orientation, oracle_solve, orientation_to_flow, residue,
    transfer_orientation, z3, Orientation, Prescription,
};
use z3orient::pgr::{parse_orientation, parse_pgr, serialize_orientation, serialize_pgr};
use z3orient::solver::{replay, solve, SolverConfig};
use z3orient::surface::{EdgeId, EmbeddedGraph, Sign, VertexId};

use common::*;

fn graph(seed: u64, n: u32, extra: u32, signed: bool) -> (EmbeddedGraph, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_embedded(&mut rng, n, extra, signed);
    (g, rng)
}

fn random_orientation(g: &EmbeddedGraph, rng: &mut impl Rng) -> Orientation {
    let mut o = Orientation::new();
    for (e, edge) in g.edges() {
        o.direct(e, edge.ends[rng.gen_range(0..2)]);
    }
    o
}

/// Is the naive normal form: connected, or two non-adjacent vertices.
fn normal(g: &EmbeddedGraph, s: &BTreeSet<VertexId>) -> bool {
    if g.components(Some(s)).len() == 1 {
        return true;
    }
    let v: Vec<VertexId> = s.iter().copied().collect();
    v.len() == 2 && g.edges_between(v[0], v[1]).is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facial_walks_use_every_dart_once(seed in any::<u64>(), n in 2u32..8, extra in 0u32..10) {
        let (g, _) = graph(seed, n, extra, true);
        let f = g.trace_faces().unwrap();
        let total: usize = f.walks.iter().map(|w| w.len()).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn switching_keeps_cycle_signs_and_faces(seed in any::<u64>(), n in 3u32..8, extra in 1u32..8) {
        let (g, mut rng) = graph(seed, n, extra, true);
        let mut h = g.clone();
        for v in 0..n {
            if rng.gen_bool(0.5) {
                h.switch_vertex(VertexId(v));
            }
        }
        // Every edge outside a spanning tree closes one fundamental cycle.
        let tree_ids: Vec<EdgeId> = (0..n - 1).map(EdgeId).collect();
        for k in n - 1..n - 1 + extra {
            let e = EdgeId(k);
            let ends = g.edge(e).unwrap().ends;
            if ends[0] == ends[1] {
                continue;
            }
            let path = tree_path(&g, &tree_ids, ends[0], ends[1]);
            let mut cyc = path.clone();
            cyc.push(e);
            prop_assert_eq!(g.cycle_sign(&cyc).unwrap(), h.cycle_sign(&cyc).unwrap());
        }
        prop_assert_eq!(g.euler_characteristic().unwrap(), h.euler_characteristic().unwrap());
    }

    #[test]
    fn lifting_removes_two_darts(seed in any::<u64>(), n in 3u32..8, extra in 2u32..8) {
        let (g, mut rng) = graph(seed, n, extra, true);
        let v = VertexId(rng.gen_range(0..n));
        let inc = g.incident_edges(v);
        let mut tried = false;
        for &e1 in &inc {
            for &e2 in &inc {
                let (a, b) = (g.edge(e1).unwrap(), g.edge(e2).unwrap());
                if e1 == e2 || a.other(v) == b.other(v) {
                    continue;
                }
                let h = g.lift_pair(e1, e2, v).unwrap();
                prop_assert_eq!(h.edge_count() + 1, g.edge_count());
                prop_assert_eq!(h.degree(v) + 2, g.degree(v));
                let new = h.edge(g.next_edge_id()).unwrap();
                prop_assert_eq!(new.sign, a.sign.mul(b.sign));
                tried = true;
                break;
            }
            if tried { break; }
        }
    }

    #[test]
    fn residues_sum_to_zero(seed in any::<u64>(), n in 2u32..9, extra in 0u32..12) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let o = random_orientation(&g, &mut rng);
        let total: i64 = g.vertices().map(|v| residue(&g, &o, v).unwrap() as i64).sum();
        prop_assert_eq!(z3(total), 0);
    }

    #[test]
    fn reversal_shifts_both_ends_by_two(seed in any::<u64>(), n in 2u32..8, extra in 0u32..8) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let o = random_orientation(&g, &mut rng);
        let e = EdgeId(rng.gen_range(0..g.edge_count() as u32));
        let ed = *g.edge(e).unwrap();
        let tail = o.tail(e).unwrap();
        let head = ed.other(tail);
        let mut r = o.clone();
        r.reverse(&g, e).unwrap();
        prop_assert_eq!(residue(&g, &r, tail).unwrap(), z3(residue(&g, &o, tail).unwrap() as i64 + 2));
        prop_assert_eq!(residue(&g, &r, head).unwrap(), z3(residue(&g, &o, head).unwrap() as i64 - 2));
    }

    #[test]
    fn flow_excess_matches_residue(seed in any::<u64>(), n in 2u32..8, extra in 0u32..8) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let o = random_orientation(&g, &mut rng);
        let reference = random_orientation(&g, &mut rng);
        let f = orientation_to_flow(&g, &o, &reference).unwrap();
        prop_assert!(f.values().all(|&x| x == 1 || x == 2));
        for v in g.vertices() {
            prop_assert_eq!(flow_excess(&g, &reference, &f, v).unwrap(), residue(&g, &o, v).unwrap());
        }
    }

    #[test]
    fn oracle_agrees_with_brute_force(seed in any::<u64>(), n in 2u32..7, extra in 0u32..8) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let p = prescription_with_total(&g, &mut rng, 0);
        let found = oracle_solve(&g, &p, &Orientation::new(), 28).unwrap();
        prop_assert_eq!(found.is_some(), brute_force_exists(&g, &p));
        if let Some(o) = found {
            prop_assert_eq!(is_valid_orientation(&g, &p, &o), Ok(true));
        }
        prop_assert_eq!(count_valid(&g, &p).unwrap() > 0, brute_force_exists(&g, &p));
    }

    #[test]
    fn enumerated_cuts_match_scan(seed in any::<u64>(), n in 2u32..9, extra in 0u32..10, k in 1usize..6, m in 1usize..3) {
        let (g, _) = graph(seed, n, extra, false);
        let got: BTreeSet<BTreeSet<VertexId>> = enumerate_robust_cuts(&g, k, m)
            .unwrap()
            .into_iter()
            .map(|c| c.side)
            .collect();
        let vs: Vec<VertexId> = g.vertices().collect();
        let mut want = BTreeSet::new();
        for mask in 1..(1u64 << n) - 1 {
            let a = subset(&vs, mask);
            let c: BTreeSet<VertexId> = vs.iter().filter(|v| !a.contains(v)).copied().collect();
            if a.len() < m || c.len() < m || cut_size(&g, &a) > k || !normal(&g, &a) || !normal(&g, &c) {
                continue;
            }
            let canon = if a.len() < c.len() || (a.len() == c.len() && a.contains(&vs[0])) { a } else { c };
            want.insert(canon);
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn menger_matches_min_cut(seed in any::<u64>(), n in 2u32..9, extra in 0u32..12) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let s = VertexId(rng.gen_range(0..n));
        let t = VertexId((s.0 + 1 + rng.gen_range(0..n - 1)) % n);
        let flow = local_edge_connectivity(&g, s, t).unwrap();
        prop_assert_eq!(flow, min_separating_cut(&g, s, &BTreeSet::from([t])));
        prop_assert_eq!(edge_connectivity(&g).unwrap(), min_cut(&g));
    }

    #[test]
    fn boundary_paths_match_min_cut(seed in any::<u64>(), n in 3u32..9, extra in 0u32..12) {
        let (g, _) = graph(seed, n, extra, true);
        let b = g.boundary_vertices().unwrap();
        for v in g.vertices().filter(|v| !b.contains(v)) {
            prop_assert_eq!(boundary_connectivity(&g, v).unwrap(), min_separating_cut(&g, v, &b));
        }
    }

    #[test]
    fn graph_and_orientation_text_round_trip(seed in any::<u64>(), n in 2u32..8, extra in 0u32..8) {
        let (g, mut rng) = graph(seed, n, extra, true);
        let p = prescription_with_total(&g, &mut rng, 0);
        let text = serialize_pgr(&g, Some(&p));
        let doc = parse_pgr(&text).unwrap();
        prop_assert_eq!(&doc.graph, &g);
        prop_assert_eq!(doc.prescription.as_ref(), Some(&p));
        let o = random_orientation(&g, &mut rng);
        let (o2, p2) = parse_orientation(&serialize_orientation(&o, Some(&p))).unwrap();
        prop_assert_eq!(o2.tails, o.tails);
        prop_assert_eq!(p2, Some(p));
    }

    #[test]
    fn contraction_keeps_cut_edges(seed in any::<u64>(), n in 3u32..8, extra in 0u32..8) {
        let (g, mut rng) = graph(seed, n, extra, true);
        let side: BTreeSet<VertexId> = g
            .components(Some(&(0..rng.gen_range(2..=n)).map(VertexId).collect()))
            .into_iter()
            .max_by_key(|c| c.len())
            .unwrap();
        prop_assume!(side.len() >= 2);
        let x = g.next_vertex_id();
        let h = g.contract_subgraph(&side).unwrap();
        let cut = EdgeCut::from_side(&g, side.clone());
        let at_x: BTreeSet<EdgeId> = h.incident_edges(x).into_iter().collect();
        prop_assert_eq!(at_x, cut.edges.iter().copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(h.vertex_count(), g.vertex_count() - side.len() + 1);
    }

    #[test]
    fn transfer_composes_to_valid(seed in any::<u64>(), n in 4u32..8, extra in 2u32..8) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let o = random_orientation(&g, &mut rng);
        let p = Prescription(g.vertices().map(|v| (v, residue(&g, &o, v).unwrap())).collect());
        let side: BTreeSet<VertexId> = g
            .components(Some(&(0..n / 2).map(VertexId).collect()))
            .into_iter()
            .max_by_key(|c| c.len())
            .unwrap();
        prop_assume!(side.len() >= 2);
        let h = g.contract_subgraph(&side).unwrap();
        let x = g.next_vertex_id();
        let mut q = p.on(&h);
        q.0.insert(x, z3(side.iter().map(|&v| p.get(v) as i64).sum()));
        let solved = oracle_solve(&h, &q, &Orientation::new(), 28).unwrap().unwrap();
        let tr = transfer_orientation(&g, &side, &solved).unwrap();
        // The cut arcs seen from the far side reproduce the outer residues.
        for v in g.vertices().filter(|v| !side.contains(v)) {
            let mut x = 0i64;
            for e in g.incident_edges(v) {
                let ed = g.edge(e).unwrap();
                x += if tr.partial.tail(e) == Some(v) { -1 } else if ed.is_loop() { 0 } else { 1 };
            }
            prop_assert_eq!(z3(x), p.get(v));
        }
    }

    #[test]
    fn solver_matches_oracle_and_replays(seed in any::<u64>(), n in 3u32..8, extra in 4u32..14) {
        let (g, mut rng) = graph(seed, n, extra, false);
        let p = prescription_with_total(&g, &mut rng, 0);
        let t = solve(&g, &p, None, &SolverConfig::default()).unwrap();
        let o = oracle_solve(&g, &p, &Orientation::new(), 28).unwrap();
        prop_assert_eq!(t.orientation().is_some(), o.is_some());
        prop_assert_eq!(replay(&g, &p, None, &t), Ok(()));
        let again = solve(&g, &p, None, &SolverConfig::default()).unwrap();
        prop_assert_eq!(t.to_string(), again.to_string());
    }

    #[test]
    fn odd_cuts_never_cross(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=7u32);
        let mut g = random_embedded(&mut rng, n, 8, false);
        let mut id = g.edge_count() as u32;
        while edge_connectivity(&g).unwrap() < 5 {
            let a = rng.gen_range(0..n);
            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
            g.add_edge(EdgeId(id), VertexId(a), VertexId(b), Sign::Pos);
            id += 1;
        }
        let cuts = five_cuts(&g);
        for (i, a) in cuts.iter().enumerate() {
            for b in &cuts[i + 1..] {
                prop_assert!(!cuts_cross(a, b));
            }
        }
    }
}

/// All cuts of size exactly 5, one per unordered partition.
fn five_cuts(g: &EmbeddedGraph) -> Vec<EdgeCut> {
    let vs: Vec<VertexId> = g.vertices().collect();
    (1..1u64 << (vs.len() - 1))
        .map(|m| subset(&vs[1..], m))
        .filter(|s| cut_size(g, s) == 5)
        .map(|s| EdgeCut::from_side(g, s))
        .collect()
}

fn tree_path(g: &EmbeddedGraph, tree: &[EdgeId], from: VertexId, to: VertexId) -> Vec<EdgeId> {
    // Depth-first search over tree edges, recording the edge into each vertex.
    let mut via = std::collections::BTreeMap::new();
    let mut stack = vec![from];
    let mut seen = BTreeSet::from([from]);
    while let Some(x) = stack.pop() {
        for &e in tree {
            let ed = g.edge(e).unwrap();
            if ed.touches(x) {
                let y = ed.other(x);
                if seen.insert(y) {
                    via.insert(y, e);
                    stack.push(y);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut x = to;
    while x != from {
        let e = via[&x];
        path.push(e);
        x = g.edge(e).unwrap().other(x);
    }
    path
}
