//! Unit-capacity max-flow over the underlying multigraph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::CutError;
use crate::surface::{EmbeddedGraph, VertexId};

/// Residual network. Arc `2k` and `2k + 1` are mates.
struct Net {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Net {
    fn new(n: usize) -> Self {
        Net {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, fwd: i64, back: i64) {
        self.out[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(fwd);
        self.out[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(back);
    }

    fn max_flow(&mut self, s: usize, t: usize, stop_at: i64) -> i64 {
        let mut flow = 0;
        while flow < stop_at {
            let mut prev = vec![usize::MAX; self.out.len()];
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                if x == t {
                    break;
                }
                for &a in &self.out[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && !seen[y] {
                        seen[y] = true;
                        prev[y] = a;
                        q.push_back(y);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut x = t;
            while x != s {
                let a = prev[x];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                x = self.head[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

fn build(g: &EmbeddedGraph, extra: usize) -> (Net, BTreeMap<VertexId, usize>) {
    let index: BTreeMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let mut net = Net::new(index.len() + extra);
    for (_, e) in g.edges() {
        if !e.is_loop() {
            net.add(index[&e.ends[0]], index[&e.ends[1]], 1, 1);
        }
    }
    (net, index)
}

/// Maximum number of edge-disjoint `s`-`t` paths.
pub fn local_edge_connectivity(g: &EmbeddedGraph, s: VertexId, t: VertexId) -> Result<usize, CutError> {
    for v in [s, t] {
        if !g.has_vertex(v) {
            return Err(CutError::UnknownVertex(v));
        }
    }
    if s == t {
        return Err(CutError::Invalid("source equals sink".into()));
    }
    let (mut net, index) = build(g, 0);
    Ok(net.max_flow(index[&s], index[&t], i64::MAX) as usize)
}

/// Global minimum edge cut size.
pub fn edge_connectivity(g: &EmbeddedGraph) -> Result<usize, CutError> {
    let vs: Vec<VertexId> = g.vertices().collect();
    if vs.len() < 2 {
        return Err(CutError::TooFewVertices);
    }
    let mut best = usize::MAX;
    for &v in &vs[1..] {
        best = best.min(local_edge_connectivity(g, vs[0], v)?);
    }
    Ok(best)
}

/// Edge-disjoint paths from `v` to the set `targets`.
pub fn connectivity_to_set(
    g: &EmbeddedGraph,
    v: VertexId,
    targets: &BTreeSet<VertexId>,
) -> Result<usize, CutError> {
    if !g.has_vertex(v) {
        return Err(CutError::UnknownVertex(v));
    }
    if targets.contains(&v) {
        return Err(CutError::Invalid(format!("vertex {v} is in the target set")));
    }
    let (mut net, index) = build(g, 1);
    let sink = index.len();
    let big = 2 * g.edge_count() as i64 + 1;
    for t in targets {
        if let Some(&i) = index.get(t) {
            net.add(i, sink, big, 0);
        }
    }
    Ok(net.max_flow(index[&v], sink, i64::MAX) as usize)
}

/// Edge-disjoint paths from an off-boundary vertex to the boundary of the
/// specified face(s).
pub fn boundary_connectivity(g: &EmbeddedGraph, v: VertexId) -> Result<usize, CutError> {
    let boundary = g.boundary_vertices()?;
    if boundary.contains(&v) {
        return Err(CutError::OnBoundary(v));
    }
    connectivity_to_set(g, v, &boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Dart, EdgeId, Sign};

    fn k4() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        let mut id = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                g.add_edge(EdgeId(id), VertexId(a), VertexId(b), Sign::Pos);
                id += 1;
            }
        }
        g
    }

    #[test]
    fn k4_is_three_connected() {
        assert_eq!(edge_connectivity(&k4()), Ok(3));
    }

    #[test]
    fn single_vertex_is_an_error() {
        let mut g = EmbeddedGraph::new();
        g.add_vertex(VertexId(0));
        assert_eq!(edge_connectivity(&g), Err(CutError::TooFewVertices));
    }

    #[test]
    fn wheel_hub_reaches_rim_by_every_spoke() {
        let k = 6u32;
        let mut g = EmbeddedGraph::new();
        let hub = VertexId(0);
        for i in 0..k {
            g.add_edge(EdgeId(i), VertexId(1 + i), VertexId(1 + (i + 1) % k), Sign::Pos);
        }
        for i in 0..k {
            g.add_edge(EdgeId(k + i), hub, VertexId(1 + i), Sign::Pos);
        }
        for i in 0..k {
            let prev = (i + k - 1) % k;
            g.set_rotation(
                VertexId(1 + i),
                vec![
                    Dart::new(EdgeId(i), 0),
                    Dart::new(EdgeId(k + i), 1),
                    Dart::new(EdgeId(prev), 1),
                ],
            );
        }
        assert_eq!(g.euler_characteristic(), Ok(2));
        g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)]).unwrap();
        assert_eq!(g.specified_walk().unwrap().len(), k as usize);
        assert_eq!(boundary_connectivity(&g, hub), Ok(k as usize));
        assert_eq!(
            boundary_connectivity(&g, VertexId(1)),
            Err(CutError::OnBoundary(VertexId(1)))
        );
    }
}
