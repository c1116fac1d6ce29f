//! Edge cuts: connectivity, small-cut enumeration, classification against
//! the specified face, and class validators.

mod classes;
mod flow;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::surface::{EdgeId, EmbeddedGraph, GraphError, VertexId};

pub use classes::{check_class, Class, ClassReport};
pub use flow::{boundary_connectivity, connectivity_to_set, edge_connectivity, local_edge_connectivity};

/// Largest vertex count for cut enumeration with `max_size > 6`.
pub const ENUM_VERTEX_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("need at least two vertices")]
    TooFewVertices,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} is on the specified face boundary")]
    OnBoundary(VertexId),
    #[error("cut enumeration refused: {vertices} vertices with size bound {max_size}")]
    TooLarge { vertices: usize, max_size: usize },
    #[error("cut meets the boundary cycle in an odd number of edges ({0})")]
    OddBoundary(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Invalid(String),
}

/// Which sides of a cut lie in an open disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskSide {
    Neither,
    Side,
    Complement,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    pub side: BTreeSet<VertexId>,
    pub complement: BTreeSet<VertexId>,
    pub edges: Vec<EdgeId>,
    pub size: usize,
    pub robust: bool,
    /// 1, 2 or 3; `None` when the specified face is not bounded by a cycle.
    pub cut_type: Option<u8>,
    pub disk_side: Option<DiskSide>,
}

impl EdgeCut {
    /// The cut `δ(side)` of `g`, unclassified.
    pub fn from_side(g: &EmbeddedGraph, side: BTreeSet<VertexId>) -> EdgeCut {
        let complement: BTreeSet<VertexId> = g.vertices().filter(|v| !side.contains(v)).collect();
        let edges = delta(g, &side);
        EdgeCut {
            size: edges.len(),
            robust: side.len() >= 2 && complement.len() >= 2,
            side,
            complement,
            edges,
            cut_type: None,
            disk_side: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.side.len() + self.complement.len()
    }
}

/// Edges with exactly one end in `side`.
pub fn delta(g: &EmbeddedGraph, side: &BTreeSet<VertexId>) -> Vec<EdgeId> {
    g.edges()
        .filter(|(_, e)| side.contains(&e.ends[0]) != side.contains(&e.ends[1]))
        .map(|(id, _)| id)
        .collect()
}

/// Cut type from the number of boundary-cycle edges it contains, plus which
/// side lies in a disk.
pub fn classify_cut(g: &EmbeddedGraph, cut: &EdgeCut) -> Result<(u8, DiskSide), CutError> {
    let (_, bedges) = g.boundary_cycle()?;
    let hits = cut.edges.iter().filter(|e| bedges.contains(e)).count();
    let kind = match hits {
        0 => 1,
        2 => 2,
        n if n % 2 == 1 => return Err(CutError::OddBoundary(n)),
        _ => 3,
    };
    let a = g.is_balanced(&cut.side);
    let b = g.is_balanced(&cut.complement);
    let disk = match (a, b) {
        (true, true) => DiskSide::Both,
        (true, false) => DiskSide::Side,
        (false, true) => DiskSide::Complement,
        (false, false) => DiskSide::Neither,
    };
    Ok((kind, disk))
}

/// Fills `cut_type` and `disk_side` in place; leaves them unset when the
/// specified face is not a cycle.
pub fn classify_in_place(g: &EmbeddedGraph, cut: &mut EdgeCut) -> Result<(), CutError> {
    match classify_cut(g, cut) {
        Ok((k, d)) => {
            cut.cut_type = Some(k);
            cut.disk_side = Some(d);
            Ok(())
        }
        Err(CutError::Graph(GraphError::BoundaryNotCycle | GraphError::NoSpecifiedFace)) => Ok(()),
        Err(e) => Err(e),
    }
}

/// Whether `A ∩ B`, `A \ B`, `B \ A` and the rest are all non-empty.
pub fn cuts_cross(c1: &EdgeCut, c2: &EdgeCut) -> bool {
    let a = &c1.side;
    let b = &c2.side;
    let all: BTreeSet<VertexId> = a.union(&c1.complement).copied().collect();
    a.intersection(b).next().is_some()
        && a.difference(b).next().is_some()
        && b.difference(a).next().is_some()
        && all.iter().any(|v| !a.contains(v) && !b.contains(v))
}

struct Dense {
    ids: Vec<VertexId>,
    // adj[i][j] = edge multiplicity, loops ignored.
    adj: Vec<Vec<u32>>,
    nbr: Vec<u64>,
}

impl Dense {
    fn new(g: &EmbeddedGraph) -> Dense {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut adj = vec![vec![0u32; n]; n];
        let mut nbr = vec![0u64; n];
        for (_, e) in g.edges() {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (index[&e.ends[0]], index[&e.ends[1]]);
            adj[a][b] += 1;
            adj[b][a] += 1;
            nbr[a] |= 1 << b;
            nbr[b] |= 1 << a;
        }
        Dense { ids, adj, nbr }
    }

    fn between(&self, a: u64, b: u64) -> usize {
        let mut total = 0;
        for i in bits(a) {
            for j in bits(b) {
                total += self.adj[i][j] as usize;
            }
        }
        total
    }

    fn connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let start = set.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let fresh = self.nbr[x] & set & !seen;
            seen |= fresh;
            stack.extend(bits(fresh));
        }
        seen == set
    }

    /// Connected, or two non-adjacent vertices.
    fn normal(&self, set: u64) -> bool {
        if set.count_ones() == 2 {
            let i = set.trailing_zeros() as usize;
            let j = 63 - set.leading_zeros() as usize;
            if self.adj[i][j] == 0 {
                return true;
            }
        }
        self.connected(set)
    }

    fn to_set(&self, m: u64) -> BTreeSet<VertexId> {
        bits(m).map(|i| self.ids[i]).collect()
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// All cuts `δ(A)` with at most `max_size` edges and both sides of order at
/// least `min_side`, where each side induces a connected subgraph or is two
/// non-adjacent vertices. Each cut is listed once by its smaller side (ties
/// go to the side holding the lowest vertex id), sorted by size then side.
pub fn enumerate_robust_cuts(
    g: &EmbeddedGraph,
    max_size: usize,
    min_side: usize,
) -> Result<Vec<EdgeCut>, CutError> {
    let n = g.vertex_count();
    if (n > ENUM_VERTEX_LIMIT && max_size > 6) || n > 64 {
        return Err(CutError::TooLarge {
            vertices: n,
            max_size,
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let d = Dense::new(g);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut found: BTreeSet<u64> = BTreeSet::new();
    let accept = |a: u64, found: &mut BTreeSet<u64>| {
        let c = full & !a;
        if a == 0 || c == 0 {
            return;
        }
        let (na, nc) = (a.count_ones() as usize, c.count_ones() as usize);
        if na < min_side || nc < min_side {
            return;
        }
        if d.between(a, c) > max_size || !d.normal(a) || !d.normal(c) {
            return;
        }
        let canon = if na < nc || (na == nc && a & 1 == 1) { a } else { c };
        found.insert(canon);
    };
    // Connected sides through vertex 0.
    grow(&d, 1, d.nbr[0] & !1, 0, max_size, &mut |a| accept(a, &mut found));
    // Vertex 0 paired with a non-neighbour.
    for j in 1..n {
        if d.adj[0][j] == 0 {
            accept(1 | (1 << j), &mut found);
        }
    }
    let mut out: Vec<EdgeCut> = found
        .into_iter()
        .map(|m| {
            let mut cut = EdgeCut::from_side(g, d.to_set(m));
            cut.robust = cut.side.len() >= 2 && cut.complement.len() >= 2;
            cut
        })
        .collect();
    for c in &mut out {
        classify_in_place(g, c)?;
    }
    out.sort_by(|x, y| x.size.cmp(&y.size).then_with(|| x.side.cmp(&y.side)));
    Ok(out)
}

/// Enumerates each connected vertex set containing `a` exactly once.
/// Vertices in `excluded` never join; their edges to the set stay in the cut.
fn grow(d: &Dense, a: u64, frontier: u64, excluded: u64, max_size: usize, visit: &mut dyn FnMut(u64)) {
    visit(a);
    let mut excluded = excluded;
    for v in bits(frontier) {
        let bit = 1u64 << v;
        let next = a | bit;
        if d.between(next, excluded) <= max_size {
            let fresh = (frontier | d.nbr[v]) & !next & !excluded & !bit;
            grow(d, next, fresh & !(excluded | bit), excluded, max_size, visit);
        }
        excluded |= bit;
    }
}
