//! Hybrid solver for valid orientations.
//!
//! Small instances go straight to the oracle. Larger ones are reduced by
//! orienting and deleting the directed vertex, contracting one side of a
//! small edge cut, splitting a doubled boundary vertex, or running a greedy
//! schedule; what is left falls back to the oracle below the threshold and is
//! refused above it.
//!
//! Every step is recorded with a digest of the graph it leaves on top of a
//! stack of working graphs, so a trace can be replayed from the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cuts::enumerate_robust_cuts;
use crate::families::{gen_a, gen_circulant_b, lemma4_schedule};
use crate::orient::{
    greedy_direct_and_delete, is_valid_orientation, oracle_solve, transfer_orientation, z3, ArcDir,
    DirectedVertexSpec, OrientError, Orientation, Prescription, ORACLE_LIMIT,
};
use crate::pgr::serialize_pgr;
use crate::surface::{DeleteTarget, EdgeId, EmbeddedGraph, GraphError, VertexId};

/// Instances with at most this many free edges skip the reductions.
pub const EAGER_LIMIT: usize = 12;
/// Largest cut the solver contracts across.
pub const MAX_CUT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    ContractSide,
    TransferOrientation,
    LiftPair,
    OrientDeleteVertex,
    DeleteBoundaryEdge,
    PlanarizeChord,
    SplitBoundaryVertex,
    OracleCall,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepArg {
    Vertex(VertexId),
    Edge(EdgeId),
    Arc(EdgeId, ArcDir),
}

impl fmt::Display for StepArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepArg::Vertex(v) => write!(f, "v{v}"),
            StepArg::Edge(e) => write!(f, "e{e}"),
            StepArg::Arc(e, d) => write!(f, "e{e}:{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub args: Vec<StepArg>,
    /// First 16 hex digits of the SHA-256 of the resulting `.pgr` text.
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    Valid(Orientation),
    None,
    Refused(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub outcome: TraceOutcome,
}

impl ReductionTrace {
    pub fn orientation(&self) -> Option<&Orientation> {
        match &self.outcome {
            TraceOutcome::Valid(o) => Some(o),
            _ => None,
        }
    }

    pub fn kinds(&self) -> Vec<StepKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let args: Vec<String> = s.args.iter().map(|a| a.to_string()).collect();
            writeln!(f, "step {} {} args={} digest={}", i + 1, s.kind, args.join(","), s.digest)?;
        }
        let o = match self.outcome {
            TraceOutcome::Valid(_) => "valid",
            TraceOutcome::None => "none",
            TraceOutcome::Refused(_) => "refused",
        };
        writeln!(f, "outcome {o}")
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Free edges above which the oracle is not called.
    pub oracle_threshold: usize,
    /// Free edges at or below which the oracle is called first.
    pub eager_threshold: usize,
    pub max_cut: usize,
    /// Lifts and vertex order for the greedy step. When absent the solver
    /// looks for a known family.
    pub schedule: Option<(Vec<(EdgeId, EdgeId)>, Vec<VertexId>)>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            oracle_threshold: ORACLE_LIMIT,
            eager_threshold: EAGER_LIMIT,
            max_cut: MAX_CUT,
            schedule: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Orient(#[from] OrientError),
    #[error("solver produced an orientation that does not validate")]
    Unsound,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {0}: digest mismatch")]
    Mismatch(usize),
    #[error("step {step}: {msg}")]
    Failed { step: usize, msg: String },
    #[error("outcome orientation does not validate")]
    Outcome,
}

/// A graph and the prescription still to be met on it.
#[derive(Debug, Clone)]
struct State {
    g: EmbeddedGraph,
    p: Prescription,
}

impl State {
    fn digest(&self) -> String {
        let text = serialize_pgr(&self.g, Some(&self.p.on(&self.g)));
        let h = Sha256::digest(text.as_bytes());
        h.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    fn free_edges(&self) -> usize {
        let fixed = self.g.directed().map_or(0, |d| d.arcs.len());
        self.g.edge_count() - fixed
    }
}

fn contract(st: &State, side: &BTreeSet<VertexId>) -> Result<State, String> {
    if side.len() < 2 {
        return Err("side has fewer than two vertices".into());
    }
    let x = st.g.next_vertex_id();
    let mut g = st.g.contract_subgraph(side).map_err(|e| e.to_string())?;
    if g.specified_faces().is_empty() {
        g.anchor_at_vertex(x).map_err(|e| e.to_string())?;
    }
    let mut p = st.p.on(&g);
    let sum: i64 = side.iter().map(|&v| st.p.get(v) as i64).sum();
    p.0.insert(x, z3(sum));
    Ok(State { g, p })
}

/// `G` with the complement of `side` contracted to a vertex carrying the
/// given arcs.
fn remainder(st: &State, side: &BTreeSet<VertexId>, arcs: BTreeMap<EdgeId, ArcDir>) -> Result<State, String> {
    let comp: BTreeSet<VertexId> = st.g.vertices().filter(|v| !side.contains(v)).collect();
    let x = st.g.next_vertex_id();
    let mut r = contract(st, &comp)?;
    let incident: BTreeSet<EdgeId> = r.g.incident_edges(x).into_iter().collect();
    if incident != arcs.keys().copied().collect() {
        return Err("arcs do not match the cut".into());
    }
    r.g.set_directed(Some(DirectedVertexSpec { vertex: x, arcs }));
    Ok(r)
}

fn orient_delete(st: &State, v: VertexId, arcs: &BTreeMap<EdgeId, ArcDir>) -> Result<State, String> {
    let incident: BTreeSet<EdgeId> = st.g.incident_edges(v).into_iter().collect();
    if incident != arcs.keys().copied().collect() {
        return Err(format!("arcs do not cover the edges at vertex {v}"));
    }
    let g = st
        .g
        .delete_unchecked(DeleteTarget::Vertex(v))
        .map_err(|e| e.to_string())?;
    let mut p = st.p.on(&g);
    for (&e, &dir) in arcs {
        let edge = st.g.edge(e).map_err(|e| e.to_string())?;
        if edge.is_loop() {
            continue;
        }
        let n = edge.other(v);
        let shift = match dir {
            ArcDir::Out => -1,
            ArcDir::In => 1,
        };
        p.0.insert(n, z3(p.get(n) as i64 + shift));
    }
    Ok(State { g, p })
}

fn lift(st: &State, e1: EdgeId, e2: EdgeId) -> Result<State, String> {
    let a = st.g.edge(e1).map_err(|e| e.to_string())?;
    let b = st.g.edge(e2).map_err(|e| e.to_string())?;
    let v = a
        .ends
        .iter()
        .copied()
        .find(|&x| b.touches(x))
        .ok_or_else(|| format!("edges {e1} and {e2} are not adjacent"))?;
    let g = st.g.lift_pair(e1, e2, v).map_err(|e| e.to_string())?;
    Ok(State { g, p: st.p.clone() })
}

fn split(st: &State, v: VertexId) -> Result<State, String> {
    let g = st
        .g
        .split_doubled_boundary_vertex(v)
        .map_err(|e| e.to_string())?;
    Ok(State { g, p: st.p.clone() })
}

fn arcs_at(g: &EmbeddedGraph, o: &Orientation, v: VertexId) -> Option<BTreeMap<EdgeId, ArcDir>> {
    g.incident_edges(v)
        .into_iter()
        .map(|e| {
            let t = o.tail(e)?;
            Some((e, if t == v { ArcDir::Out } else { ArcDir::In }))
        })
        .collect()
}

fn arc_args(arcs: &BTreeMap<EdgeId, ArcDir>) -> Vec<StepArg> {
    arcs.iter().map(|(&e, &d)| StepArg::Arc(e, d)).collect()
}

fn same_edges(a: &EmbeddedGraph, b: &EmbeddedGraph) -> bool {
    a.vertices().eq(b.vertices())
        && a.edge_count() == b.edge_count()
        && a.edges().zip(b.edges()).all(|((i, x), (j, y))| {
            i == j && (x.ends == y.ends || x.ends == [y.ends[1], y.ends[0]])
        })
}

type Schedule = (Vec<(EdgeId, EdgeId)>, Vec<VertexId>);

/// The greedy schedule when `g` is `B_i` or `A_i` with the generator's ids.
fn recognize(g: &EmbeddedGraph) -> Option<Schedule> {
    if g.directed().is_some() {
        return None;
    }
    let n = g.vertex_count() as i64;
    if gen_circulant_b(n).is_ok_and(|b| same_edges(g, &b)) {
        return lemma4_schedule(n, false).ok();
    }
    if gen_a(n - 1).is_ok_and(|a| same_edges(g, &a)) {
        return lemma4_schedule(n - 1, true).ok();
    }
    None
}

enum Attempt {
    Found(Orientation),
    None,
    Refused(String),
}

struct Solver<'c> {
    cfg: &'c SolverConfig,
    steps: Vec<ReductionStep>,
}

impl Solver<'_> {
    fn record(&mut self, kind: StepKind, args: Vec<StepArg>, st: &State) {
        self.steps.push(ReductionStep {
            kind,
            args,
            digest: st.digest(),
        });
    }

    fn solve(&mut self, st: &State) -> Result<Attempt, SolveError> {
        if st.free_edges() <= self.cfg.eager_threshold {
            return self.oracle(st);
        }
        if let Some(d) = st.g.directed().cloned() {
            return self.delete_directed(st, &d);
        }
        for step in [Self::try_cut, Self::try_split, Self::try_greedy] {
            let mark = self.steps.len();
            match step(self, st)? {
                Some(Attempt::Refused(_)) | None => self.steps.truncate(mark),
                Some(a) => return Ok(a),
            }
        }
        self.oracle(st)
    }

    fn oracle(&mut self, st: &State) -> Result<Attempt, SolveError> {
        match oracle_solve(&st.g, &st.p, &Orientation::new(), self.cfg.oracle_threshold) {
            Err(OrientError::TooLarge { undirected, limit }) => Ok(Attempt::Refused(format!(
                "{undirected} free edges exceed the oracle threshold {limit} and no reduction applies"
            ))),
            Err(e) => Err(e.into()),
            Ok(found) => {
                self.record(StepKind::OracleCall, Vec::new(), st);
                Ok(match found {
                    Some(o) => Attempt::Found(o),
                    None => Attempt::None,
                })
            }
        }
    }

    fn delete_directed(&mut self, st: &State, d: &DirectedVertexSpec) -> Result<Attempt, SolveError> {
        if d.residue() != st.p.get(d.vertex) {
            return self.oracle(st);
        }
        let next = match orient_delete(st, d.vertex, &d.arcs) {
            Ok(s) => s,
            Err(_) => return self.oracle(st),
        };
        let mut args = vec![StepArg::Vertex(d.vertex)];
        args.extend(arc_args(&d.arcs));
        self.record(StepKind::OrientDeleteVertex, args, &next);
        Ok(match self.solve(&next)? {
            Attempt::Found(mut o) => {
                for &e in d.arcs.keys() {
                    if let Some(t) = d.tail(&st.g, e) {
                        o.direct(e, t);
                    }
                }
                Attempt::Found(o)
            }
            other => other,
        })
    }

    /// Side of a small cut to contract: both sides connected, the contracted
    /// one free of `t`, smaller first.
    fn pick_side(&self, st: &State) -> Option<BTreeSet<VertexId>> {
        if !st.g.is_connected() {
            return None;
        }
        let cuts = enumerate_robust_cuts(&st.g, self.cfg.max_cut, 2).ok()?;
        let t = st.g.special_t();
        cuts.into_iter().find_map(|c| {
            let connected = |s: &BTreeSet<VertexId>| st.g.components(Some(s)).len() == 1;
            if !connected(&c.side) || !connected(&c.complement) {
                return None;
            }
            if t.is_some_and(|t| c.side.contains(&t)) {
                Some(c.complement)
            } else {
                Some(c.side)
            }
        })
    }

    fn try_cut(&mut self, st: &State) -> Result<Option<Attempt>, SolveError> {
        let Some(side) = self.pick_side(st) else {
            return Ok(None);
        };
        let Ok(small) = contract(st, &side) else {
            return Ok(None);
        };
        self.record(
            StepKind::ContractSide,
            side.iter().map(|&v| StepArg::Vertex(v)).collect(),
            &small,
        );
        let outer = match self.solve(&small)? {
            Attempt::Found(o) => o,
            other => return Ok(Some(other)),
        };
        let tr = transfer_orientation(&st.g, &side, &outer)?;
        let args = arc_args(&tr.cut_arcs);
        let Ok(rest) = remainder(st, &side, tr.cut_arcs) else {
            return Ok(None);
        };
        self.record(StepKind::TransferOrientation, args, &rest);
        let inner = match self.solve(&rest)? {
            Attempt::Found(o) => o,
            _ => return Ok(None),
        };
        let mut o = tr.partial;
        for (e, edge) in st.g.edges() {
            if side.contains(&edge.ends[0]) && side.contains(&edge.ends[1]) {
                match inner.tail(e) {
                    Some(t) => o.direct(e, t),
                    None => return Ok(None),
                }
            }
        }
        o.fixed.clear();
        Ok(is_valid_orientation(&st.g, &st.p, &o)?.then_some(Attempt::Found(o)))
    }

    fn try_split(&mut self, st: &State) -> Result<Option<Attempt>, SolveError> {
        if st.g.specified_faces().len() != 1 || st.g.euler_characteristic().ok() != Some(1) {
            return Ok(None);
        }
        let Ok(walk) = st.g.specified_walk() else {
            return Ok(None);
        };
        let mut seen = BTreeMap::<VertexId, usize>::new();
        for v in st.g.walk_vertices(&walk) {
            *seen.entry(v).or_default() += 1;
        }
        for (&v, &n) in &seen {
            if n < 2 {
                continue;
            }
            if let Ok(next) = split(st, v) {
                self.record(StepKind::SplitBoundaryVertex, vec![StepArg::Vertex(v)], &next);
                return self.solve(&next).map(Some);
            }
        }
        Ok(None)
    }

    fn try_greedy(&mut self, st: &State) -> Result<Option<Attempt>, SolveError> {
        let Some((lifts, order)) = self.cfg.schedule.clone().or_else(|| recognize(&st.g)) else {
            return Ok(None);
        };
        let Ok(o) = greedy_direct_and_delete(&st.g, &st.p, &lifts, &order) else {
            return Ok(None);
        };
        // Replay the greedy run as steps, carrying directions onto lifted edges.
        let mut dirs = o.clone();
        let mut cur = st.clone();
        for &(e1, e2) in &lifts {
            let new = cur.g.next_edge_id();
            let Ok(next) = lift(&cur, e1, e2) else {
                return Ok(None);
            };
            let Ok(ne) = next.g.edge(new) else {
                return Ok(None);
            };
            let Some(t1) = dirs.tail(e1) else {
                return Ok(None);
            };
            // u -> v -> w lifts to u -> w.
            let tail = if t1 == ne.ends[0] { ne.ends[0] } else { ne.ends[1] };
            dirs.direct(new, tail);
            self.record(
                StepKind::LiftPair,
                vec![StepArg::Edge(e1), StepArg::Edge(e2)],
                &next,
            );
            cur = next;
        }
        for &v in &order {
            if !cur.g.has_vertex(v) {
                continue;
            }
            let Some(arcs) = arcs_at(&cur.g, &dirs, v) else {
                return Ok(None);
            };
            let Ok(next) = orient_delete(&cur, v, &arcs) else {
                return Ok(None);
            };
            let mut args = vec![StepArg::Vertex(v)];
            args.extend(arc_args(&arcs));
            self.record(StepKind::OrientDeleteVertex, args, &next);
            cur = next;
        }
        Ok(is_valid_orientation(&st.g, &st.p, &o)?.then_some(Attempt::Found(o)))
    }
}

fn start(g: &EmbeddedGraph, p: &Prescription, spec: Option<&DirectedVertexSpec>) -> State {
    let mut g = g.clone();
    if let Some(s) = spec {
        g.set_directed(Some(s.clone()));
    }
    State { p: p.on(&g), g }
}

/// Finds a valid orientation of `g` for `p`, extending `spec` when given.
pub fn solve(
    g: &EmbeddedGraph,
    p: &Prescription,
    spec: Option<&DirectedVertexSpec>,
    cfg: &SolverConfig,
) -> Result<ReductionTrace, SolveError> {
    let st = start(g, p, spec);
    if !st.p.is_valid() {
        return Ok(ReductionTrace {
            steps: Vec::new(),
            outcome: TraceOutcome::None,
        });
    }
    let mut s = Solver {
        cfg,
        steps: Vec::new(),
    };
    let outcome = match s.solve(&st)? {
        Attempt::Found(mut o) => {
            o.fixed = st.g.directed().map(|d| d.arcs.keys().copied().collect()).unwrap_or_default();
            if !is_valid_orientation(&st.g, p, &o)? {
                return Err(SolveError::Unsound);
            }
            TraceOutcome::Valid(o)
        }
        Attempt::None => TraceOutcome::None,
        Attempt::Refused(why) => TraceOutcome::Refused(why),
    };
    Ok(ReductionTrace {
        steps: s.steps,
        outcome,
    })
}

struct Frame {
    st: State,
    side: Option<BTreeSet<VertexId>>,
}

fn vertex_args(step: usize, args: &[StepArg]) -> Result<Vec<VertexId>, ReplayError> {
    args.iter()
        .map(|a| match a {
            StepArg::Vertex(v) => Ok(*v),
            _ => Err(ReplayError::Failed {
                step,
                msg: format!("expected a vertex, found {a}"),
            }),
        })
        .collect()
}

fn arc_map(step: usize, args: &[StepArg]) -> Result<BTreeMap<EdgeId, ArcDir>, ReplayError> {
    args.iter()
        .map(|a| match a {
            StepArg::Arc(e, d) => Ok((*e, *d)),
            _ => Err(ReplayError::Failed {
                step,
                msg: format!("expected an arc, found {a}"),
            }),
        })
        .collect()
}

fn apply(frames: &mut Vec<Frame>, step: usize, s: &ReductionStep) -> Result<(), ReplayError> {
    let failed = |msg: String| ReplayError::Failed { step, msg };
    let top = frames.last_mut().ok_or_else(|| failed("no graph left".into()))?;
    match s.kind {
        StepKind::ContractSide => {
            let side: BTreeSet<VertexId> = vertex_args(step, &s.args)?.into_iter().collect();
            let st = contract(&top.st, &side).map_err(failed)?;
            top.side = Some(side);
            frames.push(Frame { st, side: None });
        }
        StepKind::TransferOrientation => {
            let arcs = arc_map(step, &s.args)?;
            if frames.len() < 2 {
                return Err(failed("transfer without a contraction".into()));
            }
            frames.pop();
            let top = frames.last_mut().unwrap();
            let side = top
                .side
                .take()
                .ok_or_else(|| failed("transfer without a contraction".into()))?;
            top.st = remainder(&top.st, &side, arcs).map_err(failed)?;
        }
        StepKind::LiftPair => match s.args.as_slice() {
            [StepArg::Edge(a), StepArg::Edge(b)] => top.st = lift(&top.st, *a, *b).map_err(failed)?,
            _ => return Err(failed("expected two edges".into())),
        },
        StepKind::OrientDeleteVertex => match s.args.split_first() {
            Some((StepArg::Vertex(v), rest)) => {
                let arcs = arc_map(step, rest)?;
                top.st = orient_delete(&top.st, *v, &arcs).map_err(failed)?;
            }
            _ => return Err(failed("expected a vertex and its arcs".into())),
        },
        StepKind::SplitBoundaryVertex => match s.args.as_slice() {
            [StepArg::Vertex(v)] => top.st = split(&top.st, *v).map_err(failed)?,
            _ => return Err(failed("expected one vertex".into())),
        },
        StepKind::OracleCall => {}
        StepKind::DeleteBoundaryEdge | StepKind::PlanarizeChord => {
            return Err(failed(format!("{} is not a solver step", s.kind)));
        }
    }
    let top = frames.last().unwrap();
    if top.st.digest() != s.digest {
        return Err(ReplayError::Mismatch(step));
    }
    Ok(())
}

/// Re-executes `trace` from `g`, checking each digest and the final
/// orientation. Steps are numbered from 1.
pub fn replay(
    g: &EmbeddedGraph,
    p: &Prescription,
    spec: Option<&DirectedVertexSpec>,
    trace: &ReductionTrace,
) -> Result<(), ReplayError> {
    let st = start(g, p, spec);
    let mut frames = vec![Frame { st, side: None }];
    for (i, s) in trace.steps.iter().enumerate() {
        apply(&mut frames, i + 1, s)?;
    }
    if let TraceOutcome::Valid(o) = &trace.outcome {
        let root = start(g, p, spec);
        if is_valid_orientation(&root.g, p, o) != Ok(true) {
            return Err(ReplayError::Outcome);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gen_counterexample;
    use crate::surface::{Dart, Sign};

    fn wheel(k: u32) -> EmbeddedGraph {
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
        g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)]).unwrap();
        g
    }

    fn some_p(g: &EmbeddedGraph, seed: u64) -> Prescription {
        let vs: Vec<VertexId> = g.vertices().collect();
        let mut p = Prescription::zero();
        let mut x = seed;
        for &v in &vs[1..] {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.set(v, ((x >> 33) % 3) as i8 - 1).unwrap();
        }
        p.set(vs[0], z3(-p.total())).unwrap();
        p
    }

    #[test]
    fn circulant_uses_the_family_schedule() {
        let g = gen_circulant_b(7).unwrap();
        for seed in 0..5 {
            let p = some_p(&g, seed);
            let t = solve(&g, &p, None, &SolverConfig::default()).unwrap();
            assert!(t.orientation().is_some());
            let k = t.kinds();
            assert_eq!(k[0], StepKind::LiftPair);
            assert!(k[1..].iter().all(|&s| s == StepKind::OrientDeleteVertex));
            assert_eq!(replay(&g, &p, None, &t), Ok(()));
        }
    }

    #[test]
    fn counterexample_has_no_orientation() {
        let (g, p, d) = gen_counterexample(0).unwrap();
        let t = solve(&g, &p, Some(&d), &SolverConfig::default()).unwrap();
        assert_eq!(t.outcome, TraceOutcome::None);
        assert_eq!(t.kinds().last(), Some(&StepKind::OracleCall));
        assert_eq!(replay(&g, &p, Some(&d), &t), Ok(()));
    }

    // Two copies of K5 joined by a perfect matching.
    fn twin_k5() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        let mut id = 0;
        for base in [0, 5] {
            for a in 0..5 {
                for b in a + 1..5 {
                    g.add_edge(EdgeId(id), VertexId(base + a), VertexId(base + b), Sign::Pos);
                    id += 1;
                }
            }
        }
        for a in 0..5 {
            g.add_edge(EdgeId(id), VertexId(a), VertexId(a + 5), Sign::Pos);
            id += 1;
        }
        g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)]).unwrap();
        g
    }

    #[test]
    fn wheel_rim_falls_back_when_transfer_does_not_extend() {
        let g = wheel(8);
        for seed in 0..5 {
            let p = some_p(&g, seed);
            let t = solve(&g, &p, None, &SolverConfig::default()).unwrap();
            let o = t.orientation().unwrap();
            assert_eq!(is_valid_orientation(&g, &p, o), Ok(true));
            assert_eq!(replay(&g, &p, None, &t), Ok(()));
        }
    }

    #[test]
    fn small_cut_is_contracted_and_transferred() {
        let g = twin_k5();
        for seed in 0..5 {
            let p = some_p(&g, seed);
            let t = solve(&g, &p, None, &SolverConfig::default()).unwrap();
            let k = t.kinds();
            assert_eq!(k[0], StepKind::ContractSide);
            assert!(k.contains(&StepKind::TransferOrientation));
            let o = t.orientation().unwrap();
            assert_eq!(is_valid_orientation(&g, &p, o), Ok(true));
            assert_eq!(replay(&g, &p, None, &t), Ok(()));
        }
    }

    #[test]
    fn perturbed_graph_fails_at_step_one() {
        let g = gen_circulant_b(7).unwrap();
        let p = some_p(&g, 3);
        let t = solve(&g, &p, None, &SolverConfig::default()).unwrap();
        let mut h = g.clone();
        h.switch_vertex(VertexId(3));
        assert_eq!(replay(&h, &p, None, &t), Err(ReplayError::Mismatch(1)));
    }

    #[test]
    fn refuses_above_threshold() {
        let g = gen_circulant_b(7).unwrap();
        let mut h = g.clone();
        // Same edges under new ids, so the family is not recognised.
        h.switch_vertex(VertexId(1));
        let cfg = SolverConfig {
            oracle_threshold: 10,
            eager_threshold: 4,
            ..SolverConfig::default()
        };
        let mut g2 = EmbeddedGraph::new();
        for (id, e) in h.edges() {
            g2.add_edge(EdgeId(id.0 + 100), e.ends[0], e.ends[1], e.sign);
        }
        let t = solve(&g2, &Prescription::zero(), None, &cfg).unwrap();
        assert!(matches!(t.outcome, TraceOutcome::Refused(_)));
        assert!(t.to_string().ends_with("outcome refused\n"));
    }

    #[test]
    fn trace_text_format() {
        let g = wheel(4);
        let t = solve(&g, &Prescription::zero(), None, &SolverConfig::default()).unwrap();
        let s = t.to_string();
        let first = s.lines().next().unwrap();
        assert!(first.starts_with("step 1 OracleCall args= digest="));
        assert_eq!(first.len(), "step 1 OracleCall args= digest=".len() + 16);
        assert_eq!(s.lines().last(), Some("outcome valid"));
    }
}
