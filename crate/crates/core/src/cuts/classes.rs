//! Validators for the PT, 3PT, FT, DTS and 3DTS graph classes.
//!
//! Every numbered condition is evaluated and each failure is reported with
//! a witness. Condition 0 is the prescription itself. DTS-style classes name
//! at most two unoriented degree-3 vertices `t` and `s`; here every
//! unoriented degree-3 vertex is taken to be one of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{boundary_connectivity, edge_connectivity, enumerate_robust_cuts, CutError, EdgeCut};
use crate::orient::Prescription;
use crate::surface::{EmbeddedGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Pt,
    ThreePt,
    Ft,
    Dts,
    ThreeDts,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Pt => "PT",
            Class::ThreePt => "3PT",
            Class::Ft => "FT",
            Class::Dts => "DTS",
            Class::ThreeDts => "3DTS",
        })
    }
}

impl FromStr for Class {
    type Err = CutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pt" => Ok(Class::Pt),
            "3pt" => Ok(Class::ThreePt),
            "ft" => Ok(Class::Ft),
            "dts" => Ok(Class::Dts),
            "3dts" => Ok(Class::ThreeDts),
            _ => Err(CutError::Invalid(format!("unknown class {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class_name: Class,
    pub holds: bool,
    pub violations: Vec<(usize, String)>,
}

fn show(set: &BTreeSet<VertexId>) -> String {
    let parts: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

struct Ctx<'a> {
    g: &'a EmbeddedGraph,
    out: Vec<(usize, String)>,
}

impl Ctx<'_> {
    fn fail(&mut self, cond: usize, why: impl Into<String>) {
        self.out.push((cond, why.into()));
    }

    fn three_connected(&mut self, cond: usize) -> Result<(), CutError> {
        if !self.g.is_connected() {
            self.fail(cond, "graph is disconnected");
        } else if self.g.vertex_count() >= 2 {
            let k = edge_connectivity(self.g)?;
            if k < 3 {
                self.fail(cond, format!("edge connectivity {k}"));
            }
        }
        Ok(())
    }

    /// Off-boundary vertices need five edge-disjoint paths to the boundary.
    fn five_paths(&mut self, cond: usize) -> Result<(), CutError> {
        let boundary = self.g.boundary_vertices()?;
        for v in self.g.vertices().filter(|v| !boundary.contains(v)) {
            let k = boundary_connectivity(self.g, v)?;
            if k < 5 {
                self.fail(cond, format!("vertex {v} has {k} paths to the boundary"));
            }
        }
        Ok(())
    }

    fn three_cuts(&self) -> Result<Vec<EdgeCut>, CutError> {
        if self.g.vertex_count() < 2 {
            return Ok(Vec::new());
        }
        Ok(enumerate_robust_cuts(self.g, 3, 1)?
            .into_iter()
            .filter(|c| c.size == 3)
            .collect())
    }

    fn on_boundary(&self, v: VertexId, boundary: &BTreeSet<VertexId>, cond: usize, what: &str) -> Option<(usize, String)> {
        (!boundary.contains(&v)).then(|| (cond, format!("{what} {v} is not on the specified face")))
    }
}

fn singleton_of(c: &EdgeCut) -> Option<VertexId> {
    if c.side.len() == 1 {
        c.side.iter().next().copied()
    } else if c.complement.len() == 1 {
        c.complement.iter().next().copied()
    } else {
        None
    }
}

/// Evaluates every numbered condition of `class` on `(g, p)`.
pub fn check_class(g: &EmbeddedGraph, p: &Prescription, class: Class) -> Result<ClassReport, CutError> {
    let mut cx = Ctx { g, out: Vec::new() };
    if !p.is_valid() {
        cx.fail(0, format!("prescription sums to {}", p.total()));
    }
    match class {
        Class::Pt | Class::ThreePt => check_pt(&mut cx, class)?,
        Class::Ft => check_ft(&mut cx)?,
        Class::Dts | Class::ThreeDts => check_dts(&mut cx, class)?,
    }
    let violations = cx.out;
    Ok(ClassReport {
        class_name: class,
        holds: violations.is_empty(),
        violations,
    })
}

/// Connected with an allowed Euler characteristic. Face-based conditions
/// are skipped when this fails.
fn surface_ok(cx: &mut Ctx, allowed: &[i64]) -> Result<bool, CutError> {
    if !cx.g.is_connected() {
        return Ok(false);
    }
    match cx.g.euler_characteristic() {
        Ok(chi) if allowed.contains(&chi) => Ok(true),
        Ok(chi) => {
            cx.fail(2, format!("Euler characteristic {chi}"));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn check_pt(cx: &mut Ctx, class: Class) -> Result<(), CutError> {
    let g = cx.g;
    if g.vertex_count() <= 2 {
        // Small graphs are in the class whenever they are 3-edge-connected.
        return cx.three_connected(1);
    }
    cx.three_connected(1)?;
    let mut faces_ok = surface_ok(cx, &[1, 2])?;
    if faces_ok && g.specified_faces().len() != 1 {
        cx.fail(2, format!("{} specified faces", g.specified_faces().len()));
        faces_ok = false;
    }
    if let Some(d) = g.directed() {
        cx.fail(2, format!("directed vertex {} present", d.vertex));
    }
    let t = g.special_t();
    if let Some(t) = t {
        if g.degree(t) != 3 {
            cx.fail(3, format!("t = {t} has degree {}", g.degree(t)));
        }
        if faces_ok {
            let boundary = g.boundary_vertices()?;
            if let Some(w) = cx.on_boundary(t, &boundary, 3, "t") {
                cx.out.push(w);
            }
        }
    }
    if class == Class::Pt {
        let cuts = cx.three_cuts()?;
        for c in &cuts {
            let at_t = t.is_some() && singleton_of(c) == t;
            if !at_t {
                cx.fail(4, format!("3-edge-cut {}", show(&c.side)));
            }
        }
    } else {
        for v in g.vertices() {
            if Some(v) != t && g.degree(v) < 4 {
                cx.fail(4, format!("vertex {v} has degree {}", g.degree(v)));
            }
        }
        if let Some(t) = t {
            for c in cx.three_cuts()? {
                let a = if c.side.contains(&t) { &c.side } else { &c.complement };
                if !g.is_balanced(a) {
                    cx.fail(4, format!("3-edge-cut side {} with t is not in a disk", show(a)));
                }
            }
        }
    }
    if faces_ok {
        cx.five_paths(5)?;
    }
    Ok(())
}

fn check_ft(cx: &mut Ctx) -> Result<(), CutError> {
    let g = cx.g;
    cx.three_connected(1)?;
    if !surface_ok(cx, &[2])? {
        return Ok(());
    }
    if g.specified_faces().len() != 2 {
        cx.fail(2, format!("{} specified faces", g.specified_faces().len()));
        return Ok(());
    }
    let faces = g.trace_faces()?;
    let idx = g.specified_face_indices(&faces)?;
    let f1: BTreeSet<VertexId> = g.walk_vertices(&faces.walks[idx[0]]).into_iter().collect();
    let f2: BTreeSet<VertexId> = g.walk_vertices(&faces.walks[idx[1]]).into_iter().collect();
    let d = g.directed().map(|s| s.vertex);
    let t = g.special_t();
    if d.is_some() && t.is_some() {
        cx.fail(2, "both d and t present");
    }
    if f1.intersection(&f2).next().is_none() {
        cx.fail(3, "specified faces share no vertex");
    }
    if let Some(spec) = g.directed() {
        let dv = spec.vertex;
        let deg = g.degree(dv);
        if !(3..=5).contains(&deg) {
            cx.fail(4, format!("d = {dv} has degree {deg}"));
        }
        if g.incident_edges(dv).iter().any(|e| !spec.arcs.contains_key(e)) {
            cx.fail(4, format!("d = {dv} is not fully oriented"));
        }
        if !f1.contains(&dv) || !f2.contains(&dv) {
            cx.fail(4, format!("d = {dv} is not on both specified faces"));
        }
    }
    if let Some(t) = t {
        if g.degree(t) != 3 {
            cx.fail(5, format!("t = {t} has degree {}", g.degree(t)));
        }
        if !f1.contains(&t) && !f2.contains(&t) {
            cx.fail(5, format!("t = {t} is not on a specified face"));
        }
    }
    let cuts = cx.three_cuts()?;
    if cuts.len() > 1 {
        cx.fail(6, format!("{} 3-edge-cuts", cuts.len()));
    }
    for c in &cuts {
        let x = singleton_of(c);
        if x.is_none() || (x != d && x != t) {
            cx.fail(6, format!("3-edge-cut {}", show(&c.side)));
        }
    }
    cx.five_paths(7)
}

fn check_dts(cx: &mut Ctx, class: Class) -> Result<(), CutError> {
    let g = cx.g;
    cx.three_connected(1)?;
    if !surface_ok(cx, &[2])? {
        return Ok(());
    }
    if g.specified_faces().len() != 1 {
        cx.fail(2, format!("{} specified faces", g.specified_faces().len()));
        return Ok(());
    }
    let boundary = g.boundary_vertices()?;
    let d = g.directed().map(|s| s.vertex);
    let cubic: BTreeSet<VertexId> = g.vertices().filter(|&v| Some(v) != d && g.degree(v) == 3).collect();
    if cubic.len() > 2 {
        cx.fail(2, format!("unoriented degree-3 vertices {}", show(&cubic)));
    }
    if let Some(spec) = g.directed() {
        let dv = spec.vertex;
        let deg = g.degree(dv);
        if !(3..=5).contains(&deg) {
            cx.fail(3, format!("d = {dv} has degree {deg}"));
        }
        if g.incident_edges(dv).iter().any(|e| !spec.arcs.contains_key(e)) {
            cx.fail(3, format!("d = {dv} is not fully oriented"));
        }
        if let Some(w) = cx.on_boundary(dv, &boundary, 3, "d") {
            cx.out.push(w);
        }
        if deg + cubic.len() > 5 {
            cx.fail(5, format!("d = {dv} has degree {deg} with {} unoriented degree-3 vertices", cubic.len()));
        }
    }
    for &v in &cubic {
        if let Some(w) = cx.on_boundary(v, &boundary, 4, "degree-3 vertex") {
            cx.out.push(w);
        }
    }
    let special: BTreeSet<VertexId> = cubic.iter().copied().chain(d).collect();
    let cuts = cx.three_cuts()?;
    if class == Class::Dts {
        if cuts.len() > 3 {
            cx.fail(6, format!("{} 3-edge-cuts", cuts.len()));
        }
        for c in &cuts {
            if !singleton_of(c).is_some_and(|x| special.contains(&x)) {
                cx.fail(6, format!("3-edge-cut {}", show(&c.side)));
            }
        }
    } else {
        for v in g.vertices() {
            if !special.contains(&v) && g.degree(v) < 4 {
                cx.fail(6, format!("vertex {v} has degree {}", g.degree(v)));
            }
        }
        if special.len() == 3 {
            for c in &cuts {
                let inside = special.iter().filter(|v| c.side.contains(v)).count();
                if inside != 1 && inside != 2 {
                    cx.fail(6, format!("3-edge-cut {} does not split the specials", show(&c.side)));
                }
            }
        }
    }
    cx.five_paths(7)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Dart, EdgeId, Sign};

    fn k4_planar() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new();
        let pairs = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            g.add_edge(EdgeId(i as u32), VertexId(a), VertexId(b), Sign::Pos);
        }
        g
    }

    #[test]
    fn unknown_class_is_an_error() {
        assert!("xyz".parse::<Class>().is_err());
        assert_eq!("3dts".parse::<Class>().unwrap(), Class::ThreeDts);
    }

    #[test]
    fn two_cubic_vertices_without_t_fail_pt() {
        let mut g = k4_planar();
        g.set_specified_faces(vec![Dart::new(EdgeId(0), 0)]).unwrap();
        let r = check_class(&g, &Prescription::zero(), Class::Pt).unwrap();
        assert!(!r.holds);
        assert!(r.violations.iter().any(|(c, _)| *c == 4));
    }

    #[test]
    fn small_graphs_escape() {
        let mut g = EmbeddedGraph::new();
        for i in 0..3 {
            g.add_edge(EdgeId(i), VertexId(0), VertexId(1), Sign::Pos);
        }
        let r = check_class(&g, &Prescription::zero(), Class::Pt).unwrap();
        assert!(r.holds, "{:?}", r.violations);
    }
}
