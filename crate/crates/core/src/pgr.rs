//! The `.pgr` graph format and the orientation file format.
//!
//! ```text
//! pgr 1
//! vertex 0
//! vertex 1
//! edge 0 0 1 +1
//! rot 0 0.0
//! rot 1 0.1
//! face 0.0
//! p 0 0
//! ```
//!
//! A vertex without a `rot` line gets its darts in edge declaration order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::orient::{ArcDir, DirectedVertexSpec, Orientation, Prescription};
use crate::surface::{Dart, EdgeId, EmbeddedGraph, Sign, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgrDocument {
    pub graph: EmbeddedGraph,
    pub prescription: Option<Prescription>,
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .or_else(|_| err(line, format!("bad {what} {tok:?}")))
}

fn dart(tok: &str, line: usize) -> Result<Dart, ParseError> {
    let Some((e, end)) = tok.split_once('.') else {
        return err(line, format!("bad dart {tok:?}"));
    };
    let end: u8 = num(end, line, "dart end")?;
    if end > 1 {
        return err(line, format!("bad dart end in {tok:?}"));
    }
    Ok(Dart::new(EdgeId(num(e, line, "edge id")?), end))
}

fn residue(tok: &str, line: usize) -> Result<i8, ParseError> {
    let r: i8 = num(tok.trim_start_matches('+'), line, "residue")?;
    if !(-1..=1).contains(&r) {
        return err(line, format!("residue {r} not in {{-1,0,1}}"));
    }
    Ok(r)
}

/// Lines with comments stripped, numbered from 1, blank lines dropped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub fn parse_pgr(text: &str) -> Result<PgrDocument, ParseError> {
    let mut g = EmbeddedGraph::new();
    let mut header = false;
    let mut declared: BTreeSet<VertexId> = BTreeSet::new();
    let mut edge_order: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
    let mut rots: BTreeMap<VertexId, (usize, Vec<Dart>)> = BTreeMap::new();
    let mut faces = Vec::new();
    let mut t = None;
    let mut d: Option<(usize, VertexId)> = None;
    let mut arcs: BTreeMap<EdgeId, ArcDir> = BTreeMap::new();
    let mut p: Option<Prescription> = None;
    let mut last = 0;
    for (ln, toks) in lines(text) {
        last = ln;
        if !header {
            if toks != ["pgr", "1"] {
                return err(ln, "expected header \"pgr 1\"");
            }
            header = true;
            continue;
        }
        let arity = |n: usize| -> Result<(), ParseError> {
            if toks.len() != n {
                return err(ln, format!("{} takes {} fields", toks[0], n - 1));
            }
            Ok(())
        };
        match toks[0] {
            "vertex" => {
                arity(2)?;
                let v = VertexId(num(toks[1], ln, "vertex id")?);
                if !declared.insert(v) {
                    return err(ln, format!("vertex {v} declared twice"));
                }
                g.add_vertex(v);
            }
            "edge" => {
                arity(5)?;
                let id = EdgeId(num(toks[1], ln, "edge id")?);
                let u = VertexId(num(toks[2], ln, "vertex id")?);
                let v = VertexId(num(toks[3], ln, "vertex id")?);
                let sign = match toks[4] {
                    "+1" | "1" => Sign::Pos,
                    "-1" => Sign::Neg,
                    s => return err(ln, format!("bad sign {s:?}")),
                };
                for x in [u, v] {
                    if !declared.contains(&x) {
                        return err(ln, format!("edge {id} uses undeclared vertex {x}"));
                    }
                }
                if g.edge(id).is_ok() {
                    return err(ln, format!("edge {id} declared twice"));
                }
                g.insert_edge_raw(id, u, v, sign);
                edge_order.push((id, u, v));
            }
            "rot" => {
                if toks.len() < 2 {
                    return err(ln, "rot needs a vertex");
                }
                let v = VertexId(num(toks[1], ln, "vertex id")?);
                if !declared.contains(&v) {
                    return err(ln, format!("rot for undeclared vertex {v}"));
                }
                let ds = toks[2..].iter().map(|x| dart(x, ln)).collect::<Result<Vec<_>, _>>()?;
                if rots.insert(v, (ln, ds)).is_some() {
                    return err(ln, format!("rot for vertex {v} given twice"));
                }
            }
            "face" => {
                arity(2)?;
                faces.push((ln, dart(toks[1], ln)?));
            }
            "tvertex" => {
                arity(2)?;
                t = Some((ln, VertexId(num(toks[1], ln, "vertex id")?)));
            }
            "dvertex" => {
                arity(2)?;
                d = Some((ln, VertexId(num(toks[1], ln, "vertex id")?)));
            }
            "darc" => {
                arity(3)?;
                let e = EdgeId(num(toks[1], ln, "edge id")?);
                let dir = match toks[2] {
                    "in" => ArcDir::In,
                    "out" => ArcDir::Out,
                    s => return err(ln, format!("bad arc direction {s:?}")),
                };
                arcs.insert(e, dir);
            }
            "p" => {
                arity(3)?;
                let v = VertexId(num(toks[1], ln, "vertex id")?);
                let r = residue(toks[2], ln)?;
                p.get_or_insert_with(Prescription::zero).0.insert(v, r);
            }
            other => return err(ln, format!("unknown declaration {other:?}")),
        }
    }
    if !header {
        return err(1, "empty file");
    }
    // Default rotations follow declaration order.
    let mut default: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    for &(id, u, v) in &edge_order {
        default.entry(u).or_default().push(Dart::new(id, 0));
        default.entry(v).or_default().push(Dart::new(id, 1));
    }
    for v in declared.iter().copied() {
        let rot = match rots.remove(&v) {
            Some((_, r)) => r,
            None => default.remove(&v).unwrap_or_default(),
        };
        g.set_rotation(v, rot);
    }
    if let Err(e) = g.validate() {
        let ln = match &e {
            crate::surface::GraphError::MalformedRotation { vertex, .. } => {
                rots_line(text, *vertex).unwrap_or(last)
            }
            _ => last,
        };
        return err(ln, e.to_string());
    }
    if faces.len() > 2 {
        return err(faces[2].0, "at most two face anchors");
    }
    for &(ln, a) in &faces {
        if g.edge(a.edge).is_err() {
            return err(ln, format!("face anchor on unknown edge {}", a.edge));
        }
    }
    g.set_specified_faces(faces.iter().map(|f| f.1).collect())
        .or_else(|e| err(last, e.to_string()))?;
    if let Some((ln, v)) = t {
        if !declared.contains(&v) {
            return err(ln, format!("tvertex {v} undeclared"));
        }
        g.set_special_t(Some(v));
    }
    match d {
        Some((ln, v)) => {
            if !declared.contains(&v) {
                return err(ln, format!("dvertex {v} undeclared"));
            }
            for e in arcs.keys() {
                match g.edge(*e) {
                    Ok(edge) if edge.touches(v) => {}
                    _ => return err(ln, format!("darc {e} is not incident with dvertex {v}")),
                }
            }
            g.set_directed(Some(DirectedVertexSpec { vertex: v, arcs }));
        }
        None if !arcs.is_empty() => return err(last, "darc without dvertex"),
        None => {}
    }
    if let Some(p) = &p {
        for v in p.0.keys() {
            if !declared.contains(v) {
                return err(last, format!("prescription for undeclared vertex {v}"));
            }
        }
    }
    Ok(PgrDocument {
        graph: g,
        prescription: p,
    })
}

fn rots_line(text: &str, v: VertexId) -> Option<usize> {
    lines(text)
        .find(|(_, t)| t.len() >= 2 && t[0] == "rot" && t[1] == v.0.to_string())
        .map(|(l, _)| l)
}

pub fn serialize_pgr(g: &EmbeddedGraph, p: Option<&Prescription>) -> String {
    let mut s = String::from("pgr 1\n");
    for v in g.vertices() {
        writeln!(s, "vertex {v}").unwrap();
    }
    for (id, e) in g.edges() {
        writeln!(s, "edge {id} {} {} {}", e.ends[0], e.ends[1], e.sign).unwrap();
    }
    for v in g.vertices() {
        write!(s, "rot {v}").unwrap();
        for d in g.rotation(v).unwrap() {
            write!(s, " {d}").unwrap();
        }
        s.push('\n');
    }
    for a in g.specified_faces() {
        writeln!(s, "face {a}").unwrap();
    }
    if let Some(t) = g.special_t() {
        writeln!(s, "tvertex {t}").unwrap();
    }
    if let Some(d) = g.directed() {
        writeln!(s, "dvertex {}", d.vertex).unwrap();
        for (e, dir) in &d.arcs {
            writeln!(s, "darc {e} {dir}").unwrap();
        }
    }
    if let Some(p) = p {
        for (v, r) in &p.0 {
            writeln!(s, "p {v} {r}").unwrap();
        }
    }
    s
}

/// Orientation file: `<edge> <tail>` per line, optionally `p <v> <r>` lines.
pub fn parse_orientation(text: &str) -> Result<(Orientation, Option<Prescription>), ParseError> {
    let mut o = Orientation::new();
    let mut p: Option<Prescription> = None;
    for (ln, toks) in lines(text) {
        match toks.as_slice() {
            ["p", v, r] => {
                let v = VertexId(num(v, ln, "vertex id")?);
                p.get_or_insert_with(Prescription::zero).0.insert(v, residue(r, ln)?);
            }
            [e, t] => {
                let e = EdgeId(num(e, ln, "edge id")?);
                if o.tails.insert(e, VertexId(num(t, ln, "vertex id")?)).is_some() {
                    return err(ln, format!("edge {e} listed twice"));
                }
            }
            _ => return err(ln, "expected \"<edge> <tail>\" or \"p <v> <r>\""),
        }
    }
    Ok((o, p))
}

pub fn serialize_orientation(o: &Orientation, p: Option<&Prescription>) -> String {
    let mut s = String::new();
    for (e, t) in &o.tails {
        writeln!(s, "{e} {t}").unwrap();
    }
    if let Some(p) = p {
        for (v, r) in &p.0 {
            writeln!(s, "p {v} {r}").unwrap();
        }
    }
    s
}

pub fn serialize_flow(flow: &BTreeMap<EdgeId, u8>) -> String {
    let mut s = String::new();
    for (e, x) in flow {
        writeln!(s, "{e} {x}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_circulant_b, gen_counterexample};

    #[test]
    fn round_trip_families() {
        let b = gen_circulant_b(7).unwrap();
        let doc = parse_pgr(&serialize_pgr(&b, None)).unwrap();
        assert_eq!(doc.graph, b);
        assert_eq!(doc.prescription, None);
        let (g, p, _) = gen_counterexample(1).unwrap();
        let text = serialize_pgr(&g, Some(&p));
        let doc = parse_pgr(&text).unwrap();
        assert_eq!(doc.graph, g);
        assert_eq!(doc.prescription, Some(p.clone()));
        assert_eq!(serialize_pgr(&doc.graph, doc.prescription.as_ref()), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_pgr("pgr 1\nvertex 0\n# note\nedge 0 0 9 +1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_pgr("pgr 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_pgr("pgr 1\nvertex 0\nvertex 1\nedge 0 0 1 +1\nrot 0\n").unwrap_err();
        assert_eq!(e.line, 5);
        let e = parse_pgr("pgr 1\nvertex 0\np 0 2\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn default_rotation_and_comments() {
        let doc = parse_pgr("pgr 1 # header\nvertex 0\nvertex 1\nedge 3 0 1 -1\n").unwrap();
        assert_eq!(doc.graph.rotation(VertexId(1)).unwrap(), &[Dart::new(EdgeId(3), 1)]);
        assert_eq!(doc.graph.edge(EdgeId(3)).unwrap().sign, Sign::Neg);
    }

    #[test]
    fn orientation_round_trip() {
        let mut o = Orientation::new();
        o.direct(EdgeId(2), VertexId(5));
        o.direct(EdgeId(0), VertexId(1));
        let mut p = Prescription::zero();
        p.0.insert(VertexId(5), -1);
        let (o2, p2) = parse_orientation(&serialize_orientation(&o, Some(&p))).unwrap();
        assert_eq!(o2.tails, o.tails);
        assert_eq!(p2, Some(p));
    }
}
