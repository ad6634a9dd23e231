//! Line-oriented text formats.
//!
//! Every format is a sequence of records, one per line, with rationals
//! written `p/q` and points written `theta,z`. Blank lines and lines starting
//! with `#` are skipped. The writers produce the canonical form, which the
//! readers accept back unchanged.
//!
//! `.front` and `.arc` files begin with `morse <ref>`, naming either a
//! builtin diagram or a `.morse` file relative to the referring file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::arc::{Arc, ArcDiagram, ArcEnd, BindingVertex, Wire, WireEnd};
use crate::front::{Crossing, EndKind, EndRef, FrontPoint, FrontStrand, GraphFront, GraphVertex, SegmentRef, StrandEnd};
use crate::geom::Pt;
use crate::morse::{builtin_diagram, MorseDiagram, MorseError, Side, TrivalentGraphEdge, TrivalentVertex, BUILTIN_NAMES};
use crate::rational::{fmt_q, parse_q, Q};
use crate::surface::{Band, BennequinSurface, Disk, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Morse { path: String, source: MorseError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Morse,
    Front,
    Arc,
    Bsurf,
}

impl FileKind {
    pub fn of(path: &Path) -> Option<FileKind> {
        match path.extension()?.to_str()? {
            "morse" => Some(FileKind::Morse),
            "front" => Some(FileKind::Front),
            "arc" => Some(FileKind::Arc),
            "bsurf" => Some(FileKind::Bsurf),
            _ => None,
        }
    }
}

struct Line<'a> {
    no: usize,
    width: usize,
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Line<'a> {
    fn new(no: usize, text: &'a str) -> Self {
        let mut toks = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    toks.push((s + 1, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            toks.push((s + 1, &text[s..]));
        }
        Line { no, width: text.len(), toks, pos: 0 }
    }

    fn err_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.no, column, message: message.into() }
    }

    /// Error pointing at the last token read.
    fn err(&self, message: impl Into<String>) -> ParseError {
        let col = self.toks.get(self.pos.saturating_sub(1)).map_or(1, |t| t.0);
        self.err_at(col, message)
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.toks.get(self.pos) {
            Some(&(_, t)) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.err_at(self.width + 1, format!("expected {what}"))),
        }
    }

    fn has_more(&self) -> bool {
        self.pos < self.toks.len()
    }

    fn q(&mut self, what: &str) -> Result<Q, ParseError> {
        let t = self.next(what)?;
        parse_q(t).map_err(|m| self.err(m))
    }

    fn usize(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.next(what)?;
        t.parse().map_err(|_| self.err(format!("expected {what}, found `{t}`")))
    }

    fn pt(&mut self) -> Result<Pt, ParseError> {
        let t = self.next("a point")?;
        self.parse_pt(t)
    }

    fn parse_pt(&self, t: &str) -> Result<Pt, ParseError> {
        let (a, b) = t.split_once(',').ok_or_else(|| self.err(format!("expected theta,z, found `{t}`")))?;
        let theta = parse_q(a).map_err(|m| self.err(m))?;
        let z = parse_q(b).map_err(|m| self.err(m))?;
        Ok(Pt::new(theta, z))
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some(&(col, t)) => Err(self.err_at(col, format!("unexpected `{t}`"))),
            None => Ok(()),
        }
    }
}

fn records(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| Line::new(i + 1, l))
        .collect()
}

fn header<'a>(recs: &mut std::slice::IterMut<'_, Line<'a>>, key: &str) -> Result<(), ParseError> {
    let Some(l) = recs.next() else {
        return Err(ParseError { line: 1, column: 1, message: format!("missing `{key}` header") });
    };
    let k = l.next("a header")?;
    if k != key {
        return Err(l.err(format!("expected `{key}`, found `{k}`")));
    }
    Ok(())
}

fn end_of_input(text: &str) -> ParseError {
    ParseError { line: text.lines().count().max(1), column: 1, message: "unexpected end of input".into() }
}

fn pt_str(p: Pt) -> String {
    format!("{},{}", fmt_q(p.theta), fmt_q(p.z))
}

// ---- .morse

pub fn write_morse(d: &MorseDiagram) -> String {
    let mut s = format!("tori {}\n", d.tori);
    for e in &d.edges {
        let pts: Vec<String> = e.points.iter().map(|&p| pt_str(p)).collect();
        writeln!(s, "edge {} {} {}", e.torus, e.label, pts.join(" ")).unwrap();
    }
    for v in &d.vertices {
        writeln!(
            s,
            "vertex {} {} {} {} {} {} {}",
            v.torus,
            fmt_q(v.theta),
            fmt_q(v.z),
            v.partner,
            v.x_label,
            v.y_label,
            v.side.letter()
        )
        .unwrap();
    }
    s
}

pub fn parse_morse(text: &str) -> Result<MorseDiagram, ParseError> {
    let mut recs = records(text);
    let mut it = recs.iter_mut();
    let Some(first) = it.next() else {
        return Err(ParseError { line: 1, column: 1, message: "missing `tori` header".into() });
    };
    let k = first.next("a header")?;
    if k != "tori" {
        return Err(first.err(format!("expected `tori`, found `{k}`")));
    }
    let tori = first.usize("a torus count")?;
    first.done()?;
    let mut d = MorseDiagram { tori, edges: vec![], vertices: vec![] };
    for l in it {
        match l.next("a record")? {
            "edge" => {
                let torus = l.usize("a torus index")?;
                let label = l.next("a label")?.to_string();
                let mut points = Vec::new();
                while l.has_more() {
                    points.push(l.pt()?);
                }
                if points.len() < 2 {
                    return Err(l.err_at(l.width + 1, "an edge needs at least two points"));
                }
                d.edges.push(TrivalentGraphEdge { torus, label, points });
            }
            "vertex" => {
                let torus = l.usize("a torus index")?;
                let theta = l.q("theta")?;
                let z = l.q("z")?;
                let partner = l.usize("a partner index")?;
                let x_label = l.next("an x label")?.to_string();
                let y_label = l.next("a y label")?.to_string();
                let side_tok = l.next("a side")?;
                let side = Side::from_letter(side_tok).ok_or_else(|| l.err(format!("side must be L or R, found `{side_tok}`")))?;
                l.done()?;
                d.vertices.push(TrivalentVertex { torus, theta, z, partner, x_label, y_label, side });
            }
            other => return Err(l.err(format!("unknown record `{other}`"))),
        }
    }
    Ok(d)
}

pub fn morse_to_json(d: &MorseDiagram) -> String {
    serde_json::to_string_pretty(d).expect("diagram serializes")
}

pub fn morse_from_json(text: &str) -> Result<MorseDiagram, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError { line: e.line(), column: e.column(), message: e.to_string() })
}

// ---- .front

fn end_ref_str(e: EndRef) -> String {
    match e {
        EndRef::Closed => "closed".into(),
        EndRef::OnEdge { edge, side } => format!("edge:{edge}:{}", side.letter()),
        EndRef::Vertex(v) => format!("vertex:{v}"),
    }
}

fn parse_end_ref(l: &mut Line, what: &str) -> Result<EndRef, ParseError> {
    let t = l.next(what)?;
    let parts: Vec<&str> = t.split(':').collect();
    let bad = || format!("expected closed, edge:<i>:<L|R> or vertex:<i>, found `{t}`");
    match parts.as_slice() {
        ["closed"] => Ok(EndRef::Closed),
        ["edge", i, s] => {
            let edge = i.parse().map_err(|_| l.err(bad()))?;
            let side = Side::from_letter(s).ok_or_else(|| l.err(bad()))?;
            Ok(EndRef::OnEdge { edge, side })
        }
        ["vertex", i] => Ok(EndRef::Vertex(i.parse().map_err(|_| l.err(bad()))?)),
        _ => Err(l.err(bad())),
    }
}

fn kind_letter(k: EndKind) -> &'static str {
    match k {
        EndKind::Start => "s",
        EndKind::End => "e",
    }
}

fn parse_indexed<'a>(l: &mut Line<'a>, what: &str) -> Result<(usize, &'a str), ParseError> {
    let t = l.next(what)?;
    let (i, k) = t.split_once(':').ok_or_else(|| l.err(format!("expected {what}, found `{t}`")))?;
    let i = i.parse().map_err(|_| l.err(format!("expected {what}, found `{t}`")))?;
    Ok((i, k))
}

fn parse_kind(l: &Line, k: &str) -> Result<EndKind, ParseError> {
    match k {
        "s" => Ok(EndKind::Start),
        "e" => Ok(EndKind::End),
        _ => Err(l.err(format!("end must be s or e, found `{k}`"))),
    }
}

pub fn write_front(morse_ref: &str, f: &GraphFront) -> String {
    let mut s = format!("morse {morse_ref}\n");
    for st in &f.strands {
        let pts: Vec<String> =
            st.points.iter().map(|p| format!("{}{}", pt_str(p.pt), if p.cusp { "*" } else { "" })).collect();
        writeln!(s, "strand {} {} {} {}", st.torus, end_ref_str(st.start), end_ref_str(st.end), pts.join(" ")).unwrap();
    }
    for v in &f.vertices {
        let ends: Vec<String> = v.ends.iter().map(|e| format!("{}:{}", e.strand, kind_letter(e.end))).collect();
        writeln!(s, "vertex {} {} {} {}", v.torus, fmt_q(v.theta), fmt_q(v.z), ends.join(" ")).unwrap();
    }
    for c in &f.crossings {
        writeln!(
            s,
            "crossing {} {} {}:{} {}:{}",
            c.torus,
            pt_str(c.at),
            c.near.strand,
            c.near.segment,
            c.far.strand,
            c.far.segment
        )
        .unwrap();
    }
    s
}

/// Returns the diagram reference and the front.
pub fn parse_front(text: &str) -> Result<(String, GraphFront), ParseError> {
    let mut recs = records(text);
    let mut it = recs.iter_mut();
    header(&mut it, "morse")?;
    let morse_ref = {
        let l = recs.first_mut().ok_or_else(|| end_of_input(text))?;
        let r = l.next("a diagram reference")?.to_string();
        l.done()?;
        r
    };
    let mut f = GraphFront::default();
    for l in recs.iter_mut().skip(1) {
        match l.next("a record")? {
            "strand" => {
                let torus = l.usize("a torus index")?;
                let start = parse_end_ref(l, "a start")?;
                let end = parse_end_ref(l, "an end")?;
                let mut points = Vec::new();
                while l.has_more() {
                    let t = l.next("a point")?;
                    let (t, cusp) = match t.strip_suffix('*') {
                        Some(t) => (t, true),
                        None => (t, false),
                    };
                    points.push(FrontPoint { pt: l.parse_pt(t)?, cusp });
                }
                if points.len() < 2 {
                    return Err(l.err_at(l.width + 1, "a strand needs at least two points"));
                }
                f.strands.push(FrontStrand { torus, points, start, end });
            }
            "vertex" => {
                let torus = l.usize("a torus index")?;
                let theta = l.q("theta")?;
                let z = l.q("z")?;
                let mut ends = Vec::new();
                while l.has_more() {
                    let (strand, k) = parse_indexed(l, "a strand end")?;
                    ends.push(StrandEnd { strand, end: parse_kind(l, k)? });
                }
                f.vertices.push(GraphVertex { torus, theta, z, ends });
            }
            "crossing" => {
                let torus = l.usize("a torus index")?;
                let at = l.pt()?;
                let seg = |l: &mut Line| -> Result<SegmentRef, ParseError> {
                    let (strand, k) = parse_indexed(l, "strand:segment")?;
                    let segment = k.parse().map_err(|_| l.err(format!("bad segment `{k}`")))?;
                    Ok(SegmentRef { strand, segment })
                };
                let near = seg(l)?;
                let far = seg(l)?;
                l.done()?;
                f.crossings.push(Crossing { torus, at, near, far });
            }
            other => return Err(l.err(format!("unknown record `{other}`"))),
        }
    }
    Ok((morse_ref, f))
}

// ---- .arc

fn arc_end_str(e: ArcEnd) -> String {
    match e {
        ArcEnd::Vertex(v) => format!("v:{v}"),
        ArcEnd::OnEdge(t) => format!("t:{t}"),
    }
}

fn parse_arc_end(l: &mut Line) -> Result<ArcEnd, ParseError> {
    let t = l.next("an arc end")?;
    let bad = || format!("expected v:<vertex> or t:<edge>, found `{t}`");
    let (k, i) = t.split_once(':').ok_or_else(|| l.err(bad()))?;
    let i = i.parse().map_err(|_| l.err(bad()))?;
    match k {
        "v" => Ok(ArcEnd::Vertex(i)),
        "t" => Ok(ArcEnd::OnEdge(i)),
        _ => Err(l.err(bad())),
    }
}

pub fn write_arc(morse_ref: &str, a: &ArcDiagram) -> String {
    let mut s = format!("morse {morse_ref}\n");
    for v in &a.vertices {
        let ends: Vec<String> = v.ends.iter().map(|e| format!("{}:{}", e.wire, kind_letter(e.end))).collect();
        writeln!(s, "vertex {} {} {}", v.torus, fmt_q(v.z), ends.join(" ")).unwrap();
    }
    for w in &a.wires {
        writeln!(s, "wire {}", fmt_q(w.theta)).unwrap();
        for arc in &w.arcs {
            writeln!(
                s,
                "arc {} {} {} {} {}",
                arc.torus,
                fmt_q(arc.z_from),
                fmt_q(arc.z_to),
                arc_end_str(arc.from),
                arc_end_str(arc.to)
            )
            .unwrap();
        }
    }
    s
}

/// Returns the diagram reference and the arc diagram.
pub fn parse_arc(text: &str) -> Result<(String, ArcDiagram), ParseError> {
    let mut recs = records(text);
    let mut it = recs.iter_mut();
    header(&mut it, "morse")?;
    let morse_ref = {
        let l = recs.first_mut().ok_or_else(|| end_of_input(text))?;
        let r = l.next("a diagram reference")?.to_string();
        l.done()?;
        r
    };
    let mut a = ArcDiagram::default();
    for l in recs.iter_mut().skip(1) {
        match l.next("a record")? {
            "vertex" => {
                let torus = l.usize("a torus index")?;
                let z = l.q("z")?;
                let mut ends = Vec::new();
                while l.has_more() {
                    let (wire, k) = parse_indexed(l, "a wire end")?;
                    ends.push(WireEnd { wire, end: parse_kind(l, k)? });
                }
                a.vertices.push(BindingVertex { torus, z, ends });
            }
            "wire" => {
                let theta = l.q("theta")?;
                l.done()?;
                a.wires.push(Wire { theta, arcs: vec![] });
            }
            "arc" => {
                let torus = l.usize("a torus index")?;
                let z_from = l.q("z_from")?;
                let z_to = l.q("z_to")?;
                let from = parse_arc_end(l)?;
                let to = parse_arc_end(l)?;
                l.done()?;
                let Some(w) = a.wires.last_mut() else {
                    return Err(l.err_at(1, "arc before any wire"));
                };
                w.arcs.push(Arc { torus, z_from, z_to, from, to });
            }
            other => return Err(l.err(format!("unknown record `{other}`"))),
        }
    }
    Ok((morse_ref, a))
}

// ---- .bsurf

fn default_disks(d: usize) -> Vec<Disk> {
    (0..d).map(|i| Disk { torus: 0, z: Q::new(i as i128, d as i128) }).collect()
}

fn provenance_str(p: Provenance) -> &'static str {
    match p {
        Provenance::FromBands => "from_bands",
        Provenance::FromRibbon => "from_ribbon",
        Provenance::FromSatellite => "from_satellite",
        Provenance::FromCable => "from_cable",
    }
}

pub fn write_bsurf(s: &BennequinSurface) -> String {
    let mut out = format!("disks {}\n", s.disks.len());
    if s.provenance != Provenance::FromBands {
        writeln!(out, "provenance {}", provenance_str(s.provenance)).unwrap();
    }
    if s.disks != default_disks(s.disks.len()) {
        for d in &s.disks {
            writeln!(out, "disk {} {}", d.torus, fmt_q(d.z)).unwrap();
        }
    }
    for b in &s.bands {
        writeln!(out, "band {} {} {} {}", fmt_q(b.theta), b.from, b.to, b.sign).unwrap();
    }
    out
}

/// Parse a surface. Structural checks are left to [`BennequinSurface::check`].
pub fn parse_bsurf(text: &str) -> Result<BennequinSurface, ParseError> {
    let mut recs = records(text);
    let mut it = recs.iter_mut();
    let Some(first) = it.next() else {
        return Err(ParseError { line: 1, column: 1, message: "missing `disks` header".into() });
    };
    let k = first.next("a header")?;
    if k != "disks" {
        return Err(first.err(format!("expected `disks`, found `{k}`")));
    }
    let n = first.usize("a disk count")?;
    first.done()?;
    let mut provenance = Provenance::FromBands;
    let mut disks = Vec::new();
    let mut bands = Vec::new();
    let mut last_line = first.no;
    for l in it {
        last_line = l.no;
        match l.next("a record")? {
            "provenance" => {
                let t = l.next("a provenance")?;
                provenance = match t {
                    "from_bands" => Provenance::FromBands,
                    "from_ribbon" => Provenance::FromRibbon,
                    "from_satellite" => Provenance::FromSatellite,
                    "from_cable" => Provenance::FromCable,
                    _ => return Err(l.err(format!("unknown provenance `{t}`"))),
                };
                l.done()?;
            }
            "disk" => {
                let torus = l.usize("a torus index")?;
                let z = l.q("z")?;
                l.done()?;
                disks.push(Disk { torus, z });
            }
            "band" => {
                let theta = l.q("theta")?;
                let from = l.usize("a disk index")?;
                let to = l.usize("a disk index")?;
                let t = l.next("a sign")?;
                let sign = match t {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    _ => return Err(l.err(format!("sign must be 1 or -1, found `{t}`"))),
                };
                l.done()?;
                bands.push(Band { theta, from, to, sign });
            }
            other => return Err(l.err(format!("unknown record `{other}`"))),
        }
    }
    if disks.is_empty() {
        disks = default_disks(n);
    } else if disks.len() != n {
        return Err(ParseError {
            line: last_line,
            column: 1,
            message: format!("{} disk records for {n} disks", disks.len()),
        });
    }
    Ok(BennequinSurface { disks, bands, provenance })
}

// ---- loading from disk

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

/// A builtin name, or a path relative to `base` (the referring file's
/// directory).
pub fn resolve_morse(reference: &str, base: &Path) -> Result<MorseDiagram, LoadError> {
    if BUILTIN_NAMES.contains(&reference) {
        return builtin_diagram(reference).map_err(|source| LoadError::Morse { path: reference.into(), source });
    }
    let path: PathBuf = base.join(reference);
    load_morse(&path)
}

pub fn load_morse(path: &Path) -> Result<MorseDiagram, LoadError> {
    let text = read(path)?;
    parse_morse(&text).map_err(|source| LoadError::Parse { path: path.display().to_string(), source })
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

pub fn load_front(path: &Path) -> Result<(MorseDiagram, String, GraphFront), LoadError> {
    let text = read(path)?;
    let (r, f) = parse_front(&text).map_err(|source| LoadError::Parse { path: path.display().to_string(), source })?;
    Ok((resolve_morse(&r, base_dir(path))?, r, f))
}

pub fn load_arc(path: &Path) -> Result<(MorseDiagram, String, ArcDiagram), LoadError> {
    let text = read(path)?;
    let (r, a) = parse_arc(&text).map_err(|source| LoadError::Parse { path: path.display().to_string(), source })?;
    Ok((resolve_morse(&r, base_dir(path))?, r, a))
}

pub fn load_bsurf(path: &Path) -> Result<BennequinSurface, LoadError> {
    let text = read(path)?;
    parse_bsurf(&text).map_err(|source| LoadError::Parse { path: path.display().to_string(), source })
}
