//! Abstract Morse diagrams: `n` tori decorated by a trivalent graph whose
//! edges are monotone in the page angle `theta`.
//!
//! A slice `theta = c` of every torus is one boundary circle of the page at
//! angle `c`. Curves of the graph meet the slice in points that pair up by
//! label, one pair per index-1 handle of the page; oriented surgery on the
//! slice circles along all pairs must give back a single circle.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, delta, Pt};
use crate::rational::{self, fmt_q, q, serde_q, unit, Q};

/// Side from which a curve approaches another along a slice.
///
/// `Left` is the smaller-`z` side and `Right` the larger-`z` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }

    pub fn from_letter(s: &str) -> Option<Side> {
        match s {
            "L" => Some(Side::Left),
            "R" => Some(Side::Right),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusPoint {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q")]
    pub z: Q,
}

impl TorusPoint {
    pub fn pt(&self) -> Pt {
        Pt::new(self.theta, self.z)
    }
}

/// One edge of the trivalent graph.
///
/// The edge is closed when its last point repeats its first; otherwise both
/// endpoints sit on trivalent vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivalentGraphEdge {
    pub torus: usize,
    pub label: String,
    pub points: Vec<Pt>,
}

impl TrivalentGraphEdge {
    pub fn is_closed(&self) -> bool {
        self.points.len() >= 2 && self.points.first() == self.points.last()
    }

    pub fn segments(&self) -> impl Iterator<Item = (usize, Pt, Pt)> + '_ {
        self.points.windows(2).enumerate().map(|(i, w)| (i, w[0], w[1]))
    }

    /// Does `p` lie on the edge away from its endpoints?
    ///
    /// For closed edges every point of the curve qualifies.
    pub fn contains_interior(&self, p: Pt) -> bool {
        let closed = self.is_closed();
        let last = self.points.len() - 1;
        self.segments().any(|(i, a, b)| match geom::param_on_segment(p, a, b) {
            None => false,
            Some(t) => closed || !((i == 0 && t.is_zero()) || (i + 1 == last && t.is_one())),
        })
    }

    /// Slopes of the segments arriving at and leaving `p` (in `theta` order).
    pub fn slopes_at(&self, p: Pt) -> (Option<Q>, Option<Q>) {
        let mut incoming = None;
        let mut outgoing = None;
        let n = self.points.len() - 1;
        for (i, a, b) in self.segments() {
            if let Some(t) = geom::param_on_segment(p, a, b) {
                let s = geom::slope(delta(a, b));
                if t.is_zero() {
                    outgoing = outgoing.or(s);
                    if self.is_closed() && i == 0 {
                        let (pa, pb) = (self.points[n - 1], self.points[n]);
                        incoming = incoming.or(geom::slope(delta(pa, pb)));
                    }
                } else if t.is_one() {
                    incoming = incoming.or(s);
                } else {
                    incoming = incoming.or(s);
                    outgoing = outgoing.or(s);
                }
            }
        }
        (incoming, outgoing)
    }
}

/// A trivalent vertex: the foot of the `x` handle meets a foot of the `y`
/// handle. Vertices come in partner pairs on the same slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivalentVertex {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q")]
    pub z: Q,
    pub partner: usize,
    pub x_label: String,
    pub y_label: String,
    pub side: Side,
}

impl TrivalentVertex {
    pub fn pt(&self) -> Pt {
        Pt::new(self.theta, self.z)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseDiagram {
    pub tori: usize,
    pub edges: Vec<TrivalentGraphEdge>,
    pub vertices: Vec<TrivalentVertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageInvariants {
    pub n_binding: usize,
    pub h_handles: usize,
    pub euler_char: i64,
    pub genus: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// (i) edges are monotone in `theta`
    Monotone,
    /// (ii) slice points pair up by label
    Pairing,
    /// (iii) surgery along the pairs yields one circle
    Surgery,
    /// (iv) trivalent vertices come in partner pairs with opposite approach
    VertexPairs,
}

impl Axiom {
    pub fn numeral(self) -> &'static str {
        match self {
            Axiom::Monotone => "i",
            Axiom::Pairing => "ii",
            Axiom::Surgery => "iii",
            Axiom::VertexPairs => "iv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    #[serde(with = "rational::serde_q_opt", default)]
    pub slice: Option<Q>,
    pub edge: Option<usize>,
    pub vertex: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn axioms(&self) -> Vec<Axiom> {
        let mut a: Vec<Axiom> = self.violations.iter().map(|v| v.axiom).collect();
        a.sort();
        a.dedup();
        a
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("malformed geometry: {0}")]
    MalformedGeometry(String),
    #[error("slice theta = {0} meets a trivalent vertex")]
    NonGenericSlice(String),
    #[error("label `{label}` meets slice theta = {slice} in {count} points")]
    UnpairedLabel { slice: String, label: String, count: usize },
    #[error("not an abstract Morse diagram: {0} violation(s)")]
    InvalidDiagram(usize),
    #[error("unknown builtin diagram `{0}`")]
    UnknownName(String),
}

/// A point where the graph meets a slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub z: Q,
    pub edge: usize,
    pub segment: usize,
    pub label: String,
}

impl fmt::Display for SlicePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@t{}:z={}", self.label, self.torus, fmt_q(self.z))
    }
}

impl MorseDiagram {
    pub fn empty(tori: usize) -> Self {
        MorseDiagram { tori, edges: vec![], vertices: vec![] }
    }

    /// `theta` values of vertices and polyline breakpoints, sorted and deduplicated.
    pub fn critical_thetas(&self) -> Vec<Q> {
        let mut c: Vec<Q> = self
            .edges
            .iter()
            .flat_map(|e| e.points.iter().map(|p| p.theta))
            .chain(self.vertices.iter().map(|v| v.theta))
            .collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn vertex_thetas(&self) -> Vec<Q> {
        let mut c: Vec<Q> = self.vertices.iter().map(|v| v.theta).collect();
        c.sort();
        c.dedup();
        c
    }

    /// One `theta` in each open interval between consecutive critical values.
    pub fn generic_samples(&self) -> Vec<Q> {
        let c = self.critical_thetas();
        if c.is_empty() {
            return vec![Q::zero()];
        }
        let mut out: Vec<Q> = c.windows(2).map(|w| (w[0] + w[1]) / Q::from_integer(2)).collect();
        let last = *c.last().unwrap();
        out.push(unit((last + c[0] + Q::one()) / Q::from_integer(2)));
        out.sort();
        out
    }

    pub fn is_generic(&self, c: Q) -> bool {
        !self.vertices.iter().any(|v| v.theta == unit(c))
    }

    /// Every point of the graph on the slice `theta = c`, sorted by torus then `z`.
    ///
    /// Points at a breakpoint are counted once.
    pub fn slice_points(&self, c: Q) -> Vec<SlicePoint> {
        let c = unit(c);
        let mut out = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            for (si, a, b) in e.segments() {
                let (dt, dz) = delta(a, b);
                if dt.is_zero() {
                    continue;
                }
                let along = if dt.is_positive() { unit(c - a.theta) } else { unit(a.theta - c) };
                let t = along / dt.abs();
                // half-open (0, 1]; an open edge also contributes its start point
                let hit = (t > Q::zero() && t <= Q::one()) || (t.is_zero() && si == 0 && !e.is_closed());
                if hit {
                    out.push(SlicePoint {
                        torus: e.torus,
                        z: unit(a.z + dz * t),
                        edge: ei,
                        segment: si,
                        label: e.label.clone(),
                    });
                }
            }
        }
        out.sort_by(|x, y| (x.torus, x.z, x.edge).cmp(&(y.torus, y.z, y.edge)));
        out
    }

    fn pair_points(points: &[SlicePoint], c: Q) -> Result<Vec<(usize, usize)>, MorseError> {
        let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            by_label.entry(p.label.as_str()).or_default().push(i);
        }
        let mut pairs = Vec::new();
        for (label, idx) in by_label {
            if idx.len() != 2 {
                return Err(MorseError::UnpairedLabel {
                    slice: fmt_q(c),
                    label: label.to_string(),
                    count: idx.len(),
                });
            }
            pairs.push((idx[0], idx[1]));
        }
        Ok(pairs)
    }

    pub fn slice_pairs(&self, c: Q) -> Result<Vec<(SlicePoint, SlicePoint)>, MorseError> {
        if !self.is_generic(c) {
            return Err(MorseError::NonGenericSlice(fmt_q(unit(c))));
        }
        let pts = self.slice_points(c);
        let pairs = Self::pair_points(&pts, unit(c))?;
        Ok(pairs.into_iter().map(|(a, b)| (pts[a].clone(), pts[b].clone())).collect())
    }

    /// Circle count after oriented surgery on the slice circles along all pairs.
    pub fn reconstruct_page_boundary(&self, c: Q) -> Result<usize, MorseError> {
        if !self.is_generic(c) {
            return Err(MorseError::NonGenericSlice(fmt_q(unit(c))));
        }
        let pts = self.slice_points(c);
        let pairs = Self::pair_points(&pts, unit(c))?;
        let tori: Vec<usize> = pts.iter().map(|p| p.torus).collect();
        Ok(surgery_circle_count(self.tori, &tori, &pairs))
    }

    pub fn page_invariants(&self) -> Result<PageInvariants, MorseError> {
        let report = validate_morse_diagram(self)?;
        if !report.is_valid() {
            return Err(MorseError::InvalidDiagram(report.violations.len()));
        }
        let c = self.generic_samples()[0];
        let h = self.slice_pairs(c)?.len();
        let n = self.tori;
        let euler_char = 1 - h as i64;
        let twice_genus = 1 + h as i64 - n as i64;
        debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0);
        Ok(PageInvariants { n_binding: n, h_handles: h, euler_char, genus: twice_genus / 2 })
    }
}

/// Oriented surgery on `n` circles.
///
/// `tori[i]` is the circle carrying point `i`; points of one circle must be
/// listed in increasing `z`. Each pair is a 0-handle attachment; an arc that
/// arrives at a point continues from its partner.
pub fn surgery_circle_count(n: usize, tori: &[usize], pairs: &[(usize, usize)]) -> usize {
    let m = tori.len();
    let mut partner = vec![usize::MAX; m];
    for &(a, b) in pairs {
        partner[a] = b;
        partner[b] = a;
    }
    let mut next = vec![0usize; m];
    let mut on_circle: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &t) in tori.iter().enumerate() {
        on_circle[t].push(i);
    }
    for circ in &on_circle {
        for (k, &i) in circ.iter().enumerate() {
            next[i] = circ[(k + 1) % circ.len()];
        }
    }
    // arcs are named by their starting point
    let mut seen = vec![false; m];
    let mut cycles = on_circle.iter().filter(|c| c.is_empty()).count();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut arc = start;
        while !seen[arc] {
            seen[arc] = true;
            let arrive = next[arc];
            let p = partner[arrive];
            arc = if p == usize::MAX { arrive } else { p };
        }
    }
    cycles
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VertexKind {
    Merge,
    Split,
}

/// Check the four axioms of an abstract Morse diagram.
///
/// Structural problems (bad indices, non-canonical coordinates, degenerate or
/// self-intersecting curves) are returned as [`MorseError::MalformedGeometry`];
/// axiom violations go in the report.
pub fn validate_morse_diagram(d: &MorseDiagram) -> Result<ValidationReport, MorseError> {
    check_structure(d)?;
    let mut report = ValidationReport::default();

    // (i)
    for (ei, e) in d.edges.iter().enumerate() {
        for (si, a, b) in e.segments() {
            let (dt, _) = delta(a, b);
            if !dt.is_positive() {
                report.violations.push(Violation {
                    axiom: Axiom::Monotone,
                    slice: None,
                    edge: Some(ei),
                    vertex: None,
                    detail: format!("segment {si} has dtheta = {}", fmt_q(dt)),
                });
            }
        }
    }

    // (ii) and (iii)
    for c in d.generic_samples() {
        let pts = d.slice_points(c);
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &pts {
            *counts.entry(p.label.as_str()).or_default() += 1;
        }
        let bad: Vec<(&str, usize)> = counts.into_iter().filter(|&(_, k)| k != 2).collect();
        if !bad.is_empty() {
            for (label, k) in bad {
                report.violations.push(Violation {
                    axiom: Axiom::Pairing,
                    slice: Some(c),
                    edge: None,
                    vertex: None,
                    detail: format!("label `{label}` meets the slice {k} time(s)"),
                });
            }
            continue;
        }
        let circles = d.reconstruct_page_boundary(c)?;
        if circles != 1 {
            report.violations.push(Violation {
                axiom: Axiom::Surgery,
                slice: Some(c),
                edge: None,
                vertex: None,
                detail: format!("surgery yields {circles} circles"),
            });
        }
    }

    // (iv)
    let mut kinds = Vec::with_capacity(d.vertices.len());
    let mut y_edges = Vec::with_capacity(d.vertices.len());
    for (vi, v) in d.vertices.iter().enumerate() {
        let mut push = |detail: String| {
            report.violations.push(Violation {
                axiom: Axiom::VertexPairs,
                slice: Some(v.theta),
                edge: None,
                vertex: Some(vi),
                detail,
            })
        };
        let p = v.pt();
        let x_hits: Vec<(usize, VertexKind)> = d
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.torus == v.torus && e.label == v.x_label && !e.is_closed())
            .filter_map(|(i, e)| {
                if e.points[0] == p {
                    Some((i, VertexKind::Split))
                } else if *e.points.last().unwrap() == p {
                    Some((i, VertexKind::Merge))
                } else {
                    None
                }
            })
            .collect();
        let y_hits: Vec<usize> = d
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.torus == v.torus && e.label == v.y_label && e.contains_interior(p))
            .map(|(i, _)| i)
            .collect();
        let kind = match x_hits.as_slice() {
            [(_, k)] => Some(*k),
            [] => {
                push(format!("no `{}` curve ends at the vertex", v.x_label));
                None
            }
            _ => {
                push(format!("{} `{}` curves end at the vertex", x_hits.len(), v.x_label));
                None
            }
        };
        let y_edge = match y_hits.as_slice() {
            [e] => Some(*e),
            [] => {
                push(format!("vertex does not lie on a `{}` curve", v.y_label));
                None
            }
            _ => {
                push(format!("vertex lies on {} `{}` curves", y_hits.len(), v.y_label));
                None
            }
        };
        if let (Some(k), Some(ye), [(xe, _)]) = (kind, y_edge, x_hits.as_slice()) {
            let x = &d.edges[*xe];
            let (xin, xout) = x.slopes_at(p);
            let (yin, yout) = d.edges[ye].slopes_at(p);
            let (sx, sy) = match k {
                VertexKind::Merge => (xin, yin),
                VertexKind::Split => (xout, yout),
            };
            match (sx, sy) {
                (Some(sx), Some(sy)) if sx != sy => {
                    let below = match k {
                        VertexKind::Merge => sx > sy,
                        VertexKind::Split => sx < sy,
                    };
                    let geometric = if below { Side::Left } else { Side::Right };
                    if geometric != v.side {
                        push(format!(
                            "side flag {} disagrees with local geometry ({})",
                            v.side.letter(),
                            geometric.letter()
                        ));
                    }
                }
                _ => push("x curve is tangent to the y curve at the vertex".into()),
            }
        }
        kinds.push(kind);
        y_edges.push(y_edge);
    }
    for (vi, v) in d.vertices.iter().enumerate() {
        let mut problems = Vec::new();
        match d.vertices.get(v.partner) {
            None => problems.push(format!("partner {} does not exist", v.partner)),
            Some(_) if v.partner == vi => problems.push("vertex is its own partner".to_string()),
            Some(w) => {
                if w.partner != vi {
                    problems.push(format!("partner {} does not point back", v.partner));
                }
                if w.theta != v.theta {
                    problems.push("partners lie on different slices".to_string());
                }
                if w.x_label != v.x_label || w.y_label != v.y_label {
                    problems.push("partners disagree on the merging labels".to_string());
                }
                if w.side == v.side {
                    problems.push("partners approach from the same side".to_string());
                }
                match (kinds[vi], kinds[v.partner]) {
                    (Some(a), Some(b)) if a == b => {
                        problems.push("partners are both merges or both splits".to_string())
                    }
                    _ => {}
                }
                if let (Some(a), Some(b)) = (y_edges[vi], y_edges[v.partner]) {
                    if a == b {
                        problems.push("partners sit on the same y curve".to_string());
                    }
                }
            }
        }
        for detail in problems {
            report.violations.push(Violation {
                axiom: Axiom::VertexPairs,
                slice: Some(v.theta),
                edge: None,
                vertex: Some(vi),
                detail,
            });
        }
    }
    Ok(report)
}

fn malformed(msg: impl Into<String>) -> MorseError {
    MorseError::MalformedGeometry(msg.into())
}

fn check_structure(d: &MorseDiagram) -> Result<(), MorseError> {
    if d.tori == 0 {
        return Err(malformed("a Morse diagram needs at least one torus"));
    }
    for (ei, e) in d.edges.iter().enumerate() {
        if e.torus >= d.tori {
            return Err(malformed(format!("edge {ei} on missing torus {}", e.torus)));
        }
        if e.points.len() < 2 {
            return Err(malformed(format!("edge {ei} has fewer than two points")));
        }
        if let Some(p) = e.points.iter().find(|p| !p.is_canonical()) {
            return Err(malformed(format!(
                "edge {ei}: point ({}, {}) is not canonical",
                fmt_q(p.theta),
                fmt_q(p.z)
            )));
        }
        for (si, a, b) in e.segments() {
            if a == b {
                return Err(malformed(format!("edge {ei}: segment {si} is degenerate")));
            }
            if !geom::unambiguous(delta(a, b)) {
                return Err(malformed(format!("edge {ei}: segment {si} spans half the torus")));
            }
        }
        if e.is_closed() && e.points.len() < 3 {
            return Err(malformed(format!("closed edge {ei} needs two segments")));
        }
        if !e.is_closed() {
            for end in [e.points[0], *e.points.last().unwrap()] {
                let found = d.vertices.iter().any(|v| v.torus == e.torus && v.pt() == end);
                if !found {
                    return Err(malformed(format!(
                        "edge {ei}: endpoint ({}, {}) is not a trivalent vertex",
                        fmt_q(end.theta),
                        fmt_q(end.z)
                    )));
                }
            }
        }
    }
    for (vi, v) in d.vertices.iter().enumerate() {
        if v.torus >= d.tori {
            return Err(malformed(format!("vertex {vi} on missing torus {}", v.torus)));
        }
        if !v.pt().is_canonical() {
            return Err(malformed(format!("vertex {vi} is not canonical")));
        }
    }
    check_embedded(d)
}

/// Curves of the graph may only meet at trivalent vertices.
fn check_embedded(d: &MorseDiagram) -> Result<(), MorseError> {
    let crit = d.critical_thetas();
    if crit.is_empty() {
        return Ok(());
    }
    let vertex_pts: Vec<(usize, Pt)> = d.vertices.iter().map(|v| (v.torus, v.pt())).collect();
    let n = crit.len();
    for k in 0..n {
        let lo = crit[k];
        let hi = if k + 1 < n { crit[k + 1] } else { crit[0] + Q::one() };
        let mid = unit((lo + hi) / Q::from_integer(2));
        let half_len = (hi - lo) / Q::from_integer(2);
        let pts = d.slice_points(mid);
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if a.torus != b.torus {
                    continue;
                }
                if a.z == b.z {
                    return Err(malformed(format!(
                        "edges {} and {} meet at theta = {}",
                        a.edge,
                        b.edge,
                        fmt_q(mid)
                    )));
                }
                let sa = seg_slope(d, a);
                let sb = seg_slope(d, b);
                let dmid = b.z - a.z;
                let d_lo = dmid - (sb - sa) * half_len;
                let d_hi = dmid + (sb - sa) * half_len;
                let (mn, mx) = if d_lo <= d_hi { (d_lo, d_hi) } else { (d_hi, d_lo) };
                let mut kk = mn.ceil();
                while kk <= mx {
                    let at_end = kk == d_lo || kk == d_hi;
                    if !at_end {
                        return Err(malformed(format!(
                            "edges {} and {} cross between theta = {} and {}",
                            a.edge,
                            b.edge,
                            fmt_q(lo),
                            fmt_q(unit(hi))
                        )));
                    }
                    let theta = if kk == d_lo { lo } else { unit(hi) };
                    let shift = if kk == d_lo { -half_len } else { half_len };
                    let meet = Pt::new(theta, unit(a.z + sa * shift));
                    if !vertex_pts.iter().any(|&(t, p)| t == a.torus && p == meet) {
                        return Err(malformed(format!(
                            "edges {} and {} touch at ({}, {}) away from a vertex",
                            a.edge,
                            b.edge,
                            fmt_q(meet.theta),
                            fmt_q(meet.z)
                        )));
                    }
                    kk += Q::one();
                }
            }
        }
    }
    Ok(())
}

fn seg_slope(d: &MorseDiagram, p: &SlicePoint) -> Q {
    let e = &d.edges[p.edge];
    let (a, b) = (e.points[p.segment], e.points[p.segment + 1]);
    geom::slope(delta(a, b)).unwrap_or_else(Q::zero)
}

pub const BUILTIN_NAMES: [&str; 4] = ["disk_identity", "ex_2_1_a", "ex_2_1_b", "ex_2_1_c"];

fn pts(raw: &[(Q, Q)]) -> Vec<Pt> {
    raw.iter().map(|&(t, z)| Pt::new(t, z).canonical()).collect()
}

fn edge(torus: usize, label: &str, raw: &[(Q, Q)]) -> TrivalentGraphEdge {
    TrivalentGraphEdge { torus, label: label.into(), points: pts(raw) }
}

/// Closed zig-zag around `z0`, rising by `amp` to `theta = 1/2`.
fn zigzag(torus: usize, label: &str, z0: Q, amp: Q) -> TrivalentGraphEdge {
    let h = amp / Q::from_integer(2);
    edge(
        torus,
        label,
        &[(q(0, 1), z0), (q(1, 4), z0 + h), (q(1, 2), z0 + amp), (q(3, 4), z0 + h), (q(1, 1), z0)],
    )
}

/// Closed curve winding `w` times in `z` over one turn in `theta`.
fn winding(torus: usize, label: &str, w: i128) -> TrivalentGraphEdge {
    let steps = 4 * w.abs().max(1);
    let raw: Vec<(Q, Q)> = (0..=steps).map(|k| (q(k, steps), q(k * w, steps))).collect();
    edge(torus, label, &raw)
}

/// Hand-transcribed diagrams.
///
/// * `disk_identity`: one torus and no graph; disk page, trivial monodromy.
/// * `ex_2_1_a`: annular page, one handle, the binding curve on the second
///   torus winding twice (two right-handed twists about the core).
/// * `ex_2_1_b`: once-punctured torus page; two handles `a`, `b` on one torus
///   with one foot of `a` sliding over `b` twice per turn.
/// * `ex_2_1_c`: annular page with one left-handed twist about the core.
pub fn builtin_diagram(name: &str) -> Result<MorseDiagram, MorseError> {
    let d = match name {
        "disk_identity" => MorseDiagram::empty(1),
        "ex_2_1_a" => MorseDiagram {
            tori: 2,
            edges: vec![zigzag(0, "a", q(2, 5), q(1, 5)), winding(1, "a", 2)],
            vertices: vec![],
        },
        "ex_2_1_c" => MorseDiagram {
            tori: 2,
            edges: vec![zigzag(0, "a", q(2, 5), q(1, 5)), winding(1, "a", -1)],
            vertices: vec![],
        },
        "ex_2_1_b" => {
            let vtx = |theta: Q, z: Q, partner: usize, side: Side| TrivalentVertex {
                torus: 0,
                theta,
                z,
                partner,
                x_label: "a".into(),
                y_label: "b".into(),
                side,
            };
            MorseDiagram {
                tori: 1,
                edges: vec![
                    zigzag(0, "b", q(3, 10), q(1, 10)),
                    zigzag(0, "a", q(1, 2), q(1, 10)),
                    zigzag(0, "b", q(7, 10), q(1, 10)),
                    edge(0, "a", &[(q(1, 4), q(3, 4)), (q(1, 2), q(21, 20)), (q(3, 4), q(27, 20))]),
                    edge(0, "a", &[(q(3, 4), q(3, 4)), (q(1, 1), q(21, 20)), (q(5, 4), q(27, 20))]),
                ],
                vertices: vec![
                    vtx(q(1, 4), q(7, 20), 1, Side::Left),
                    vtx(q(1, 4), q(3, 4), 0, Side::Right),
                    vtx(q(3, 4), q(7, 20), 3, Side::Left),
                    vtx(q(3, 4), q(3, 4), 2, Side::Right),
                ],
            }
        }
        other => return Err(MorseError::UnknownName(other.to_string())),
    };
    Ok(d)
}

/// Vertical-range query used by generators: does any graph curve on `torus`
/// come within the closed box `[t0, t1] × [z0, z1]` (coordinates unwrapped
/// from `t0`, `z0`, widths below 1/2)?
pub fn box_meets_graph(d: &MorseDiagram, torus: usize, corner: Pt, width: Q, height: Q) -> bool {
    let corners = [
        corner,
        corner.offset(width, Q::zero()),
        corner.offset(width, height),
        corner.offset(Q::zero(), height),
    ];
    let sides = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let inside = |p: Pt| {
        let (dt, dz) = (unit(p.theta - corner.theta), unit(p.z - corner.z));
        dt <= width && dz <= height
    };
    for e in d.edges.iter().filter(|e| e.torus == torus) {
        if e.points.iter().any(|&p| inside(p)) {
            return true;
        }
        for (_, a, b) in e.segments() {
            for &(i, j) in &sides {
                if !geom::segment_hits(a, b, corners[i], corners[j]).is_empty() {
                    return true;
                }
            }
        }
    }
    d.vertices.iter().any(|v| v.torus == torus && inside(v.pt()))
}
