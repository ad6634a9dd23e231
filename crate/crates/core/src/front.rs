//! Legendrian graph fronts drawn on the tori of a Morse diagram.
//!
//! Fronts are piecewise linear. Every interior segment has negative finite
//! slope `dz/dtheta`; a strand that ends on the graph `T` does so along a
//! horizontal terminal segment. Cusps are breakpoints where the direction of
//! travel in `theta` reverses.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{self, delta, Pt, SegHit};
use crate::morse::{MorseDiagram, Side};
use crate::rational::{fmt_q, serde_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndKind {
    Start,
    End,
}

/// What sits at one end of a strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndRef {
    /// The strand is a closed curve; both ends are `Closed`.
    Closed,
    /// Interior point of a `T` edge, approached from `side` in `theta`:
    /// `Left` when the strand lies at smaller `theta` than its endpoint.
    OnEdge { edge: usize, side: Side },
    /// A vertex of the Legendrian graph.
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub pt: Pt,
    pub cusp: bool,
}

impl FrontPoint {
    pub fn new(pt: Pt) -> Self {
        FrontPoint { pt, cusp: false }
    }

    pub fn cusp(pt: Pt) -> Self {
        FrontPoint { pt, cusp: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontStrand {
    pub torus: usize,
    pub points: Vec<FrontPoint>,
    pub start: EndRef,
    pub end: EndRef,
}

impl FrontStrand {
    pub fn is_closed(&self) -> bool {
        self.start == EndRef::Closed
    }

    pub fn n_segments(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn segment(&self, i: usize) -> (Pt, Pt) {
        (self.points[i].pt, self.points[i + 1].pt)
    }

    pub fn end_ref(&self, k: EndKind) -> EndRef {
        match k {
            EndKind::Start => self.start,
            EndKind::End => self.end,
        }
    }

    pub fn end_point(&self, k: EndKind) -> Pt {
        match k {
            EndKind::Start => self.points[0].pt,
            EndKind::End => self.points[self.points.len() - 1].pt,
        }
    }

    /// Is segment `i` a horizontal terminal segment ending on `T`?
    pub fn is_terminal(&self, i: usize) -> bool {
        (i == 0 && matches!(self.start, EndRef::OnEdge { .. }))
            || (i + 1 == self.n_segments() && matches!(self.end, EndRef::OnEdge { .. }))
    }

    /// Sign of the `theta` direction in which the strand leaves the given end.
    pub fn leaving_direction(&self, k: EndKind) -> i32 {
        let n = self.n_segments();
        let (dt, _) = match k {
            EndKind::Start => delta(self.points[0].pt, self.points[1].pt),
            EndKind::End => delta(self.points[n].pt, self.points[n - 1].pt),
        };
        if dt.is_positive() {
            1
        } else if dt.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Does the `theta` direction reverse at point `i`?
    pub fn reverses_at(&self, i: usize) -> bool {
        let n = self.n_segments();
        let (before, after) = if i == 0 || i == n {
            if !self.is_closed() {
                return false;
            }
            (n - 1, 0)
        } else {
            (i - 1, i)
        };
        let (a0, a1) = self.segment(before);
        let (b0, b1) = self.segment(after);
        let d1 = delta(a0, a1).0;
        let d2 = delta(b0, b1).0;
        d1.signum() * d2.signum() < Q::zero()
    }

    /// Cusp points, each counted once.
    pub fn cusp_indices(&self) -> Vec<usize> {
        let last = if self.is_closed() { self.points.len() - 1 } else { self.points.len() };
        (0..last).filter(|&i| self.points[i].cusp).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrandEnd {
    pub strand: usize,
    pub end: EndKind,
}

/// A vertex of the Legendrian graph, with its incident strand ends in cyclic
/// order. Ends leaving in `+theta` and ends leaving in `-theta` each form a
/// contiguous block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q")]
    pub z: Q,
    pub ends: Vec<StrandEnd>,
}

impl GraphVertex {
    pub fn pt(&self) -> Pt {
        Pt::new(self.theta, self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SegmentRef {
    pub strand: usize,
    pub segment: usize,
}

/// A transverse double point. `near` is the branch closer to the binding,
/// i.e. the one whose slope is closer to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub torus: usize,
    pub at: Pt,
    pub near: SegmentRef,
    pub far: SegmentRef,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFront {
    pub strands: Vec<FrontStrand>,
    pub vertices: Vec<GraphVertex>,
    #[serde(default)]
    pub crossings: Vec<Crossing>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FrontIssueKind {
    DanglingEnd,
    SlopeViolation,
    UnmatchedEnd,
    CuspMismatch,
    CuspOnSkeleton,
    SkeletonCrossing,
    TangentialCrossing,
    CyclicOrder,
    IsolatedVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontIssue {
    pub kind: FrontIssueKind,
    pub strand: Option<usize>,
    pub segment: Option<usize>,
    pub vertex: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontReport {
    pub issues: Vec<FrontIssue>,
}

impl FrontReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn kinds(&self) -> Vec<FrontIssueKind> {
        let mut k: Vec<_> = self.issues.iter().map(|i| i.kind).collect();
        k.sort();
        k.dedup();
        k
    }

    fn push(&mut self, kind: FrontIssueKind, strand: Option<usize>, segment: Option<usize>, detail: String) {
        self.issues.push(FrontIssue { kind, strand, segment, vertex: None, detail });
    }

    fn push_vertex(&mut self, kind: FrontIssueKind, vertex: usize, detail: String) {
        self.issues.push(FrontIssue { kind, strand: None, segment: None, vertex: Some(vertex), detail });
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontError {
    #[error("malformed front: {0}")]
    Malformed(String),
    #[error("crossing at ({0}) is not transverse")]
    TangentialCrossing(String),
    #[error("point is not an interior smooth point of strand {0}")]
    PointNotOnStrand(usize),
    #[error("front is invalid: {0}")]
    Invalid(String),
    #[error("could not generate a valid front after {0} attempts")]
    GenerationFailure(usize),
}

fn malformed(msg: impl Into<String>) -> FrontError {
    FrontError::Malformed(msg.into())
}

fn show(p: Pt) -> String {
    format!("{}, {}", fmt_q(p.theta), fmt_q(p.z))
}

fn check_structure(f: &GraphFront, d: &MorseDiagram) -> Result<(), FrontError> {
    for (si, s) in f.strands.iter().enumerate() {
        if s.torus >= d.tori {
            return Err(malformed(format!("strand {si} on missing torus {}", s.torus)));
        }
        if s.points.len() < 2 {
            return Err(malformed(format!("strand {si} has fewer than two points")));
        }
        if let Some(p) = s.points.iter().find(|p| !p.pt.is_canonical()) {
            return Err(malformed(format!("strand {si}: point ({}) is not canonical", show(p.pt))));
        }
        for i in 0..s.n_segments() {
            let (a, b) = s.segment(i);
            if a == b {
                return Err(malformed(format!("strand {si}: segment {i} is degenerate")));
            }
            if !geom::unambiguous(delta(a, b)) {
                return Err(malformed(format!("strand {si}: segment {i} spans half the torus")));
            }
        }
        let closed_pts = s.points[0].pt == s.points[s.points.len() - 1].pt;
        match (s.start, s.end) {
            (EndRef::Closed, EndRef::Closed) => {
                if !closed_pts || s.points.len() < 3 {
                    return Err(malformed(format!("closed strand {si} does not close up")));
                }
            }
            (EndRef::Closed, _) | (_, EndRef::Closed) => {
                return Err(malformed(format!("strand {si} is closed at one end only")));
            }
            _ => {}
        }
        for end in [s.start, s.end] {
            match end {
                EndRef::OnEdge { edge, .. } if edge >= d.edges.len() => {
                    return Err(malformed(format!("strand {si} ends on missing edge {edge}")));
                }
                EndRef::Vertex(v) if v >= f.vertices.len() => {
                    return Err(malformed(format!("strand {si} ends at missing vertex {v}")));
                }
                _ => {}
            }
        }
    }
    for (vi, v) in f.vertices.iter().enumerate() {
        if v.torus >= d.tori {
            return Err(malformed(format!("vertex {vi} on missing torus {}", v.torus)));
        }
        if !v.pt().is_canonical() {
            return Err(malformed(format!("vertex {vi} is not canonical")));
        }
        if let Some(e) = v.ends.iter().find(|e| e.strand >= f.strands.len()) {
            return Err(malformed(format!("vertex {vi} lists missing strand {}", e.strand)));
        }
    }
    Ok(())
}

/// Check the front conditions against `d`.
///
/// Structural problems (dangling indices, degenerate segments) are errors;
/// everything else is collected in the report.
pub fn validate_front(f: &GraphFront, d: &MorseDiagram) -> Result<FrontReport, FrontError> {
    use FrontIssueKind::*;
    check_structure(f, d)?;
    let mut r = FrontReport::default();

    for (si, s) in f.strands.iter().enumerate() {
        let n = s.n_segments();
        // ends
        for k in [EndKind::Start, EndKind::End] {
            let p = s.end_point(k);
            match s.end_ref(k) {
                EndRef::Closed => {}
                EndRef::OnEdge { edge, side } => {
                    let e = &d.edges[edge];
                    let at_vertex = d.vertices.iter().any(|v| v.torus == e.torus && v.pt() == p);
                    if e.torus != s.torus || !e.contains_interior(p) || at_vertex {
                        r.push(DanglingEnd, Some(si), None, format!("end ({}) is not inside edge {edge}", show(p)));
                        continue;
                    }
                    let inward = s.leaving_direction(k);
                    let actual = if inward < 0 { Side::Left } else { Side::Right };
                    if inward != 0 && actual != side {
                        r.push(
                            DanglingEnd,
                            Some(si),
                            None,
                            format!("end on edge {edge} approaches from {:?}, recorded {:?}", actual, side),
                        );
                    }
                }
                EndRef::Vertex(v) => {
                    let gv = &f.vertices[v];
                    let listed = gv.ends.iter().filter(|e| **e == StrandEnd { strand: si, end: k }).count();
                    if gv.torus != s.torus || gv.pt() != p || listed != 1 {
                        r.push(DanglingEnd, Some(si), None, format!("end ({}) does not sit at vertex {v}", show(p)));
                    }
                }
            }
        }
        // slopes
        let mut negative = 0;
        for i in 0..n {
            let (a, b) = s.segment(i);
            let (dt, dz) = delta(a, b);
            if s.is_terminal(i) {
                if !dz.is_zero() || dt.is_zero() {
                    r.push(SlopeViolation, Some(si), Some(i), "terminal segment is not horizontal".into());
                }
            } else if dt.is_zero() || !(dz / dt).is_negative() {
                let shown = if dt.is_zero() { "vertical".to_string() } else { fmt_q(dz / dt) };
                r.push(SlopeViolation, Some(si), Some(i), format!("slope {shown} is not negative"));
            } else {
                negative += 1;
            }
        }
        if negative == 0 && n > 0 {
            r.push(SlopeViolation, Some(si), None, "strand has no segment of negative slope".into());
        }
        // cusps
        for i in 0..s.points.len() {
            let want = s.reverses_at(i);
            if s.points[i].cusp != want {
                let msg = if want { "unmarked cusp" } else { "marked cusp without reversal" };
                r.push(CuspMismatch, Some(si), None, format!("{msg} at ({})", show(s.points[i].pt)));
            }
        }
        for i in s.cusp_indices() {
            let p = s.points[i].pt;
            if on_skeleton(d, s.torus, p) {
                r.push(CuspOnSkeleton, Some(si), None, format!("cusp at ({}) lies on T", show(p)));
            }
        }
        // interiors avoid T
        for i in 0..n {
            let (a, b) = s.segment(i);
            for e in d.edges.iter().filter(|e| e.torus == s.torus) {
                for (_, c0, c1) in e.segments() {
                    for h in geom::segment_hits(a, b, c0, c1) {
                        let allowed = match h {
                            SegHit::Overlap => false,
                            SegHit::Point { t, .. } => {
                                (i == 0 && t.is_zero() && matches!(s.start, EndRef::OnEdge { .. }))
                                    || (i + 1 == n && t.is_one() && matches!(s.end, EndRef::OnEdge { .. }))
                            }
                        };
                        if !allowed {
                            r.push(SkeletonCrossing, Some(si), Some(i), "segment meets T away from its end".into());
                        }
                    }
                }
            }
        }
    }

    // matched ends
    let labels: Vec<&str> = d.edges.iter().map(|e| e.label.as_str()).collect();
    let matching = match_ends(f, &labels);
    for (se, partner) in &matching {
        if partner.is_none() {
            r.push(UnmatchedEnd, Some(se.strand), None, format!("{:?} end has no partner across T", se.end));
        }
    }

    // vertices
    for (vi, v) in f.vertices.iter().enumerate() {
        if v.ends.is_empty() {
            r.push_vertex(IsolatedVertex, vi, "vertex has no incident strands".into());
            continue;
        }
        if on_skeleton(d, v.torus, v.pt()) {
            r.push_vertex(CuspOnSkeleton, vi, "vertex lies on T".into());
        }
        let mut seen = BTreeSet::new();
        for e in &v.ends {
            if !seen.insert(*e) || f.strands[e.strand].end_ref(e.end) != EndRef::Vertex(vi) {
                r.push_vertex(DanglingEnd, vi, format!("listed end {:?} does not belong here", e));
            }
        }
        let dirs: Vec<i32> = v.ends.iter().map(|e| f.strands[e.strand].leaving_direction(e.end)).collect();
        let changes = (0..dirs.len()).filter(|&i| dirs[i] != dirs[(i + 1) % dirs.len()]).count();
        if changes > 2 {
            r.push_vertex(CyclicOrder, vi, "ends in each theta direction are not contiguous".into());
        }
    }

    // strand against strand
    match find_crossings(f) {
        Ok(_) => {}
        Err(bad) => {
            for (a, b, msg) in bad {
                r.push(TangentialCrossing, Some(a.strand), Some(a.segment), format!("{msg} with strand {} segment {}", b.strand, b.segment));
            }
        }
    }
    Ok(r)
}

fn on_skeleton(d: &MorseDiagram, torus: usize, p: Pt) -> bool {
    d.edges.iter().filter(|e| e.torus == torus).any(|e| e.segments().any(|(_, a, b)| geom::param_on_segment(p, a, b).is_some()))
}

/// Pair every end on `T` with an end on an equally labelled edge at the same
/// `theta`, approached from the opposite side.
pub fn match_ends(f: &GraphFront, labels: &[&str]) -> BTreeMap<StrandEnd, Option<StrandEnd>> {
    let mut groups: BTreeMap<(String, Q), Vec<(StrandEnd, usize, Side)>> = BTreeMap::new();
    for (si, s) in f.strands.iter().enumerate() {
        for k in [EndKind::Start, EndKind::End] {
            if let EndRef::OnEdge { edge, side } = s.end_ref(k) {
                let label = labels.get(edge).copied().unwrap_or("").to_string();
                let theta = s.end_point(k).theta;
                groups.entry((label, theta)).or_default().push((StrandEnd { strand: si, end: k }, edge, side));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (_, mut ends) in groups {
        ends.sort_by_key(|&(se, edge, _)| (edge, se));
        let mut used = vec![false; ends.len()];
        for i in 0..ends.len() {
            if used[i] || ends[i].2 != Side::Left {
                continue;
            }
            let j = (0..ends.len()).find(|&j| !used[j] && ends[j].2 == Side::Right && ends[j].1 != ends[i].1);
            if let Some(j) = j {
                used[i] = true;
                used[j] = true;
                out.insert(ends[i].0, Some(ends[j].0));
                out.insert(ends[j].0, Some(ends[i].0));
            }
        }
        for (i, e) in ends.iter().enumerate() {
            if !used[i] {
                out.insert(e.0, None);
            }
        }
    }
    out
}

type BadContact = (SegmentRef, SegmentRef, &'static str);

/// Transverse double points of the front, or the list of non-generic contacts.
fn find_crossings(f: &GraphFront) -> Result<Vec<Crossing>, Vec<BadContact>> {
    let mut segs: Vec<(SegmentRef, usize, Pt, Pt)> = Vec::new();
    for (si, s) in f.strands.iter().enumerate() {
        for i in 0..s.n_segments() {
            let (a, b) = s.segment(i);
            segs.push((SegmentRef { strand: si, segment: i }, s.torus, a, b));
        }
    }
    let mut crossings = Vec::new();
    let mut bad = Vec::new();
    for x in 0..segs.len() {
        for y in x + 1..segs.len() {
            let (ra, ta, a0, a1) = segs[x];
            let (rb, tb, b0, b1) = segs[y];
            if ta != tb {
                continue;
            }
            for h in geom::segment_hits(a0, a1, b0, b1) {
                match h {
                    SegHit::Overlap => bad.push((ra, rb, "overlap")),
                    SegHit::Point { t, u, at } => {
                        let interior = |v: Q| v.is_positive() && v < Q::one();
                        if interior(t) && interior(u) {
                            let sa = geom::slope(delta(a0, a1));
                            let sb = geom::slope(delta(b0, b1));
                            let key = |s: Option<Q>| s.map(|v| v.abs());
                            let (near, far) = if key(sa) <= key(sb) { (ra, rb) } else { (rb, ra) };
                            if sa == sb {
                                bad.push((ra, rb, "tangency"));
                            }
                            crossings.push(Crossing { torus: ta, at, near, far });
                        } else if !expected_contact(f, ra, t, rb, u) {
                            bad.push((ra, rb, "contact at a breakpoint"));
                        }
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        crossings.sort_by(|p, q| (p.torus, p.at, p.near, p.far).cmp(&(q.torus, q.at, q.near, q.far)));
        Ok(crossings)
    } else {
        Err(bad)
    }
}

/// Contacts at segment endpoints that the front is built from: consecutive
/// segments of a strand, and strand ends meeting at a common graph vertex.
fn expected_contact(f: &GraphFront, a: SegmentRef, t: Q, b: SegmentRef, u: Q) -> bool {
    let end_of = |r: SegmentRef, par: Q| -> Option<(usize, usize)> {
        // (strand, point index) when the contact is at a breakpoint
        if par.is_zero() {
            Some((r.strand, r.segment))
        } else if par.is_one() {
            Some((r.strand, r.segment + 1))
        } else {
            None
        }
    };
    let (Some(pa), Some(pb)) = (end_of(a, t), end_of(b, u)) else {
        return false;
    };
    let norm = |(s, i): (usize, usize)| -> (usize, usize) {
        let st = &f.strands[s];
        if st.is_closed() && i == st.points.len() - 1 {
            (s, 0)
        } else {
            (s, i)
        }
    };
    let (pa, pb) = (norm(pa), norm(pb));
    if pa == pb {
        return true;
    }
    let vertex_of = |(s, i): (usize, usize)| -> Option<usize> {
        let st = &f.strands[s];
        let r = if i == 0 {
            st.start
        } else if i == st.points.len() - 1 {
            st.end
        } else {
            return None;
        };
        match r {
            EndRef::Vertex(v) => Some(v),
            _ => None,
        }
    };
    matches!((vertex_of(pa), vertex_of(pb)), (Some(x), Some(y)) if x == y)
}

/// Assign over/under at every double point: the branch with slope closer to
/// zero is nearer the binding.
pub fn resolve_crossings(f: &GraphFront) -> Result<GraphFront, FrontError> {
    match find_crossings(f) {
        Ok(c) => {
            let mut g = f.clone();
            g.crossings = c;
            Ok(g)
        }
        Err(bad) => {
            let (a, _, _) = bad[0];
            let p = f.strands[a.strand].points[a.segment].pt;
            Err(FrontError::TangentialCrossing(show(p)))
        }
    }
}

/// Place a new valence-2 vertex at `point`, an interior point of a
/// non-terminal segment of `strand`.
pub fn subdivide_edge(f: &GraphFront, strand: usize, point: Pt) -> Result<GraphFront, FrontError> {
    let s = f.strands.get(strand).ok_or(FrontError::PointNotOnStrand(strand))?;
    let point = point.canonical();
    let seg = (0..s.n_segments()).find(|&i| {
        let (a, b) = s.segment(i);
        !s.is_terminal(i)
            && geom::param_on_segment(point, a, b).is_some_and(|t| t.is_positive() && t < Q::one())
    });
    let Some(k) = seg else {
        return Err(FrontError::PointNotOnStrand(strand));
    };
    let mut g = f.clone();
    let v = g.vertices.len();
    let mid = FrontPoint::new(point);
    if s.is_closed() {
        let n = s.points.len() - 1;
        let mut pts = vec![mid];
        pts.extend((k + 1..=n).map(|i| s.points[i]));
        pts.extend((1..=k).map(|i| s.points[i]));
        pts.push(mid);
        g.strands[strand] = FrontStrand { torus: s.torus, points: pts, start: EndRef::Vertex(v), end: EndRef::Vertex(v) };
        g.vertices.push(GraphVertex {
            torus: s.torus,
            theta: point.theta,
            z: point.z,
            ends: vec![StrandEnd { strand, end: EndKind::End }, StrandEnd { strand, end: EndKind::Start }],
        });
    } else {
        let new_id = g.strands.len();
        let mut head: Vec<FrontPoint> = s.points[..=k].to_vec();
        head.push(mid);
        let mut tail = vec![mid];
        tail.extend_from_slice(&s.points[k + 1..]);
        g.strands[strand] = FrontStrand { torus: s.torus, points: head, start: s.start, end: EndRef::Vertex(v) };
        g.strands.push(FrontStrand { torus: s.torus, points: tail, start: EndRef::Vertex(v), end: s.end });
        if let EndRef::Vertex(w) = s.end {
            for e in g.vertices[w].ends.iter_mut() {
                if *e == (StrandEnd { strand, end: EndKind::End }) {
                    *e = StrandEnd { strand: new_id, end: EndKind::End };
                }
            }
        }
        g.vertices.push(GraphVertex {
            torus: s.torus,
            theta: point.theta,
            z: point.z,
            ends: vec![StrandEnd { strand, end: EndKind::End }, StrandEnd { strand: new_id, end: EndKind::Start }],
        });
    }
    if !f.crossings.is_empty() {
        g = resolve_crossings(&g)?;
    }
    Ok(g)
}

/// One step of a chain: a strand traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub strand: usize,
    pub forward: bool,
}

/// An edge of the abstract graph: strands glued through matched ends.
///
/// `from`/`to` are graph vertices; both are `None` for a closed chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub steps: Vec<ChainStep>,
    pub from: Option<usize>,
    pub to: Option<usize>,
}

impl Chain {
    pub fn is_closed(&self) -> bool {
        self.from.is_none()
    }
}

/// Split the front into chains. Requires every end on `T` to be matched.
pub fn chains(f: &GraphFront, d: &MorseDiagram) -> Result<Vec<Chain>, FrontError> {
    let labels: Vec<&str> = d.edges.iter().map(|e| e.label.as_str()).collect();
    let matching = match_ends(f, &labels);
    let mut visited = vec![false; f.strands.len()];
    let mut out = Vec::new();

    let walk = |start: ChainStep, visited: &mut Vec<bool>| -> Result<(Vec<ChainStep>, Option<usize>), FrontError> {
        let mut steps = Vec::new();
        let mut cur = start;
        loop {
            if visited[cur.strand] {
                return Ok((steps, None));
            }
            visited[cur.strand] = true;
            steps.push(cur);
            let s = &f.strands[cur.strand];
            let far = if cur.forward { EndKind::End } else { EndKind::Start };
            match s.end_ref(far) {
                EndRef::Vertex(v) => return Ok((steps, Some(v))),
                EndRef::Closed => return Ok((steps, None)),
                EndRef::OnEdge { .. } => {
                    let here = StrandEnd { strand: cur.strand, end: far };
                    let Some(Some(p)) = matching.get(&here) else {
                        return Err(FrontError::Invalid(format!("strand {} has an unmatched end", cur.strand)));
                    };
                    cur = ChainStep { strand: p.strand, forward: p.end == EndKind::Start };
                }
            }
        }
    };

    for (vi, v) in f.vertices.iter().enumerate() {
        for e in &v.ends {
            if visited[e.strand] {
                continue;
            }
            let start = ChainStep { strand: e.strand, forward: e.end == EndKind::Start };
            let (steps, to) = walk(start, &mut visited)?;
            out.push(Chain { steps, from: Some(vi), to });
        }
    }
    for si in 0..f.strands.len() {
        if visited[si] {
            continue;
        }
        let (steps, to) = walk(ChainStep { strand: si, forward: true }, &mut visited)?;
        if to.is_some() {
            return Err(FrontError::Invalid(format!("strand {si} reaches a vertex that does not list it")));
        }
        out.push(Chain { steps, from: None, to: None });
    }
    Ok(out)
}

/// Vertex and edge counts of the abstract graph. Closed chains without
/// vertices are circles and contribute nothing to either count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCounts {
    pub vertices: usize,
    pub edges: usize,
    pub circles: usize,
}

impl GraphCounts {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64
    }
}

pub fn graph_counts(f: &GraphFront, d: &MorseDiagram) -> Result<GraphCounts, FrontError> {
    let c = chains(f, d)?;
    let circles = c.iter().filter(|c| c.is_closed()).count();
    Ok(GraphCounts { vertices: f.vertices.len(), edges: c.len() - circles, circles })
}

/// Number of cusps over the whole front.
pub fn cusp_count(f: &GraphFront) -> usize {
    f.strands.iter().map(|s| s.cusp_indices().len()).sum()
}

/// Every point of the front's image, sampled at the breakpoints. Used to
/// compare images before and after subdivision.
pub fn image_segments(f: &GraphFront) -> Vec<(usize, Pt, Pt)> {
    let mut out = Vec::new();
    for s in &f.strands {
        for i in 0..s.n_segments() {
            let (a, b) = s.segment(i);
            out.push((s.torus, a, b));
        }
    }
    out
}

/// Does `p` lie on the image of the front?
pub fn image_contains(f: &GraphFront, torus: usize, p: Pt) -> bool {
    image_segments(f).iter().any(|&(t, a, b)| t == torus && geom::param_on_segment(p, a, b).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::builtin_diagram;
    use crate::rational::q;

    fn pt(a: i128, b: i128, c: i128, e: i128) -> Pt {
        Pt::new(q(a, b), q(c, e))
    }

    fn loop_front() -> GraphFront {
        let pts = (0..=4).map(|k| FrontPoint::new(Pt::new(q(k, 4), q(-k, 4)).canonical())).collect();
        GraphFront {
            strands: vec![FrontStrand { torus: 0, points: pts, start: EndRef::Closed, end: EndRef::Closed }],
            ..Default::default()
        }
    }

    #[test]
    fn closed_loop_is_valid() {
        let d = builtin_diagram("disk_identity").unwrap();
        let r = validate_front(&loop_front(), &d).unwrap();
        assert!(r.is_valid(), "{:?}", r);
    }

    #[test]
    fn positive_slope_is_flagged() {
        let d = builtin_diagram("disk_identity").unwrap();
        let mut f = loop_front();
        // (0,0) (1/4,3/4) (1/2,1) ... make segment 1 rise
        f.strands[0].points[2].pt = pt(1, 2, 7, 8);
        let r = validate_front(&f, &d).unwrap();
        assert!(r.issues.iter().any(|i| i.kind == FrontIssueKind::SlopeViolation && i.segment == Some(1)));
    }

    #[test]
    fn subdividing_a_loop() {
        let d = builtin_diagram("disk_identity").unwrap();
        let f = loop_front();
        let g = subdivide_edge(&f, 0, pt(1, 8, 7, 8)).unwrap();
        assert!(validate_front(&g, &d).unwrap().is_valid());
        let c = graph_counts(&g, &d).unwrap();
        assert_eq!((c.vertices, c.edges), (1, 1));
        assert!(matches!(subdivide_edge(&f, 0, pt(1, 8, 1, 8)), Err(FrontError::PointNotOnStrand(0))));
    }

    #[test]
    fn crossing_depth() {
        let d = builtin_diagram("disk_identity").unwrap();
        let a = FrontStrand {
            torus: 0,
            points: vec![FrontPoint::new(pt(0, 1, 1, 2)), FrontPoint::new(pt(1, 4, 1, 4)), FrontPoint::new(pt(1, 2, 0, 1)), FrontPoint::new(pt(3, 4, 3, 4)), FrontPoint::new(pt(0, 1, 1, 2))],
            start: EndRef::Closed,
            end: EndRef::Closed,
        };
        // slope -3 through (1/8, 3/8)
        let b = FrontStrand {
            torus: 0,
            points: vec![
                FrontPoint::new(pt(1, 12, 1, 2)),
                FrontPoint::new(pt(1, 6, 1, 4)),
                FrontPoint::new(pt(1, 4, 0, 1)),
                FrontPoint::new(pt(1, 3, 3, 4)),
                FrontPoint::new(pt(5, 12, 1, 2)),
                FrontPoint::new(pt(1, 2, 1, 4)),
                FrontPoint::new(pt(7, 12, 0, 1)),
                FrontPoint::new(pt(2, 3, 3, 4)),
                FrontPoint::new(pt(3, 4, 1, 2)),
                FrontPoint::new(pt(5, 6, 1, 4)),
                FrontPoint::new(pt(11, 12, 0, 1)),
                FrontPoint::new(pt(0, 1, 3, 4)),
                FrontPoint::new(pt(1, 12, 1, 2)),
            ],
            start: EndRef::Closed,
            end: EndRef::Closed,
        };
        let f = GraphFront { strands: vec![a, b], ..Default::default() };
        let g = resolve_crossings(&f).unwrap();
        assert!(!g.crossings.is_empty());
        assert!(g.crossings.iter().all(|c| c.near.strand == 0));
        assert_eq!(resolve_crossings(&g).unwrap(), g);
        let r = validate_front(&g, &d).unwrap();
        assert!(r.is_valid(), "{:?}", r);
    }
}
