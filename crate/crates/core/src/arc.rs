//! Arc diagrams: Legendrian graphs whose edges each live in one page.
//!
//! Every edge is a wire, a union of vertical arcs at a common `theta` that
//! may pass from torus to torus through matched points of `T`. Vertices sit
//! on the binding and are recorded by torus and height `z`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front::{EndKind, FrontError};
use crate::geom::{delta, Pt};
use crate::morse::MorseDiagram;
use crate::rational::{fmt_q, serde_q, signed_delta, unit, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcEnd {
    /// A binding vertex.
    Vertex(usize),
    /// A point of the `T` edge with this index.
    OnEdge(usize),
}

/// Vertical arc at the wire's `theta`, running down from `z_from` to `z_to`
/// (modulo 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub z_from: Q,
    #[serde(with = "serde_q")]
    pub z_to: Q,
    pub from: ArcEnd,
    pub to: ArcEnd,
}

impl Arc {
    /// Length of the descent from `z_from` to `z_to`.
    pub fn length(&self) -> Q {
        unit(self.z_from - self.z_to)
    }

    /// Is `z` strictly inside the arc?
    pub fn contains_interior(&self, z: Q) -> bool {
        let d = unit(self.z_from - z);
        d.is_positive() && d < self.length()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wire {
    #[serde(with = "serde_q")]
    pub theta: Q,
    pub arcs: Vec<Arc>,
}

impl Wire {
    pub fn total_length(&self) -> Q {
        self.arcs.iter().map(|a| a.length()).sum()
    }

    pub fn end_vertex(&self, k: EndKind) -> Option<usize> {
        let e = match k {
            EndKind::Start => self.arcs.first()?.from,
            EndKind::End => self.arcs.last()?.to,
        };
        match e {
            ArcEnd::Vertex(v) => Some(v),
            ArcEnd::OnEdge(_) => None,
        }
    }

    /// Number of points where the wire passes through `T`.
    pub fn skeleton_crossings(&self) -> usize {
        self.arcs.len().saturating_sub(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WireEnd {
    pub wire: usize,
    pub end: EndKind,
}

/// A vertex on the binding, with incident wire ends in increasing `theta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingVertex {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub z: Q,
    pub ends: Vec<WireEnd>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDiagram {
    pub vertices: Vec<BindingVertex>,
    pub wires: Vec<Wire>,
}

impl ArcDiagram {
    /// `V - E` of the incidence graph.
    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.wires.len() as i64
    }

    /// Sorted multiset of `theta` values at which wires cross `T`.
    pub fn skeleton_crossing_thetas(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self
            .wires
            .iter()
            .flat_map(|w| std::iter::repeat_n(w.theta, w.skeleton_crossings()))
            .collect();
        v.sort();
        v
    }

    /// Incidence graph as a list of (vertex, vertex) pairs, one per wire.
    pub fn incidence(&self) -> Vec<(usize, usize)> {
        self.wires
            .iter()
            .map(|w| (w.end_vertex(EndKind::Start).unwrap_or(usize::MAX), w.end_vertex(EndKind::End).unwrap_or(usize::MAX)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcIssueKind {
    ThetaCollision,
    UnmatchedInternalEnd,
    OrphanEnd,
    SkeletonCrossing,
    ArcOverlap,
    VertexCollision,
    SlopeViolation,
    Drift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcIssue {
    pub kind: ArcIssueKind,
    pub wire: Option<usize>,
    pub vertex: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcReport {
    pub issues: Vec<ArcIssue>,
}

impl ArcReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn kinds(&self) -> Vec<ArcIssueKind> {
        let mut k: Vec<_> = self.issues.iter().map(|i| i.kind).collect();
        k.sort();
        k.dedup();
        k
    }

    fn wire(&mut self, kind: ArcIssueKind, wire: usize, detail: String) {
        self.issues.push(ArcIssue { kind, wire: Some(wire), vertex: None, detail });
    }

    fn vertex(&mut self, kind: ArcIssueKind, vertex: usize, detail: String) {
        self.issues.push(ArcIssue { kind, wire: None, vertex: Some(vertex), detail });
    }

    pub fn summary(&self) -> String {
        self.issues.iter().map(|i| format!("{:?}: {}", i.kind, i.detail)).collect::<Vec<_>>().join("; ")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcError {
    #[error("malformed arc diagram: {0}")]
    Malformed(String),
    #[error("epsilon {epsilon} is too large; it must be below {bound}")]
    EpsilonTooLarge { epsilon: String, bound: String },
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error("construction produced an invalid diagram: {0}")]
    Invalid(String),
}

fn malformed(msg: impl Into<String>) -> ArcError {
    ArcError::Malformed(msg.into())
}

fn check_structure(a: &ArcDiagram, d: &MorseDiagram) -> Result<(), ArcError> {
    for (vi, v) in a.vertices.iter().enumerate() {
        if v.torus >= d.tori {
            return Err(malformed(format!("vertex {vi} on missing torus {}", v.torus)));
        }
        if !crate::rational::is_unit(v.z) {
            return Err(malformed(format!("vertex {vi} has non-canonical z")));
        }
        if let Some(e) = v.ends.iter().find(|e| e.wire >= a.wires.len()) {
            return Err(malformed(format!("vertex {vi} lists missing wire {}", e.wire)));
        }
    }
    for (wi, w) in a.wires.iter().enumerate() {
        if !crate::rational::is_unit(w.theta) {
            return Err(malformed(format!("wire {wi} has non-canonical theta")));
        }
        if w.arcs.is_empty() {
            return Err(malformed(format!("wire {wi} has no arcs")));
        }
        for arc in &w.arcs {
            if arc.torus >= d.tori || !crate::rational::is_unit(arc.z_from) || !crate::rational::is_unit(arc.z_to) {
                return Err(malformed(format!("wire {wi} has an arc off the diagram")));
            }
            if arc.z_from == arc.z_to {
                return Err(malformed(format!("wire {wi} has a degenerate arc")));
            }
            for e in [arc.from, arc.to] {
                match e {
                    ArcEnd::Vertex(v) if v >= a.vertices.len() => {
                        return Err(malformed(format!("wire {wi} ends at missing vertex {v}")));
                    }
                    ArcEnd::OnEdge(e) if e >= d.edges.len() => {
                        return Err(malformed(format!("wire {wi} meets missing edge {e}")));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

/// Height of edge `edge` over `theta`, if the edge meets that slice.
pub fn edge_height(d: &MorseDiagram, edge: usize, theta: Q) -> Vec<Q> {
    d.slice_points(theta).into_iter().filter(|p| p.edge == edge).map(|p| p.z).collect()
}

/// Check the wire and arc-diagram conditions against `d`.
pub fn validate_arc_diagram(a: &ArcDiagram, d: &MorseDiagram) -> Result<ArcReport, ArcError> {
    use ArcIssueKind::*;
    check_structure(a, d)?;
    let mut r = ArcReport::default();
    let vertex_thetas = d.vertex_thetas();

    for (wi, w) in a.wires.iter().enumerate() {
        if vertex_thetas.contains(&w.theta) {
            r.wire(ThetaCollision, wi, format!("theta = {} meets a vertex of T", fmt_q(w.theta)));
        }
        // ends
        for (k, arc_end, z, torus) in [
            (EndKind::Start, w.arcs[0].from, w.arcs[0].z_from, w.arcs[0].torus),
            (EndKind::End, w.arcs[w.arcs.len() - 1].to, w.arcs[w.arcs.len() - 1].z_to, w.arcs[w.arcs.len() - 1].torus),
        ] {
            match arc_end {
                ArcEnd::OnEdge(_) => r.wire(OrphanEnd, wi, format!("{k:?} end lies on T")),
                ArcEnd::Vertex(v) => {
                    let bv = &a.vertices[v];
                    let listed = bv.ends.iter().filter(|e| **e == WireEnd { wire: wi, end: k }).count();
                    if bv.torus != torus || bv.z != z || listed != 1 {
                        r.wire(OrphanEnd, wi, format!("{k:?} end is not at vertex {v}"));
                    }
                }
            }
        }
        // internal ends
        for (i, pair) in w.arcs.windows(2).enumerate() {
            let (x, y) = (&pair[0], &pair[1]);
            let (ArcEnd::OnEdge(e1), ArcEnd::OnEdge(e2)) = (x.to, y.from) else {
                r.wire(UnmatchedInternalEnd, wi, format!("arcs {i} and {} do not meet on T", i + 1));
                continue;
            };
            let ok = e1 != e2
                && d.edges[e1].label == d.edges[e2].label
                && d.edges[e1].torus == x.torus
                && d.edges[e2].torus == y.torus
                && edge_height(d, e1, w.theta).contains(&x.z_to)
                && edge_height(d, e2, w.theta).contains(&y.z_from);
            if !ok {
                r.wire(UnmatchedInternalEnd, wi, format!("arcs {i} and {} are not glued across a handle", i + 1));
            }
        }
        // interiors avoid T
        let slice = d.slice_points(w.theta);
        for (i, arc) in w.arcs.iter().enumerate() {
            if slice.iter().any(|p| p.torus == arc.torus && arc.contains_interior(p.z)) {
                r.wire(SkeletonCrossing, wi, format!("arc {i} crosses T"));
            }
            for (end, z) in [(arc.from, arc.z_from), (arc.to, arc.z_to)] {
                if matches!(end, ArcEnd::Vertex(_)) && slice.iter().any(|p| p.torus == arc.torus && p.z == z) {
                    r.wire(SkeletonCrossing, wi, format!("arc {i} has a vertex end on T"));
                }
            }
        }
        // arcs of one wire are disjoint
        for i in 0..w.arcs.len() {
            for j in i + 1..w.arcs.len() {
                let (x, y) = (&w.arcs[i], &w.arcs[j]);
                if x.torus != y.torus {
                    continue;
                }
                let touch = x.contains_interior(y.z_from)
                    || x.contains_interior(y.z_to)
                    || y.contains_interior(x.z_from)
                    || y.contains_interior(x.z_to)
                    || (x.z_from == y.z_from && x.z_to == y.z_to);
                if touch {
                    r.wire(ArcOverlap, wi, format!("arcs {i} and {j} overlap"));
                }
            }
        }
    }

    let mut by_theta: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (wi, w) in a.wires.iter().enumerate() {
        by_theta.entry(w.theta).or_default().push(wi);
    }
    for (theta, ws) in by_theta {
        if ws.len() > 1 {
            for &wi in &ws[1..] {
                r.wire(ThetaCollision, wi, format!("theta = {} shared with wire {}", fmt_q(theta), ws[0]));
            }
        }
    }

    for (vi, v) in a.vertices.iter().enumerate() {
        for e in &v.ends {
            if a.wires[e.wire].end_vertex(e.end) != Some(vi) {
                r.vertex(OrphanEnd, vi, format!("listed end {e:?} belongs elsewhere"));
            }
        }
        if v.ends.is_empty() {
            r.vertex(OrphanEnd, vi, "vertex has no wires".into());
        }
        for (vj, u) in a.vertices.iter().enumerate().skip(vi + 1) {
            if u.torus == v.torus && u.z == v.z {
                r.vertex(VertexCollision, vj, format!("same binding point as vertex {vi}"));
            }
        }
    }
    Ok(r)
}

/// One arc of a wire after smoothing, as a polyline on its torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspedPiece {
    pub torus: usize,
    pub points: Vec<Pt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspedWire {
    pub wire: usize,
    pub pieces: Vec<CuspedPiece>,
}

/// Smoothing of an arc diagram whose strands have slope `-1/epsilon` except
/// for horizontal stubs at the wire ends and vertical stubs where they pass
/// through `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspedArcDiagram {
    pub base: ArcDiagram,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    pub wires: Vec<CuspedWire>,
}

/// Smallest gap between distinct wire angles and between wire angles and
/// vertex slices, going around the circle.
pub fn minimal_theta_gap(a: &ArcDiagram, d: &MorseDiagram) -> Q {
    let mut thetas: Vec<Q> = a.wires.iter().map(|w| w.theta).collect();
    thetas.extend(d.vertex_thetas());
    thetas.sort();
    if thetas.len() < 2 {
        return Q::one();
    }
    let mut gap = Q::one();
    for i in 0..thetas.len() {
        let next = if i + 1 < thetas.len() { thetas[i + 1] } else { thetas[0] + Q::one() };
        let g = next - thetas[i];
        if g.is_positive() && g < gap {
            gap = g;
        }
    }
    gap
}

/// Largest admissible smoothing parameter (exclusive).
pub fn epsilon_bound(a: &ArcDiagram, d: &MorseDiagram) -> Q {
    let zmax = a.wires.iter().map(|w| w.total_length()).max().unwrap_or_else(Q::zero);
    let scale = if zmax > Q::one() { zmax } else { Q::one() };
    minimal_theta_gap(a, d) / Q::from_integer(2) / scale
}

/// Smooth every wire of `a` with parameter `epsilon`.
pub fn to_cusped(a: &ArcDiagram, d: &MorseDiagram, epsilon: Q) -> Result<CuspedArcDiagram, ArcError> {
    let bound = epsilon_bound(a, d);
    if !epsilon.is_positive() || epsilon >= bound {
        return Err(ArcError::EpsilonTooLarge { epsilon: fmt_q(epsilon), bound: fmt_q(bound) });
    }
    let two = Q::from_integer(2);
    let eight = Q::from_integer(8);
    let mut wires = Vec::with_capacity(a.wires.len());
    for (wi, w) in a.wires.iter().enumerate() {
        let lengths: Vec<Q> = w.arcs.iter().map(|x| x.length()).collect();
        let total: Q = lengths.iter().copied().sum();
        // theta equals the wire angle on [lo, hi], which covers every
        // passage through T
        let n = w.arcs.len();
        let (lo, hi, eta) = if n > 1 {
            let mu = lengths[0].min(lengths[n - 1]) / Q::from_integer(4);
            (lengths[0] - mu, total - lengths[n - 1] + mu, epsilon * mu)
        } else {
            (total / two, total / two, epsilon * total / eight)
        };
        let theta_at = |s: Q| -> Q {
            let off = if s < lo {
                s - lo
            } else if s > hi {
                s - hi
            } else {
                Q::zero()
            };
            unit(w.theta + epsilon * off)
        };
        let mut pieces = Vec::new();
        let mut s0 = Q::zero();
        for (i, arc) in w.arcs.iter().enumerate() {
            let s1 = s0 + lengths[i];
            let at = |s: Q| Pt::new(theta_at(s), unit(arc.z_from - (s - s0)));
            let mut marks: Vec<Q> = (0..=4).map(|k| s0 + lengths[i] * Q::new(k, 4)).collect();
            if n > 1 {
                marks.extend([lo, hi].into_iter().filter(|&s| s > s0 && s < s1));
            }
            marks.sort();
            marks.dedup();
            let mut pts = Vec::new();
            if i == 0 {
                pts.push(Pt::new(unit(theta_at(s0) - eta), arc.z_from));
            }
            pts.extend(marks.into_iter().map(at));
            if i + 1 == n {
                pts.push(Pt::new(unit(theta_at(s1) + eta), arc.z_to));
            }
            pts.dedup();
            pieces.push(CuspedPiece { torus: arc.torus, points: pts });
            s0 = s1;
        }
        wires.push(CuspedWire { wire: wi, pieces });
    }
    Ok(CuspedArcDiagram { base: a.clone(), epsilon, wires })
}

/// Check the slope conditions and the drift bound of a smoothed diagram.
pub fn validate_cusped(c: &CuspedArcDiagram) -> ArcReport {
    use ArcIssueKind::*;
    let mut r = ArcReport::default();
    let steep = -Q::one() / c.epsilon;
    let mut ranges: Vec<(usize, Q, Q)> = Vec::new();
    for cw in &c.wires {
        let Some(w) = c.base.wires.get(cw.wire) else {
            r.issues.push(ArcIssue { kind: OrphanEnd, wire: Some(cw.wire), vertex: None, detail: "no base wire".into() });
            continue;
        };
        if cw.pieces.len() != w.arcs.len() {
            r.wire(OrphanEnd, cw.wire, "piece count differs from arc count".into());
            continue;
        }
        let limit = c.epsilon * w.total_length();
        let (mut lo, mut hi) = (Q::zero(), Q::zero());
        let n = cw.pieces.len();
        for (i, piece) in cw.pieces.iter().enumerate() {
            let m = piece.points.len();
            if m < 2 {
                r.wire(SlopeViolation, cw.wire, format!("piece {i} is a point"));
                continue;
            }
            for j in 0..m - 1 {
                let (dt, dz) = delta(piece.points[j], piece.points[j + 1]);
                let wire_end = (i == 0 && j == 0) || (i + 1 == n && j + 2 == m);
                let at_skeleton = (i > 0 && j == 0) || (i + 1 < n && j + 2 == m);
                let flat = dt.is_zero()
                    && !dz.is_zero()
                    && piece.points[j].theta == w.theta
                    && piece.points[j + 1].theta == w.theta;
                let ok = if wire_end {
                    dz.is_zero() && !dt.is_zero()
                } else if at_skeleton {
                    flat
                } else {
                    flat || (!dt.is_zero() && dz / dt == steep)
                };
                if !ok {
                    r.wire(SlopeViolation, cw.wire, format!("piece {i} segment {j} has the wrong slope"));
                }
            }
            for p in &piece.points {
                let off = signed_delta(w.theta, p.theta);
                if off.abs() > limit {
                    r.wire(Drift, cw.wire, format!("point drifts {} from the wire", fmt_q(off)));
                }
                lo = lo.min(off);
                hi = hi.max(off);
            }
            let arc = &w.arcs[i];
            let (first, last) = (piece.points[0], piece.points[m - 1]);
            if first.z != arc.z_from || last.z != arc.z_to || piece.torus != arc.torus {
                r.wire(OrphanEnd, cw.wire, format!("piece {i} does not span its arc"));
            }
        }
        ranges.push((cw.wire, lo, hi));
    }
    for i in 0..ranges.len() {
        for j in i + 1..ranges.len() {
            let (wi, lo1, hi1) = ranges[i];
            let (wj, lo2, hi2) = ranges[j];
            let (t1, t2) = (c.base.wires[wi].theta, c.base.wires[wj].theta);
            let d12 = signed_delta(t1, t2);
            // interval of wire j relative to wire i
            if !(d12 + lo2 > hi1 || d12 + hi2 < lo1) {
                r.wire(ThetaCollision, wj, format!("smoothed wire meets wire {wi}"));
            }
        }
    }
    r
}

/// Incidence graph of a smoothed diagram, read off its pieces.
pub fn cusped_incidence(c: &CuspedArcDiagram) -> Vec<(usize, usize)> {
    c.wires
        .iter()
        .map(|cw| {
            let w = &c.base.wires[cw.wire];
            (w.end_vertex(EndKind::Start).unwrap_or(usize::MAX), w.end_vertex(EndKind::End).unwrap_or(usize::MAX))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::builtin_diagram;
    use crate::rational::q;

    fn one_loop() -> ArcDiagram {
        ArcDiagram {
            vertices: vec![BindingVertex {
                torus: 0,
                z: q(1, 2),
                ends: vec![WireEnd { wire: 0, end: EndKind::Start }, WireEnd { wire: 0, end: EndKind::End }],
            }],
            wires: vec![Wire {
                theta: q(1, 3),
                arcs: vec![Arc { torus: 0, z_from: q(1, 2), z_to: q(1, 2), from: ArcEnd::Vertex(0), to: ArcEnd::Vertex(0) }],
            }],
        }
    }

    #[test]
    fn degenerate_arc_is_malformed() {
        let d = builtin_diagram("disk_identity").unwrap();
        assert!(matches!(validate_arc_diagram(&one_loop(), &d), Err(ArcError::Malformed(_))));
    }

    fn two_vertex() -> ArcDiagram {
        let end = |w, k| WireEnd { wire: w, end: k };
        ArcDiagram {
            vertices: vec![
                BindingVertex { torus: 0, z: q(3, 4), ends: vec![end(0, EndKind::Start), end(1, EndKind::End)] },
                BindingVertex { torus: 0, z: q(1, 4), ends: vec![end(0, EndKind::End), end(1, EndKind::Start)] },
            ],
            wires: vec![
                Wire {
                    theta: q(1, 4),
                    arcs: vec![Arc { torus: 0, z_from: q(3, 4), z_to: q(1, 4), from: ArcEnd::Vertex(0), to: ArcEnd::Vertex(1) }],
                },
                Wire {
                    theta: q(3, 4),
                    arcs: vec![Arc { torus: 0, z_from: q(1, 4), z_to: q(3, 4), from: ArcEnd::Vertex(1), to: ArcEnd::Vertex(0) }],
                },
            ],
        }
    }

    #[test]
    fn circle_validates_and_collides() {
        let d = builtin_diagram("disk_identity").unwrap();
        let a = two_vertex();
        assert!(validate_arc_diagram(&a, &d).unwrap().is_valid());
        let mut b = a.clone();
        b.wires[1].theta = q(1, 4);
        assert_eq!(validate_arc_diagram(&b, &d).unwrap().kinds(), vec![ArcIssueKind::ThetaCollision]);
    }

    #[test]
    fn smoothing_respects_the_bound() {
        let d = builtin_diagram("disk_identity").unwrap();
        let a = two_vertex();
        assert_eq!(epsilon_bound(&a, &d), q(1, 4));
        assert!(matches!(to_cusped(&a, &d, q(1, 4)), Err(ArcError::EpsilonTooLarge { .. })));
        let c = to_cusped(&a, &d, q(1, 8)).unwrap();
        assert!(validate_cusped(&c).is_valid(), "{:?}", validate_cusped(&c));
        let c2 = to_cusped(&a, &d, q(1, 16)).unwrap();
        assert_eq!(cusped_incidence(&c), cusped_incidence(&c2));
    }
}
