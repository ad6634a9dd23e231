//! Moving a front into arc position.
//!
//! Each segment of the front is replaced by a staircase of shallow (slope
//! `-epsilon`) and steep (slope `-1/epsilon`) parts. Maximal runs of shallow
//! parts are contracted onto the binding and become vertices; steep parts,
//! glued through matched points of `T`, become wires.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arc::{validate_arc_diagram, Arc, ArcDiagram, ArcEnd, ArcError, BindingVertex, Wire, WireEnd};
use crate::front::{graph_counts, match_ends, validate_front, EndKind, EndRef, FrontError, GraphFront, StrandEnd};
use crate::geom::{delta, Pt};
use crate::morse::MorseDiagram;
use crate::rational::{fmt_q, q, serde_q, serde_q_opt, simplest_between, unit, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartKind {
    Shallow,
    Steep,
}

/// One straight piece of the rectangular approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub kind: PartKind,
    pub from: Pt,
    #[serde(with = "serde_q")]
    pub dtheta: Q,
    #[serde(with = "serde_q")]
    pub dz: Q,
    /// Leading shallow part at this graph vertex.
    pub lead: Option<usize>,
    /// Steep part ending on `T` at this end of its strand.
    pub skeleton: Option<EndKind>,
    /// `theta` where a steep part leaves a vertex lead.
    #[serde(with = "serde_q_opt", default)]
    pub anchor: Option<Q>,
}

impl Part {
    pub fn to(&self) -> Pt {
        self.from.offset(self.dtheta, self.dz)
    }

    pub fn slope(&self) -> Q {
        self.dz / self.dtheta
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangularStrand {
    pub torus: usize,
    pub parts: Vec<Part>,
}

/// A front redrawn with slopes `-epsilon` and `-1/epsilon` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangularGraph {
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    /// Unit length of the shallow leads at graph vertices.
    #[serde(with = "serde_q")]
    pub lead: Q,
    /// Stair steps per segment.
    pub steps: usize,
    pub strands: Vec<RectangularStrand>,
    pub cusps: Vec<(usize, Pt)>,
}

impl RectangularGraph {
    /// Points where a steep part meets `T`.
    pub fn skeleton_points(&self) -> Vec<(usize, Pt)> {
        let mut out = Vec::new();
        for s in &self.strands {
            for p in &s.parts {
                match p.skeleton {
                    Some(EndKind::Start) => out.push((s.torus, p.from)),
                    Some(EndKind::End) => out.push((s.torus, p.to())),
                    None => {}
                }
            }
        }
        out.sort();
        out
    }
}

fn too_large(epsilon: Q, bound: Q) -> ArcError {
    ArcError::EpsilonTooLarge { epsilon: fmt_q(epsilon), bound: fmt_q(bound) }
}

/// Rank of each vertex end among the ends leaving in the same direction,
/// chosen so that increasing `theta` around the binding reproduces the
/// vertex's cyclic order.
fn lead_ranks(f: &GraphFront) -> BTreeMap<StrandEnd, usize> {
    let mut ranks = BTreeMap::new();
    for v in &f.vertices {
        let n = v.ends.len();
        let dirs: Vec<i32> = v.ends.iter().map(|e| f.strands[e.strand].leaving_direction(e.end)).collect();
        // rotate so the +theta block comes first
        let start = (0..n).find(|&i| dirs[i] > 0 && dirs[(i + n - 1) % n] < 0).unwrap_or(0);
        let order: Vec<usize> = (0..n).map(|k| (start + k) % n).collect();
        let plus: Vec<usize> = order.iter().copied().filter(|&i| dirs[i] > 0).collect();
        let minus: Vec<usize> = order.iter().copied().filter(|&i| dirs[i] <= 0).collect();
        for (r, &i) in plus.iter().enumerate() {
            ranks.insert(v.ends[i], r);
        }
        for (j, &i) in minus.iter().enumerate() {
            ranks.insert(v.ends[i], minus.len() - 1 - j);
        }
    }
    ranks
}

fn lead_unit(f: &GraphFront) -> Q {
    let mut shortest: Option<Q> = None;
    let mut valence = 1;
    for v in &f.vertices {
        valence = valence.max(v.ends.len());
        for e in &v.ends {
            let s = &f.strands[e.strand];
            let (a, b) = match e.end {
                EndKind::Start => s.segment(0),
                EndKind::End => s.segment(s.n_segments() - 1),
            };
            let len = delta(a, b).0.abs();
            shortest = Some(shortest.map_or(len, |m: Q| m.min(len)));
        }
    }
    match shortest {
        Some(m) => m / Q::from_integer(4 * (valence as i128 + 1)),
        None => Q::zero(),
    }
}

struct Builder {
    eps: Q,
    steps: usize,
    cursor: (Q, Q),
    parts: Vec<Part>,
}

impl Builder {
    fn push(&mut self, kind: PartKind, dtheta: Q) -> &mut Part {
        let k = match kind {
            PartKind::Shallow => self.eps,
            PartKind::Steep => Q::one() / self.eps,
        };
        let dz = -k * dtheta;
        let from = Pt::new(self.cursor.0, self.cursor.1).canonical();
        self.cursor = (self.cursor.0 + dtheta, self.cursor.1 + dz);
        self.parts.push(Part { kind, from, dtheta, dz, lead: None, skeleton: None, anchor: None });
        self.parts.last_mut().unwrap()
    }

    /// Staircase from the cursor to `target`.
    fn chord(&mut self, target: (Q, Q), steep_first: bool) -> Result<(), ArcError> {
        let eps = self.eps;
        let (a, b) = (target.0 - self.cursor.0, target.1 - self.cursor.1);
        if a.is_zero() || !(b / a).is_negative() {
            return Err(ArcError::Invalid("approximated chord is not of negative slope".into()));
        }
        let (aa, bb) = (a.abs(), b.abs());
        let t = (bb - eps * aa) / (Q::one() / eps - eps);
        let s = aa - t;
        if !t.is_positive() || !s.is_positive() {
            let slope = bb / aa;
            let bound = slope.min(Q::one() / slope);
            return Err(too_large(eps, bound));
        }
        let sign = if a.is_positive() { Q::one() } else { -Q::one() };
        let m = Q::from_integer(self.steps as i128);
        let (s, t) = (sign * s / m, sign * t / m);
        let half = t / Q::from_integer(2);
        if steep_first {
            let anchor = self.cursor.0;
            self.push(PartKind::Steep, half).anchor = Some(unit(anchor));
        }
        for k in 0..self.steps {
            self.push(PartKind::Shallow, s);
            let last = k + 1 == self.steps;
            self.push(PartKind::Steep, if steep_first && last { half } else { t });
        }
        debug_assert_eq!(self.cursor, target);
        Ok(())
    }
}

/// Replace every segment of a valid front by shallow and steep parts.
///
/// Parts next to `T` are steep; every graph vertex gets a shallow lead whose
/// length encodes the position of the end in the vertex's cyclic order.
pub fn slanted_rectangular_approximation(
    f: &GraphFront,
    epsilon: Q,
    steps: usize,
) -> Result<RectangularGraph, ArcError> {
    if steps == 0 {
        return Err(ArcError::Invalid("at least one step per segment".into()));
    }
    if !epsilon.is_positive() || epsilon >= Q::one() {
        return Err(too_large(epsilon, Q::one()));
    }
    let ranks = lead_ranks(f);
    let lambda = lead_unit(f);
    let eps = epsilon;
    let mut strands = Vec::with_capacity(f.strands.len());
    let mut cusps = Vec::new();
    for (si, s) in f.strands.iter().enumerate() {
        let n = s.n_segments();
        let mut pos: Vec<(Q, Q)> = vec![(s.points[0].pt.theta, s.points[0].pt.z)];
        for i in 0..n {
            let (a, b) = s.segment(i);
            let (dt, dz) = delta(a, b);
            let last = pos[i];
            pos.push((last.0 + dt, last.1 + dz));
        }
        let mut b = Builder { eps, steps, cursor: pos[0], parts: Vec::new() };
        let mut first = 0;
        let mut last = n;
        if let EndRef::OnEdge { .. } = s.start {
            let a = pos[1].0 - pos[0].0;
            let tau = eps * eps * a;
            b.push(PartKind::Steep, tau).skeleton = Some(EndKind::Start);
            b.push(PartKind::Shallow, a - tau);
            pos[1] = b.cursor;
            first = 1;
        }
        let mut end_tail = None;
        if let EndRef::OnEdge { .. } = s.end {
            let a = pos[n].0 - pos[n - 1].0;
            let tau = eps * eps * a;
            pos[n - 1] = (pos[n - 1].0, pos[n].1 + eps * (a - tau) + tau / eps);
            end_tail = Some(a);
            last = n - 1;
        }
        let mut trailing = None;
        if let EndRef::Vertex(v) = s.start {
            let sign = if (pos[1].0 - pos[0].0).is_positive() { Q::one() } else { -Q::one() };
            let r = ranks[&StrandEnd { strand: si, end: EndKind::Start }];
            b.push(PartKind::Shallow, sign * lambda * Q::from_integer(r as i128 + 1)).lead = Some(v);
        }
        if let EndRef::Vertex(v) = s.end {
            let sign = if (pos[n].0 - pos[n - 1].0).is_positive() { Q::one() } else { -Q::one() };
            let r = ranks[&StrandEnd { strand: si, end: EndKind::End }];
            let len = sign * lambda * Q::from_integer(r as i128 + 1);
            trailing = Some((v, len, (pos[n].0 - len, pos[n].1 + eps * len)));
        }
        for i in first..last {
            let target = match trailing {
                Some((_, _, t)) if i + 1 == n => t,
                _ => pos[i + 1],
            };
            let steep_first = i == 0 && matches!(s.start, EndRef::Vertex(_));
            b.chord(target, steep_first)?;
            if i + 1 == n && trailing.is_some() {
                let p = b.parts.last_mut().unwrap();
                p.anchor = Some(unit(target.0));
            }
        }
        if let Some(a) = end_tail {
            let tau = eps * eps * a;
            b.push(PartKind::Shallow, a - tau);
            b.push(PartKind::Steep, tau).skeleton = Some(EndKind::End);
        }
        if let Some((v, len, _)) = trailing {
            b.push(PartKind::Shallow, len).lead = Some(v);
        }
        debug_assert_eq!(b.cursor, pos[n]);
        for i in s.cusp_indices() {
            cusps.push((s.torus, Pt::new(pos[i].0, pos[i].1).canonical()));
        }
        strands.push(RectangularStrand { torus: s.torus, parts: b.parts });
    }
    cusps.sort();
    Ok(RectangularGraph { epsilon, lead: lambda, steps, strands, cusps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexOrigin {
    GraphVertex(usize),
    Cusp,
    Subdivision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedVertex {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub z: Q,
    pub origin: VertexOrigin,
    /// (strand, part) pairs contracted onto this vertex.
    pub parts: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedWire {
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q_opt", default)]
    pub moved_from: Option<Q>,
    pub parts: Vec<(usize, usize)>,
}

/// Everything needed to replay a run of [`to_arc_position`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionRecord {
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    pub rectangular: RectangularGraph,
    pub vertices: Vec<RecordedVertex>,
    pub wires: Vec<RecordedWire>,
}

impl SubdivisionRecord {
    /// Vertices added along edges of the graph (cusps included).
    pub fn subdivisions(&self) -> usize {
        self.vertices.iter().filter(|v| !matches!(v.origin, VertexOrigin::GraphVertex(_))).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Run(usize),
    Skeleton(StrandEnd),
}

/// Default smoothing parameter: a power of two below every segment slope
/// and its reciprocal.
pub fn auto_epsilon(f: &GraphFront) -> Q {
    let mut bound = q(1, 4);
    for s in &f.strands {
        for i in 0..s.n_segments() {
            if s.is_terminal(i) {
                continue;
            }
            let (a, b) = s.segment(i);
            if let Some(m) = crate::geom::slope(delta(a, b)) {
                if !m.is_zero() {
                    let m = m.abs();
                    bound = bound.min(m.min(Q::one() / m) / Q::from_integer(2));
                }
            }
        }
    }
    let mut eps = q(1, 8);
    while eps >= bound {
        eps /= Q::from_integer(2);
    }
    eps
}

/// Spread values that coincide. Fixed entries never move; a movable entry
/// sharing its value with another is shifted up by less than half the gap to
/// the next distinct value, using the simplest rational available.
fn separate(values: &mut [(Q, bool)]) -> Result<Vec<Option<Q>>, Q> {
    let mut moved = vec![None; values.len()];
    let mut distinct: Vec<Q> = values.iter().map(|v| v.0).collect();
    distinct.sort();
    distinct.dedup();
    let mut groups: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, v) in values.iter().enumerate() {
        groups.entry(v.0).or_default().push(i);
    }
    for (x, members) in groups {
        if members.len() < 2 {
            continue;
        }
        let fixed: Vec<usize> = members.iter().copied().filter(|&i| values[i].1).collect();
        if fixed.len() > 1 {
            return Err(x);
        }
        let keep = fixed.first().copied().unwrap_or(members[0]);
        let movers: Vec<usize> = members.into_iter().filter(|&i| i != keep).collect();
        let k = distinct.iter().position(|&d| d == x).unwrap();
        let next = if k + 1 < distinct.len() { distinct[k + 1] } else { distinct[0] + Q::one() };
        let gap = next - x;
        let step = gap / Q::from_integer(2 * movers.len() as i128);
        for (j, &i) in movers.iter().enumerate() {
            let lo = x + step * Q::from_integer(j as i128);
            let hi = x + step * Q::from_integer(j as i128 + 1);
            let lo = if j == 0 { x } else { lo };
            values[i].0 = unit(simplest_between(lo, hi));
            moved[i] = Some(x);
        }
    }
    Ok(moved)
}

/// Place a valid front in arc position.
///
/// Segments are refined into more stair steps until the staircase stays
/// clear of `T`. With `epsilon = None` a default is chosen and also halved
/// on failure.
pub fn to_arc_position(
    f: &GraphFront,
    d: &MorseDiagram,
    epsilon: Option<Q>,
) -> Result<(ArcDiagram, SubdivisionRecord), ArcError> {
    let report = validate_front(f, d)?;
    if !report.is_valid() {
        let msg = report.issues.iter().map(|i| format!("{:?}", i.kind)).collect::<Vec<_>>().join(", ");
        return Err(ArcError::Front(FrontError::Invalid(msg)));
    }
    let epsilons: Vec<Q> = match epsilon {
        Some(e) => vec![e],
        None => {
            let e = auto_epsilon(f);
            (0..4).map(|k| e / Q::from_integer(1 << k)).collect()
        }
    };
    let mut last_err = None;
    for steps in STEPS {
        for &eps in &epsilons {
            match arc_position_with(f, d, eps, steps) {
                Ok(out) => return Ok(out),
                Err(e @ ArcError::EpsilonTooLarge { .. }) if epsilon.is_some() => return Err(e),
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.expect("at least one attempt"))
}

const STEPS: [usize; 6] = [1, 2, 4, 8, 16, 32];

fn arc_position_with(
    f: &GraphFront,
    d: &MorseDiagram,
    eps: Q,
    steps: usize,
) -> Result<(ArcDiagram, SubdivisionRecord), ArcError> {
    let g = slanted_rectangular_approximation(f, eps, steps)?;
    let labels: Vec<&str> = d.edges.iter().map(|e| e.label.as_str()).collect();
    let matching = match_ends(f, &labels);

    // runs of shallow parts
    let mut run_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut runs: Vec<RecordedVertex> = Vec::new();
    let mut vertex_run: BTreeMap<usize, usize> = BTreeMap::new();
    for (si, s) in g.strands.iter().enumerate() {
        let mut k = 0;
        while k < s.parts.len() {
            if s.parts[k].kind != PartKind::Shallow {
                k += 1;
                continue;
            }
            let start = k;
            while k < s.parts.len() && s.parts[k].kind == PartKind::Shallow {
                k += 1;
            }
            let members: Vec<usize> = (start..k).collect();
            let lead = members.iter().find_map(|&m| s.parts[m].lead);
            let id = match lead {
                Some(v) => *vertex_run.entry(v).or_insert_with(|| {
                    runs.push(RecordedVertex {
                        torus: s.torus,
                        z: f.vertices[v].z,
                        origin: VertexOrigin::GraphVertex(v),
                        parts: vec![],
                    });
                    runs.len() - 1
                }),
                None => {
                    let mut z = s.parts[start].from.z;
                    let (mut lo, mut hi, mut acc) = (z, z, z);
                    for &m in &members {
                        acc += s.parts[m].dz;
                        lo = lo.min(acc);
                        hi = hi.max(acc);
                    }
                    z = unit((lo + hi) / Q::from_integer(2));
                    let on_cusp = members.iter().any(|&m| {
                        let p = &s.parts[m];
                        g.cusps.contains(&(s.torus, p.from)) || g.cusps.contains(&(s.torus, p.to()))
                    });
                    let origin = if on_cusp { VertexOrigin::Cusp } else { VertexOrigin::Subdivision };
                    runs.push(RecordedVertex { torus: s.torus, z, origin, parts: vec![] });
                    runs.len() - 1
                }
            };
            for m in members {
                run_of.insert((si, m), id);
                runs[id].parts.push((si, m));
            }
        }
    }

    // keep binding vertices on one torus at distinct heights
    let mut by_torus: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        by_torus.entry(r.torus).or_default().push(i);
    }
    for ids in by_torus.values() {
        let mut vals: Vec<(Q, bool)> = ids.iter().map(|&i| (runs[i].z, false)).collect();
        separate(&mut vals).expect("nothing is fixed");
        for (j, &i) in ids.iter().enumerate() {
            runs[i].z = vals[j].0;
        }
    }

    let side = |si: usize, k: usize, next: bool| -> Result<Side, ArcError> {
        let s = &g.strands[si];
        let closed = f.strands[si].is_closed();
        let n = s.parts.len();
        let nb = if next {
            if k + 1 < n {
                Some(k + 1)
            } else if closed {
                Some(0)
            } else {
                None
            }
        } else if k > 0 {
            Some(k - 1)
        } else if closed {
            Some(n - 1)
        } else {
            None
        };
        match nb {
            Some(j) if s.parts[j].kind == PartKind::Shallow => Ok(Side::Run(run_of[&(si, j)])),
            Some(_) => Err(ArcError::Invalid("two steep parts meet".into())),
            None => {
                let end = if next { EndKind::End } else { EndKind::Start };
                Ok(Side::Skeleton(StrandEnd { strand: si, end }))
            }
        }
    };

    // wires: steep parts chained through matched ends
    struct Leg {
        strand: usize,
        part: usize,
        forward: bool,
        enter: Side,
        exit: Side,
    }
    let mut visited: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut chains: Vec<Vec<Leg>> = Vec::new();
    for (si, s) in g.strands.iter().enumerate() {
        for (k, p) in s.parts.iter().enumerate() {
            if p.kind != PartKind::Steep || visited.contains_key(&(si, k)) {
                continue;
            }
            let prev = side(si, k, false)?;
            let next = side(si, k, true)?;
            // begin the walk from a side that is a binding vertex
            let (mut cur, mut forward, mut enter) = match (prev, next) {
                (Side::Run(_), _) => ((si, k), true, prev),
                (_, Side::Run(_)) => ((si, k), false, next),
                _ => return Err(ArcError::Invalid("steep part between two points of T".into())),
            };
            let mut legs = Vec::new();
            loop {
                visited.insert(cur, true);
                let exit = side(cur.0, cur.1, forward)?;
                legs.push(Leg { strand: cur.0, part: cur.1, forward, enter, exit });
                match exit {
                    Side::Run(_) => break,
                    Side::Skeleton(se) => {
                        let Some(Some(p)) = matching.get(&se) else {
                            return Err(ArcError::Front(FrontError::Invalid("unmatched end".into())));
                        };
                        let last = g.strands[p.strand].parts.len() - 1;
                        let (part, fwd) = match p.end {
                            EndKind::Start => (0, true),
                            EndKind::End => (last, false),
                        };
                        if visited.contains_key(&(p.strand, part)) {
                            return Err(ArcError::Invalid("wire closes up through T".into()));
                        }
                        cur = (p.strand, part);
                        forward = fwd;
                        enter = Side::Skeleton(*p);
                    }
                }
            }
            // orient downwards
            let first = &legs[0];
            let dz0 = g.strands[first.strand].parts[first.part].dz;
            let descending = if first.forward { dz0.is_negative() } else { dz0.is_positive() };
            if !descending {
                legs.reverse();
                for l in legs.iter_mut() {
                    l.forward = !l.forward;
                    std::mem::swap(&mut l.enter, &mut l.exit);
                }
            }
            chains.push(legs);
        }
    }

    let end_point = |se: StrandEnd| f.strands[se.strand].end_point(se.end);
    let edge_of = |se: StrandEnd| match f.strands[se.strand].end_ref(se.end) {
        EndRef::OnEdge { edge, .. } => edge,
        _ => unreachable!("skeleton sides are ends on T"),
    };

    // wire angles
    let mut vals: Vec<(Q, bool)> = Vec::new();
    for legs in &chains {
        let skel = legs.iter().find_map(|l| match (l.enter, l.exit) {
            (Side::Skeleton(se), _) | (_, Side::Skeleton(se)) => Some(se),
            _ => None,
        });
        let theta = match skel {
            Some(se) => (end_point(se).theta, true),
            None => {
                let l = &legs[0];
                let p = &g.strands[l.strand].parts[l.part];
                match p.anchor {
                    Some(a) => (a, false),
                    None => (unit(p.from.theta + p.dtheta / Q::from_integer(2)), false),
                }
            }
        };
        vals.push(theta);
    }
    let n_wires = vals.len();
    for t in d.vertex_thetas() {
        vals.push((t, true));
    }
    let moved = separate(&mut vals).map_err(|t| ArcError::Invalid(format!("wires share theta = {}", fmt_q(t))))?;

    let mut wires = Vec::with_capacity(n_wires);
    let mut recorded = Vec::with_capacity(n_wires);
    for (wi, legs) in chains.iter().enumerate() {
        let mut arcs = Vec::new();
        for l in legs {
            let p = &g.strands[l.strand].parts[l.part];
            let dz = if l.forward { p.dz } else { -p.dz };
            if !dz.is_negative() {
                return Err(ArcError::Invalid("wire does not descend".into()));
            }
            let end_of = |s: Side| match s {
                Side::Run(r) => (runs[r].z, ArcEnd::Vertex(r)),
                Side::Skeleton(se) => (end_point(se).z, ArcEnd::OnEdge(edge_of(se))),
            };
            let (z_from, from) = end_of(l.enter);
            let (z_to, to) = end_of(l.exit);
            arcs.push(Arc { torus: g.strands[l.strand].torus, z_from, z_to, from, to });
        }
        if arcs.iter().any(|a| a.z_from == a.z_to) {
            return Err(ArcError::Invalid("wire collapses to a point".into()));
        }
        wires.push(Wire { theta: vals[wi].0, arcs });
        recorded.push(RecordedWire {
            theta: vals[wi].0,
            moved_from: moved[wi],
            parts: legs.iter().map(|l| (l.strand, l.part)).collect(),
        });
    }

    let mut vertices: Vec<BindingVertex> =
        runs.iter().map(|r| BindingVertex { torus: r.torus, z: r.z, ends: vec![] }).collect();
    let mut incident: Vec<Vec<(Q, WireEnd)>> = vec![Vec::new(); runs.len()];
    for (wi, w) in wires.iter().enumerate() {
        for k in [EndKind::Start, EndKind::End] {
            if let Some(v) = w.end_vertex(k) {
                incident[v].push((w.theta, WireEnd { wire: wi, end: k }));
            }
        }
    }
    for (v, mut ends) in incident.into_iter().enumerate() {
        ends.sort();
        vertices[v].ends = ends.into_iter().map(|e| e.1).collect();
    }
    let a = ArcDiagram { vertices, wires };

    let report = validate_arc_diagram(&a, d)?;
    if !report.is_valid() {
        return Err(ArcError::Invalid(report.summary()));
    }
    let counts = graph_counts(f, d)?;
    if a.euler() != counts.euler() {
        return Err(ArcError::Invalid(format!("V - E changed from {} to {}", counts.euler(), a.euler())));
    }
    let record = SubdivisionRecord { epsilon: eps, rectangular: g, vertices: runs, wires: recorded };
    Ok((a, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{cusp_count, FrontPoint, FrontStrand};
    use crate::generate::{builtin_front, random_graph_front};
    use crate::morse::{builtin_diagram, BUILTIN_NAMES};

    fn slope_one_loop() -> GraphFront {
        let pts = (0..=4).map(|k| FrontPoint::new(Pt::new(q(k, 4), q(-k, 4)).canonical())).collect();
        GraphFront {
            strands: vec![FrontStrand { torus: 0, points: pts, start: EndRef::Closed, end: EndRef::Closed }],
            ..Default::default()
        }
    }

    #[test]
    fn straight_strand_staircase() {
        let g = slanted_rectangular_approximation(&slope_one_loop(), q(1, 8), 1).unwrap();
        let parts = &g.strands[0].parts;
        let sh = parts.iter().filter(|p| p.kind == PartKind::Shallow).count();
        let st = parts.iter().filter(|p| p.kind == PartKind::Steep).count();
        assert_eq!(sh, st);
        for p in parts {
            let want = match p.kind {
                PartKind::Shallow => -q(1, 8),
                PartKind::Steep => -Q::from_integer(8),
            };
            assert_eq!(p.slope(), want);
        }
    }

    #[test]
    fn loop_on_the_disk() {
        let d = builtin_diagram("disk_identity").unwrap();
        let (a, rec) = to_arc_position(&slope_one_loop(), &d, None).unwrap();
        assert_eq!(a.vertices.len(), rec.subdivisions());
        assert_eq!(a.wires.len(), rec.subdivisions());
        assert_eq!(a.euler(), 0);
    }

    #[test]
    fn cusps_survive() {
        let (dn, f) = builtin_front("disk_unknot").unwrap();
        let d = builtin_diagram(&dn).unwrap();
        let g = slanted_rectangular_approximation(&f, q(1, 16), 2).unwrap();
        assert_eq!(g.cusps.len(), cusp_count(&f));
        assert_eq!(g.cusps.len(), 2);
        assert!(to_arc_position(&f, &d, None).is_ok());
    }

    #[test]
    fn handle_knot_crosses_twice() {
        let (dn, f) = builtin_front("handle_knot").unwrap();
        let d = builtin_diagram(&dn).unwrap();
        let (a, _) = to_arc_position(&f, &d, None).unwrap();
        assert_eq!(a.skeleton_crossing_thetas(), vec![q(1, 32), q(1, 16)]);
        assert_eq!(a.euler(), 0);
    }

    #[test]
    fn random_fronts_reach_arc_position() {
        for name in BUILTIN_NAMES {
            let d = builtin_diagram(name).unwrap();
            for seed in 0..8 {
                let f = random_graph_front(seed, 6, &d).unwrap();
                let (a, _) = to_arc_position(&f, &d, None).unwrap_or_else(|e| panic!("{name} seed {seed}: {e}"));
                assert_eq!(a.euler(), graph_counts(&f, &d).unwrap().euler());
            }
        }
    }
}
