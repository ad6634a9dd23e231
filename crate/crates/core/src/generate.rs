//! Seeded random fronts and a few fixed ones.
//!
//! Components are drawn from a small menu (eye unknots, theta graphs,
//! subdivided eyes, loops crossing a handle, and loops wrapping an empty
//! torus) and placed in regions of a torus clear of `T`. Every candidate is
//! passed through [`validate_front`]; invalid candidates are dropped.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::front::{
    subdivide_edge, validate_front, EndKind, EndRef, FrontError, FrontPoint, FrontStrand, GraphFront, GraphVertex,
    StrandEnd,
};
use crate::geom::{self, Pt};
use crate::morse::{box_meets_graph, builtin_diagram, MorseDiagram, MorseError, Side};
use crate::rational::{q, signed_delta, unit, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Eye,
    SubdividedEye,
    Theta,
    ThroughLoop,
    Wrap,
}

impl Kind {
    fn strands(self) -> usize {
        match self {
            Kind::Eye | Kind::SubdividedEye | Kind::Wrap => 1,
            Kind::ThroughLoop => 2,
            Kind::Theta => 3,
        }
    }
}

fn p(theta: Q, z: Q) -> Pt {
    Pt::new(theta, z).canonical()
}

/// Append `other` to `f`, shifting its strand and vertex indices.
fn append(f: &GraphFront, other: GraphFront) -> GraphFront {
    let (ds, dv) = (f.strands.len(), f.vertices.len());
    let mut g = f.clone();
    for mut s in other.strands {
        for e in [&mut s.start, &mut s.end] {
            if let EndRef::Vertex(v) = e {
                *v += dv;
            }
        }
        g.strands.push(s);
    }
    for mut v in other.vertices {
        for e in v.ends.iter_mut() {
            e.strand += ds;
        }
        g.vertices.push(v);
    }
    g.crossings.clear();
    g
}

/// Closed eye-shaped unknot with cusps at the left and right corners of the box.
pub fn eye(torus: usize, corner: Pt, w: Q, h: Q) -> GraphFront {
    let (t0, z0) = (corner.theta, corner.z);
    let two = Q::from_integer(2);
    let four = Q::from_integer(4);
    let l = p(t0, z0 + h);
    let pts = vec![
        FrontPoint::cusp(l),
        FrontPoint::new(p(t0 + w / two, z0 + h * 3 / four)),
        FrontPoint::cusp(p(t0 + w, z0)),
        FrontPoint::new(p(t0 + w / two, z0 + h / four)),
        FrontPoint::cusp(l),
    ];
    GraphFront {
        strands: vec![FrontStrand { torus, points: pts, start: EndRef::Closed, end: EndRef::Closed }],
        ..Default::default()
    }
}

/// Two vertices joined by three strands.
pub fn theta_graph(torus: usize, corner: Pt, w: Q, h: Q) -> GraphFront {
    let (t0, z0) = (corner.theta, corner.z);
    let two = Q::from_integer(2);
    let four = Q::from_integer(4);
    let v1 = p(t0, z0 + h);
    let v2 = p(t0 + w, z0);
    let strands = [h / four, Q::zero(), -h / four]
        .iter()
        .map(|&dz| FrontStrand {
            torus,
            points: vec![FrontPoint::new(v1), FrontPoint::new(p(t0 + w / two, z0 + h / two + dz)), FrontPoint::new(v2)],
            start: EndRef::Vertex(0),
            end: EndRef::Vertex(1),
        })
        .collect();
    let ends = |k: EndKind| (0..3).map(|s| StrandEnd { strand: s, end: k }).collect();
    GraphFront {
        strands,
        vertices: vec![
            GraphVertex { torus, theta: v1.theta, z: v1.z, ends: ends(EndKind::Start) },
            GraphVertex { torus, theta: v2.theta, z: v2.z, ends: ends(EndKind::End) },
        ],
        crossings: vec![],
    }
}

/// Closed loop of slope -1 going once around an empty torus.
pub fn wrap_loop(torus: usize, corner: Pt) -> GraphFront {
    let pts = (0..=4)
        .map(|k| FrontPoint::new(p(corner.theta + q(k, 4), corner.z - q(k, 4))))
        .collect();
    GraphFront {
        strands: vec![FrontStrand { torus, points: pts, start: EndRef::Closed, end: EndRef::Closed }],
        ..Default::default()
    }
}

/// Height and slope of edge `edge` over `theta`, when the edge is straight on
/// the whole window `[lo, hi]`.
fn edge_height(d: &MorseDiagram, edge: usize, theta: Q, lo: Q, hi: Q) -> Option<(Q, Q)> {
    let e = &d.edges[edge];
    let sp = d.slice_points(theta).into_iter().find(|s| s.edge == edge)?;
    let (a, b) = (e.points[sp.segment], e.points[sp.segment + 1]);
    let start = signed_delta(a.theta, lo);
    let end = signed_delta(a.theta, hi);
    let len = signed_delta(a.theta, b.theta);
    if start.is_negative() || end > len {
        return None;
    }
    let slope = geom::slope(geom::delta(a, b))?;
    Some((sp.z, slope))
}

/// A knot crossing the handle glued along `e` and `e2` twice, at `c1` and
/// `c1 + w`. Each half carries one cusp.
pub fn through_loop(d: &MorseDiagram, e: usize, e2: usize, c1: Q, w: Q) -> Option<GraphFront> {
    if e == e2 || d.edges[e].label != d.edges[e2].label {
        return None;
    }
    let c1 = unit(c1);
    let c2 = c1 + w;
    let (lo, hi) = (c1 - w, c2 + w);
    if d.vertices.iter().any(|v| signed_delta(lo, v.theta) >= Q::zero() && signed_delta(lo, v.theta) <= hi - lo) {
        return None;
    }
    let (z1, s) = edge_height(d, e, c1, lo, hi)?;
    let (_, _) = edge_height(d, e, unit(c2), lo, hi)?;
    let (f1, s2) = edge_height(d, e2, c1, lo, hi)?;
    let (_, _) = edge_height(d, e2, unit(c2), lo, hi)?;
    if s.is_zero() || s2.is_zero() {
        return None;
    }
    let two = Q::from_integer(2);
    let four = Q::from_integer(4);
    let z2 = z1 + s * w;
    let f2 = f1 + s2 * w;
    let zl = if s.is_positive() { z2 + w / two } else { z1 - s * w / two };
    let zr = if s2.is_positive() { f1 - w / two } else { f2 + s2 * w / two };
    let left = FrontStrand {
        torus: d.edges[e].torus,
        points: vec![
            FrontPoint::new(p(c2, z2)),
            FrontPoint::new(p(c2 - w / four, z2)),
            FrontPoint::cusp(p(c1 - w, zl)),
            FrontPoint::new(p(c1 - w / two, z1)),
            FrontPoint::new(p(c1, z1)),
        ],
        start: EndRef::OnEdge { edge: e, side: Side::Left },
        end: EndRef::OnEdge { edge: e, side: Side::Left },
    };
    let right = FrontStrand {
        torus: d.edges[e2].torus,
        points: vec![
            FrontPoint::new(p(c1, f1)),
            FrontPoint::new(p(c1 + w / two, f1)),
            FrontPoint::cusp(p(c2 + w, zr)),
            FrontPoint::new(p(c2 + w / four, f2)),
            FrontPoint::new(p(c2, f2)),
        ],
        start: EndRef::OnEdge { edge: e2, side: Side::Right },
        end: EndRef::OnEdge { edge: e2, side: Side::Right },
    };
    Some(GraphFront { strands: vec![left, right], ..Default::default() })
}

/// Pairs of distinct edges sharing a label.
fn label_pairs(d: &MorseDiagram) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..d.edges.len() {
        for j in 0..d.edges.len() {
            if i != j && d.edges[i].label == d.edges[j].label {
                out.push((i, j));
            }
        }
    }
    out
}

fn random_box(rng: &mut ChaCha8Rng, d: &MorseDiagram) -> Option<(usize, Pt, Q, Q)> {
    let torus = rng.gen_range(0..d.tori);
    let w = q(rng.gen_range(2..=4), 16);
    let h = q(rng.gen_range(1..=3), 16);
    let corner = Pt::new(q(rng.gen_range(0..16), 16), q(rng.gen_range(0..16), 16));
    let margin = q(1, 32);
    let outer = corner.offset(-margin, -margin);
    let clear = !box_meets_graph(d, torus, outer, w + margin * 2, h + margin * 2);
    clear.then_some((torus, corner, w, h))
}

fn candidate(kind: Kind, rng: &mut ChaCha8Rng, d: &MorseDiagram) -> Option<GraphFront> {
    match kind {
        Kind::Eye | Kind::SubdividedEye | Kind::Theta => {
            let (torus, corner, w, h) = random_box(rng, d)?;
            match kind {
                Kind::Eye => Some(eye(torus, corner, w, h)),
                Kind::Theta => Some(theta_graph(torus, corner, w, h)),
                _ => {
                    let f = eye(torus, corner, w, h);
                    let (a, b) = f.strands[0].segment(0);
                    subdivide_edge(&f, 0, geom::lerp(a, b, q(1, 2))).ok()
                }
            }
        }
        Kind::Wrap => {
            let empty: Vec<usize> = (0..d.tori).filter(|&t| d.edges.iter().all(|e| e.torus != t)).collect();
            let torus = *empty.choose(rng)?;
            let corner = Pt::new(q(rng.gen_range(0..16), 16), q(rng.gen_range(0..16), 16));
            Some(wrap_loop(torus, corner))
        }
        Kind::ThroughLoop => {
            let pairs = label_pairs(d);
            let &(e, e2) = pairs.choose(rng)?;
            let c1 = q(rng.gen_range(0..64), 64);
            through_loop(d, e, e2, c1, q(1, 32))
        }
    }
}

/// Each crossing with `T` sits at its own `theta`, away from the vertices
/// of `T`, so that its wire has a `theta` to itself.
fn crossings_are_generic(f: &GraphFront, d: &MorseDiagram) -> bool {
    let slices = d.vertex_thetas();
    let mut count = std::collections::BTreeMap::new();
    for s in &f.strands {
        for k in [EndKind::Start, EndKind::End] {
            if let EndRef::OnEdge { .. } = s.end_ref(k) {
                *count.entry(s.end_point(k).theta).or_insert(0) += 1;
            }
        }
    }
    count.iter().all(|(t, &n)| n <= 2 && !slices.contains(t))
}

/// A valid front with at most `size` strands, determined by `seed`.
pub fn random_graph_front(seed: u64, size: usize, d: &MorseDiagram) -> Result<GraphFront, FrontError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut front = GraphFront::default();
    if size == 0 {
        return Ok(front);
    }
    let has_pairs = !label_pairs(d).is_empty();
    let has_empty_torus = (0..d.tori).any(|t| d.edges.iter().all(|e| e.torus != t));
    let mut wrapped = vec![false; d.tori];
    let budget = 64 * (size + 1);
    let mut attempts = 0;
    while attempts < budget && front.strands.len() < size {
        attempts += 1;
        let room = size - front.strands.len();
        let mut menu = vec![Kind::Eye, Kind::SubdividedEye, Kind::Theta];
        if has_pairs {
            menu.push(Kind::ThroughLoop);
        }
        if has_empty_torus {
            menu.push(Kind::Wrap);
        }
        menu.retain(|k| k.strands() <= room);
        // the first component crosses a handle when one is available
        let kind = if has_pairs && front.strands.is_empty() && room >= 2 && attempts <= budget / 2 {
            Kind::ThroughLoop
        } else {
            *menu.choose(&mut rng).expect("eyes always fit")
        };
        let Some(piece) = candidate(kind, &mut rng, d) else { continue };
        if kind == Kind::Wrap {
            let t = piece.strands[0].torus;
            if wrapped[t] {
                continue;
            }
            wrapped[t] = true;
        }
        let next = append(&front, piece);
        match validate_front(&next, d) {
            Ok(r) if r.is_valid() && crossings_are_generic(&next, d) => front = next,
            _ => {
                if kind == Kind::Wrap {
                    let t = next.strands.last().map(|s| s.torus).unwrap_or(0);
                    wrapped[t] = false;
                }
            }
        }
    }
    if front.strands.is_empty() {
        return Err(FrontError::GenerationFailure(attempts));
    }
    Ok(front)
}

pub const BUILTIN_FRONTS: [&str; 4] = ["disk_unknot", "disk_theta", "handle_knot", "punctured_torus_knot"];

/// Fixed fronts used by the examples and the command line.
///
/// * `disk_unknot`: eye unknot on the disk page (two cusps).
/// * `disk_theta`: theta graph on the disk page.
/// * `handle_knot`: knot running twice over the handle of `ex_2_1_a`.
/// * `punctured_torus_knot`: knot crossing the `b` handle of `ex_2_1_b`.
pub fn builtin_front(name: &str) -> Result<(String, GraphFront), MorseError> {
    let base = q(1, 4);
    match name {
        "disk_unknot" => Ok(("disk_identity".into(), eye(0, Pt::new(base, base), q(1, 4), q(1, 8)))),
        "disk_theta" => Ok(("disk_identity".into(), theta_graph(0, Pt::new(base, base), q(1, 4), q(1, 4)))),
        "handle_knot" => {
            let d = builtin_diagram("ex_2_1_a")?;
            let f = through_loop(&d, 0, 1, q(1, 32), q(1, 32)).expect("window lies in one piece of each edge");
            Ok(("ex_2_1_a".into(), f))
        }
        "punctured_torus_knot" => {
            let d = builtin_diagram("ex_2_1_b")?;
            let f = through_loop(&d, 0, 2, q(3, 32), q(1, 32)).expect("window lies in one piece of each edge");
            Ok(("ex_2_1_b".into(), f))
        }
        other => Err(MorseError::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{graph_counts, validate_front};
    use crate::morse::BUILTIN_NAMES;

    #[test]
    fn builtin_fronts_validate() {
        for name in BUILTIN_FRONTS {
            let (dn, f) = builtin_front(name).unwrap();
            let d = builtin_diagram(&dn).unwrap();
            let r = validate_front(&f, &d).unwrap();
            assert!(r.is_valid(), "{name}: {:?}", r.issues);
        }
    }

    #[test]
    fn random_fronts_validate() {
        for name in BUILTIN_NAMES {
            let d = builtin_diagram(name).unwrap();
            for seed in 0..10 {
                let f = random_graph_front(seed, 6, &d).unwrap();
                assert!(!f.strands.is_empty() && f.strands.len() <= 6);
                let r = validate_front(&f, &d).unwrap();
                assert!(r.is_valid(), "{name} seed {seed}: {:?}", r.issues);
                graph_counts(&f, &d).unwrap();
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let d = builtin_diagram("ex_2_1_b").unwrap();
        assert_eq!(random_graph_front(3, 5, &d).unwrap(), random_graph_front(3, 5, &d).unwrap());
    }

    #[test]
    fn handle_is_crossed_on_example_b() {
        let d = builtin_diagram("ex_2_1_b").unwrap();
        let f = random_graph_front(7, 5, &d).unwrap();
        assert!(f.strands.iter().any(|s| matches!(s.start, EndRef::OnEdge { .. })));
    }
}
