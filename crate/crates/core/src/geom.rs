//! Piecewise-linear primitives on the unit torus `S¹ × S¹` with coordinates
//! `(theta, z)`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, serde_q, signed_delta, unit, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pt {
    #[serde(with = "serde_q")]
    pub theta: Q,
    #[serde(with = "serde_q")]
    pub z: Q,
}

impl Pt {
    pub fn new(theta: Q, z: Q) -> Self {
        Pt { theta, z }
    }

    /// Reduce both coordinates into `[0, 1)`.
    pub fn canonical(self) -> Self {
        Pt { theta: unit(self.theta), z: unit(self.z) }
    }

    pub fn is_canonical(&self) -> bool {
        rational::is_unit(self.theta) && rational::is_unit(self.z)
    }

    pub fn offset(self, dtheta: Q, dz: Q) -> Self {
        Pt { theta: self.theta + dtheta, z: self.z + dz }.canonical()
    }
}

/// Displacement from `a` to `b` with each coordinate in `(-1/2, 1/2]`.
pub fn delta(a: Pt, b: Pt) -> (Q, Q) {
    (signed_delta(a.theta, b.theta), signed_delta(a.z, b.z))
}

/// `dz/dtheta`, or `None` for a vertical displacement.
pub fn slope(d: (Q, Q)) -> Option<Q> {
    if d.0.is_zero() {
        None
    } else {
        Some(d.1 / d.0)
    }
}

/// A displacement is unambiguous when neither coordinate sits at exactly 1/2.
pub fn unambiguous(d: (Q, Q)) -> bool {
    d.0.abs() < rational::half() && d.1.abs() < rational::half()
}

/// Parameter `t ∈ [0, 1]` at which `p` lies on the segment `a → b`, if it does.
pub fn param_on_segment(p: Pt, a: Pt, b: Pt) -> Option<Q> {
    let (dt, dz) = delta(a, b);
    let (pt, pz) = delta(a, p);
    if dt * pz != dz * pt {
        return None;
    }
    let t = if !dt.is_zero() {
        pt / dt
    } else if !dz.is_zero() {
        pz / dz
    } else {
        return if pt.is_zero() && pz.is_zero() { Some(Q::zero()) } else { None };
    };
    (t >= Q::zero() && t <= Q::one()).then_some(t)
}

pub fn lerp(a: Pt, b: Pt, t: Q) -> Pt {
    let (dt, dz) = delta(a, b);
    a.offset(dt * t, dz * t)
}

/// Intersection of two segments on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegHit {
    /// Single point, with parameters along each segment.
    Point { t: Q, u: Q, at: Pt },
    /// Collinear overlap of positive length.
    Overlap,
}

/// All intersections between `a0 → a1` and `b0 → b1`; segments must be
/// shorter than 1/2 in each coordinate.
pub fn segment_hits(a0: Pt, a1: Pt, b0: Pt, b1: Pt) -> Vec<SegHit> {
    let d1 = delta(a0, a1);
    let d2 = delta(b0, b1);
    let rel = delta(a0, b0);
    let mut out = Vec::new();
    for i in -1i128..=1 {
        for j in -1i128..=1 {
            let ox = rel.0 + Q::from_integer(i);
            let oz = rel.1 + Q::from_integer(j);
            // a0 + t d1 = (ox, oz) + u d2  (a0 at origin)
            let den = d1.0 * d2.1 - d1.1 * d2.0;
            if den.is_zero() {
                // parallel: overlap iff collinear and parameter ranges meet
                if ox * d1.1 - oz * d1.0 != Q::zero() {
                    continue;
                }
                let len2 = d1.0 * d1.0 + d1.1 * d1.1;
                if len2.is_zero() {
                    continue;
                }
                let proj = |x: Q, z: Q| (x * d1.0 + z * d1.1) / len2;
                let s0 = proj(ox, oz);
                let s1 = proj(ox + d2.0, oz + d2.1);
                let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
                let lo = if lo > Q::zero() { lo } else { Q::zero() };
                let hi = if hi < Q::one() { hi } else { Q::one() };
                if lo < hi {
                    out.push(SegHit::Overlap);
                } else if lo == hi {
                    let u = if s1 == s0 { Q::zero() } else { (lo - s0) / (s1 - s0) };
                    out.push(SegHit::Point { t: lo, u, at: lerp(a0, a1, lo) });
                }
                continue;
            }
            let t = (ox * d2.1 - oz * d2.0) / den;
            let u = (ox * d1.1 - oz * d1.0) / den;
            if t >= Q::zero() && t <= Q::one() && u >= Q::zero() && u <= Q::one() {
                out.push(SegHit::Point { t, u, at: lerp(a0, a1, t) });
            }
        }
    }
    out
}

/// Distance from `x` to the nearest integer multiple, in `[0, 1/2]`.
pub fn circle_dist(a: Q, b: Q) -> Q {
    signed_delta(a, b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(a: i128, b: i128, c: i128, d: i128) -> Pt {
        Pt::new(q(a, b), q(c, d))
    }

    #[test]
    fn crossing_across_the_seam() {
        // a horizontal segment through theta = 0 and a vertical one at theta = 0
        let h = segment_hits(p(9, 10, 1, 2), p(1, 10, 1, 2), p(0, 1, 2, 5), p(0, 1, 3, 5));
        assert_eq!(h.len(), 1);
        match h[0] {
            SegHit::Point { at, .. } => assert_eq!(at, p(0, 1, 1, 2)),
            _ => panic!(),
        }
    }

    #[test]
    fn overlap_and_touch() {
        let a = segment_hits(p(0, 1, 0, 1), p(1, 4, 0, 1), p(1, 8, 0, 1), p(3, 8, 0, 1));
        assert_eq!(a, vec![SegHit::Overlap]);
        let b = segment_hits(p(0, 1, 0, 1), p(1, 4, 0, 1), p(1, 4, 0, 1), p(3, 8, 0, 1));
        assert!(matches!(b[0], SegHit::Point { .. }));
    }

    #[test]
    fn point_on_segment() {
        assert_eq!(param_on_segment(p(1, 8, 1, 8), p(0, 1, 0, 1), p(1, 4, 1, 4)), Some(q(1, 2)));
        assert_eq!(param_on_segment(p(1, 8, 1, 7), p(0, 1, 0, 1), p(1, 4, 1, 4)), None);
        assert_eq!(param_on_segment(p(0, 1, 1, 16), p(15, 16, 1, 8), p(1, 16, 0, 1)), Some(q(1, 2)));
    }
}
