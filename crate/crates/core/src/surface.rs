//! Bennequin surfaces, ribbons of fronts, and their invariants.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::{ArcDiagram, ArcEnd};
use crate::front::{chains, validate_front, EndKind, EndRef, FrontError, FrontIssueKind, GraphFront, StrandEnd};
use crate::morse::MorseDiagram;
use crate::rational::{fmt_q, is_unit, serde_q, simplest_between, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("a surface needs at least one disk")]
    NoDisks,
    #[error("band {band} refers to disk {disk}, but there are {disks} disks")]
    IndexOutOfRange { band: usize, disk: usize, disks: usize },
    #[error("bands share the page theta = {0}")]
    ThetaCollision(String),
    #[error("band {0} joins a disk to itself")]
    SelfBand(usize),
    #[error("band {0} has sign {1}; signs are +1 or -1")]
    BadSign(usize, i8),
    #[error("band {0} has theta outside [0, 1)")]
    BadTheta(usize),
    #[error("no disk with a single positive band")]
    NotDestabilizable,
    #[error("invalid arc diagram: {0}")]
    InvalidArcDiagram(String),
    #[error("a cusp lies on T")]
    CuspOnSkeleton,
    #[error(transparent)]
    Front(#[from] FrontError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Disk {
    pub torus: usize,
    #[serde(with = "serde_q")]
    pub z: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Band {
    #[serde(with = "serde_q")]
    pub theta: Q,
    pub from: usize,
    pub to: usize,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromBands,
    FromRibbon,
    FromSatellite,
    FromCable,
}

/// Meridional disks along the binding joined by half-twisted bands, each
/// band lying in one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BennequinSurface {
    pub disks: Vec<Disk>,
    pub bands: Vec<Band>,
    pub provenance: Provenance,
}

impl BennequinSurface {
    pub fn b_plus(&self) -> usize {
        self.bands.iter().filter(|b| b.sign > 0).count()
    }

    pub fn b_minus(&self) -> usize {
        self.bands.iter().filter(|b| b.sign < 0).count()
    }

    /// Connected components, counting each disk without bands.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.disks.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for b in &self.bands {
            let (x, y) = (root(&mut parent, b.from), root(&mut parent, b.to));
            parent[x] = y;
        }
        (0..self.disks.len()).filter(|&i| root(&mut parent, i) == i).count()
    }

    pub fn report(&self) -> InvariantReport {
        InvariantReport {
            euler_char: euler_characteristic(self),
            boundary_components: boundary_components(self),
            self_linking: self_linking(self),
            bennequin_slack: bennequin_slack(self),
            is_sqp: is_strongly_quasipositive(self),
            d: self.disks.len(),
            b_plus: self.b_plus(),
            b_minus: self.b_minus(),
            components: self.components(),
        }
    }

    /// Structural checks shared by every constructor. Self-bands are allowed
    /// only for surfaces coming from ribbons.
    pub fn check(&self, allow_self: bool) -> Result<(), SurfaceError> {
        let n = self.disks.len();
        let mut seen = BTreeSet::new();
        for (i, b) in self.bands.iter().enumerate() {
            for disk in [b.from, b.to] {
                if disk >= n {
                    return Err(SurfaceError::IndexOutOfRange { band: i, disk, disks: n });
                }
            }
            if b.from == b.to && !allow_self {
                return Err(SurfaceError::SelfBand(i));
            }
            if b.sign != 1 && b.sign != -1 {
                return Err(SurfaceError::BadSign(i, b.sign));
            }
            if !is_unit(b.theta) {
                return Err(SurfaceError::BadTheta(i));
            }
            if !seen.insert(b.theta) {
                return Err(SurfaceError::ThetaCollision(fmt_q(b.theta)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub euler_char: i64,
    pub boundary_components: usize,
    pub self_linking: i64,
    pub bennequin_slack: i64,
    pub is_sqp: bool,
    pub d: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub components: usize,
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Surface on `d` disks stacked along one binding component.
pub fn bennequin_from_bands(d: usize, bands: &[(Q, usize, usize, i8)]) -> Result<BennequinSurface, SurfaceError> {
    if d == 0 {
        return Err(SurfaceError::NoDisks);
    }
    let disks = (0..d).map(|i| Disk { torus: 0, z: Q::new(i as i128, d as i128) }).collect();
    let bands = bands.iter().map(|&(theta, from, to, sign)| Band { theta, from, to, sign }).collect();
    let s = BennequinSurface { disks, bands, provenance: Provenance::FromBands };
    s.check(false)?;
    Ok(s)
}

pub fn euler_characteristic(s: &BennequinSurface) -> i64 {
    s.disks.len() as i64 - s.bands.len() as i64
}

pub fn self_linking(s: &BennequinSurface) -> i64 {
    s.b_plus() as i64 - s.b_minus() as i64 - s.disks.len() as i64
}

pub fn bennequin_slack(s: &BennequinSurface) -> i64 {
    -euler_characteristic(s) - self_linking(s)
}

pub fn is_strongly_quasipositive(s: &BennequinSurface) -> bool {
    s.bands.iter().all(|b| b.sign > 0)
}

/// Count the faces of a ribbon graph given by a rotation (darts around each
/// disk, in order) and the pairing of darts along bands. A disk without darts
/// is a face by itself.
fn count_faces(rotation: &[Vec<usize>], partner: &[usize]) -> usize {
    let mut next = vec![usize::MAX; partner.len()];
    let mut bare = 0;
    for around in rotation {
        if around.is_empty() {
            bare += 1;
        }
        for (k, &x) in around.iter().enumerate() {
            next[x] = around[(k + 1) % around.len()];
        }
    }
    let mut seen = vec![false; partner.len()];
    let mut faces = 0;
    for start in 0..partner.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = next[partner[x]];
        }
    }
    faces + bare
}

/// Boundary circles, by walking around disks (darts in `theta` order) and
/// across bands.
pub fn boundary_components(s: &BennequinSurface) -> usize {
    let mut rotation: Vec<Vec<(Q, usize, usize)>> = vec![Vec::new(); s.disks.len()];
    let mut partner = vec![0; 2 * s.bands.len()];
    for (i, b) in s.bands.iter().enumerate() {
        // a band from a disk to itself leaves through two neighbouring darts
        rotation[b.from].push((b.theta, 0, 2 * i));
        rotation[b.to].push((b.theta, 1, 2 * i + 1));
        partner[2 * i] = 2 * i + 1;
        partner[2 * i + 1] = 2 * i;
    }
    let rotation: Vec<Vec<usize>> = rotation
        .into_iter()
        .map(|mut r| {
            r.sort();
            r.into_iter().map(|x| x.2).collect()
        })
        .collect();
    count_faces(&rotation, &partner)
}

fn new_band_theta(s: &BennequinSurface) -> Q {
    match s.bands.iter().map(|b| b.theta).max() {
        Some(m) => simplest_between(m, Q::one()),
        None => Q::new(1, 2),
    }
}

/// Add a disk after the last one and join it to the last one by a positive
/// band in a fresh page.
pub fn positive_markov_stabilization(s: &BennequinSurface) -> BennequinSurface {
    let mut out = s.clone();
    let theta = new_band_theta(s);
    let disk = match s.disks.last() {
        Some(last) => {
            let above = s
                .disks
                .iter()
                .filter(|d| d.torus == last.torus && d.z > last.z)
                .map(|d| d.z)
                .min()
                .unwrap_or(Q::one());
            Disk { torus: last.torus, z: simplest_between(last.z, above) }
        }
        None => Disk { torus: 0, z: Q::zero() },
    };
    out.disks.push(disk);
    if s.disks.is_empty() {
        return out;
    }
    let n = out.disks.len();
    out.bands.push(Band { theta, from: n - 2, to: n - 1, sign: 1 });
    out
}

/// Remove the last disk carrying exactly one band, when that band is positive
/// and joins it to another disk.
pub fn destabilize(s: &BennequinSurface) -> Result<BennequinSurface, SurfaceError> {
    let mut degree = vec![0usize; s.disks.len()];
    for b in &s.bands {
        degree[b.from] += 1;
        degree[b.to] += 1;
    }
    let candidate = (0..s.disks.len()).rev().find(|&i| {
        degree[i] == 1 && s.bands.iter().any(|b| b.sign > 0 && b.from != b.to && (b.from == i || b.to == i))
    });
    let Some(i) = candidate else {
        return Err(SurfaceError::NotDestabilizable);
    };
    let mut out = s.clone();
    out.disks.remove(i);
    out.bands.retain(|b| b.from != i && b.to != i);
    for b in out.bands.iter_mut() {
        if b.from > i {
            b.from -= 1;
        }
        if b.to > i {
            b.to -= 1;
        }
    }
    Ok(out)
}

/// One disk per binding vertex and one positive band per wire.
pub fn ribbon_to_bennequin(a: &ArcDiagram) -> Result<BennequinSurface, SurfaceError> {
    let disks: Vec<Disk> = a.vertices.iter().map(|v| Disk { torus: v.torus, z: v.z }).collect();
    let mut bands = Vec::with_capacity(a.wires.len());
    for (wi, w) in a.wires.iter().enumerate() {
        let ends = (w.end_vertex(EndKind::Start), w.end_vertex(EndKind::End));
        let (Some(from), Some(to)) = ends else {
            return Err(SurfaceError::InvalidArcDiagram(format!("wire {wi} does not end on two binding vertices")));
        };
        if w.arcs.iter().any(|arc| matches!(arc.from, ArcEnd::Vertex(v) if v >= disks.len())) {
            return Err(SurfaceError::InvalidArcDiagram(format!("wire {wi} refers to a missing vertex")));
        }
        bands.push(Band { theta: w.theta, from, to, sign: 1 });
    }
    let s = BennequinSurface { disks, bands, provenance: Provenance::FromRibbon };
    s.check(true).map_err(|e| SurfaceError::InvalidArcDiagram(e.to_string()))?;
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RibbonDisk {
    Vertex(usize),
    Cusp { strand: usize, point: usize },
    /// Stands in for a closed component with no cusps or vertices.
    Loop { chain: usize },
}

/// A half-twisted band along a piece of the graph between two disks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonBand {
    pub from: usize,
    pub to: usize,
    pub chain: usize,
    pub half_twists: u8,
}

/// The ribbon of a front: disk neighbourhoods of cusps and vertices joined by
/// bands along the segments between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonFront {
    pub source: GraphFront,
    pub disks: Vec<RibbonDisk>,
    pub bands: Vec<RibbonBand>,
    /// Darts around each disk in cyclic order; dart `2b` is the start of band
    /// `b` and `2b + 1` its end.
    pub rotation: Vec<Vec<usize>>,
}

impl RibbonFront {
    pub fn euler_char(&self) -> i64 {
        self.disks.len() as i64 - self.bands.len() as i64
    }

    pub fn boundary_components(&self) -> usize {
        let partner: Vec<usize> = (0..2 * self.bands.len()).map(|x| x ^ 1).collect();
        count_faces(&self.rotation, &partner)
    }
}

pub fn ribbon_front(f: &GraphFront, d: &MorseDiagram) -> Result<RibbonFront, SurfaceError> {
    let report = validate_front(f, d)?;
    if report.kinds().contains(&FrontIssueKind::CuspOnSkeleton) {
        return Err(SurfaceError::CuspOnSkeleton);
    }
    if !report.is_valid() {
        let kinds: Vec<String> = report.kinds().iter().map(|k| format!("{k:?}")).collect();
        return Err(FrontError::Invalid(kinds.join(", ")).into());
    }
    let mut disks: Vec<RibbonDisk> = (0..f.vertices.len()).map(RibbonDisk::Vertex).collect();
    let mut bands: Vec<RibbonBand> = Vec::new();
    // dart leaving each vertex end
    let mut at_end: BTreeMap<StrandEnd, usize> = BTreeMap::new();
    let mut cusp_darts: Vec<Vec<usize>> = Vec::new();
    let all = chains(f, d)?;
    for (ci, c) in all.iter().enumerate() {
        // cusps in traversal order
        let mut anchors = Vec::new();
        for step in &c.steps {
            let s = &f.strands[step.strand];
            let mut idx = s.cusp_indices();
            if !step.forward {
                idx.reverse();
            }
            // a closed strand lists its starting cusp first in either direction
            if !step.forward && s.is_closed() && idx.last() == Some(&0) {
                idx.rotate_right(1);
            }
            for i in idx {
                disks.push(RibbonDisk::Cusp { strand: step.strand, point: i });
                cusp_darts.push(Vec::new());
                anchors.push(disks.len() - 1);
            }
        }
        let first_end = |forward: bool, strand: usize| StrandEnd {
            strand,
            end: if forward { EndKind::Start } else { EndKind::End },
        };
        let add = |from: usize, to: usize, bands: &mut Vec<RibbonBand>| {
            bands.push(RibbonBand { from, to, chain: ci, half_twists: 1 });
            bands.len() - 1
        };
        if c.is_closed() {
            if anchors.is_empty() {
                disks.push(RibbonDisk::Loop { chain: ci });
                cusp_darts.push(Vec::new());
                anchors.push(disks.len() - 1);
            }
            for k in 0..anchors.len() {
                let (x, y) = (anchors[k], anchors[(k + 1) % anchors.len()]);
                let b = add(x, y, &mut bands);
                cusp_darts[x - f.vertices.len()].push(2 * b);
                cusp_darts[y - f.vertices.len()].push(2 * b + 1);
            }
        } else {
            let (v, w) = (c.from.unwrap(), c.to.unwrap());
            let mut seq = vec![v];
            seq.extend(&anchors);
            seq.push(w);
            let mut ids = Vec::new();
            for k in 0..seq.len() - 1 {
                ids.push(add(seq[k], seq[k + 1], &mut bands));
            }
            let head = c.steps[0];
            let tail = *c.steps.last().unwrap();
            at_end.insert(first_end(head.forward, head.strand), 2 * ids[0]);
            at_end.insert(first_end(!tail.forward, tail.strand), 2 * ids[ids.len() - 1] + 1);
            for (k, &b) in ids.iter().enumerate() {
                if k > 0 {
                    cusp_darts[seq[k] - f.vertices.len()].push(2 * b);
                }
                if k + 1 < ids.len() {
                    cusp_darts[seq[k + 1] - f.vertices.len()].push(2 * b + 1);
                }
            }
        }
    }
    let mut rotation: Vec<Vec<usize>> = f
        .vertices
        .iter()
        .map(|v| v.ends.iter().map(|e| at_end[e]).collect())
        .collect();
    rotation.extend(cusp_darts);
    debug_assert!(f.vertices.iter().all(|v| v.ends.iter().all(|e| !matches!(
        f.strands[e.strand].end_ref(e.end),
        EndRef::Closed
    ))));
    Ok(RibbonFront { source: f.clone(), disks, bands, rotation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::builtin_front;
    use crate::morse::builtin_diagram;
    use crate::rational::q;

    fn torus_link(n: i128) -> BennequinSurface {
        let bands: Vec<_> = (0..n).map(|k| (q(k, n), 0, 1, 1)).collect();
        bennequin_from_bands(2, &bands).unwrap()
    }

    #[test]
    fn trefoil_and_hopf() {
        let t = torus_link(3).report();
        assert_eq!((t.euler_char, t.self_linking, t.boundary_components), (-1, 1, 1));
        let h = torus_link(2).report();
        assert_eq!((h.euler_char, h.boundary_components), (0, 2));
        let u = bennequin_from_bands(1, &[]).unwrap().report();
        assert_eq!((u.euler_char, u.self_linking, u.boundary_components), (1, -1, 1));
    }

    #[test]
    fn negative_bands_cost_slack() {
        let s = bennequin_from_bands(2, &[(q(0, 1), 0, 1, -1), (q(1, 3), 0, 1, -1), (q(2, 3), 0, 1, -1)]).unwrap();
        assert_eq!((self_linking(&s), bennequin_slack(&s)), (-5, 6));
        assert!(!is_strongly_quasipositive(&s));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(bennequin_from_bands(0, &[]), Err(SurfaceError::NoDisks));
        assert!(matches!(bennequin_from_bands(2, &[(q(0, 1), 0, 2, 1)]), Err(SurfaceError::IndexOutOfRange { .. })));
        assert!(matches!(
            bennequin_from_bands(2, &[(q(0, 1), 0, 1, 1), (q(0, 1), 1, 0, 1)]),
            Err(SurfaceError::ThetaCollision(_))
        ));
        assert_eq!(bennequin_from_bands(2, &[(q(0, 1), 1, 1, 1)]), Err(SurfaceError::SelfBand(0)));
    }

    #[test]
    fn stabilization_round_trip() {
        let t = torus_link(3);
        let s = positive_markov_stabilization(&t);
        assert_eq!((s.disks.len(), s.b_plus()), (3, 4));
        assert_eq!(destabilize(&s).unwrap(), t);
        let r = (t.report(), s.report());
        assert_eq!((r.0.euler_char, r.0.self_linking, r.0.boundary_components), (r.1.euler_char, r.1.self_linking, r.1.boundary_components));
        let u = bennequin_from_bands(1, &[]).unwrap();
        assert_eq!(destabilize(&u), Err(SurfaceError::NotDestabilizable));
    }

    #[test]
    fn unknot_ribbon_is_an_annulus() {
        let (dn, f) = builtin_front("disk_unknot").unwrap();
        let d = builtin_diagram(&dn).unwrap();
        let r = ribbon_front(&f, &d).unwrap();
        assert_eq!((r.disks.len(), r.bands.len()), (2, 2));
        assert_eq!((r.euler_char(), r.boundary_components()), (0, 2));
    }

    #[test]
    fn pipeline_matches_ribbon() {
        use crate::arc_position::to_arc_position;
        use crate::generate::random_graph_front;
        use crate::morse::BUILTIN_NAMES;
        for name in BUILTIN_NAMES {
            let d = builtin_diagram(name).unwrap();
            for seed in 0..6 {
                let f = random_graph_front(seed, 5, &d).unwrap();
                let r = ribbon_front(&f, &d).unwrap();
                let (a, _) = to_arc_position(&f, &d, None).unwrap_or_else(|e| panic!("{name} {seed}: {e}"));
                let s = ribbon_to_bennequin(&a).unwrap().report();
                assert_eq!(s.euler_char, r.euler_char(), "{name} {seed}");
                assert_eq!(s.boundary_components, r.boundary_components(), "{name} {seed}");
                assert_eq!((s.bennequin_slack, s.is_sqp), (0, true));
            }
        }
    }

    #[test]
    fn theta_graph_ribbon() {
        let (dn, f) = builtin_front("disk_theta").unwrap();
        let d = builtin_diagram(&dn).unwrap();
        let r = ribbon_front(&f, &d).unwrap();
        assert_eq!(r.euler_char(), -1);
    }
}
