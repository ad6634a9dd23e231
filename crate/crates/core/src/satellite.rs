//! Satellites, cables, quasipositive annuli and plumbing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::ArcError;
use crate::arc_position::to_arc_position;
use crate::front::{chains, GraphFront};
use crate::morse::MorseDiagram;
use crate::rational::{serde_q, Q};
use crate::surface::{ribbon_to_bennequin, Band, BennequinSurface, Disk, Provenance, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatelliteError {
    #[error("pattern band {0} is negative")]
    NegativePatternBand(usize),
    #[error("input is not strongly quasipositive")]
    NonSqpInput,
    #[error("cable needs p >= 1, got {0}")]
    InvalidP(i64),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("not a knot front: {0}")]
    NotAKnot(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

/// What a satellite needs to know about the companion ribbon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionSummary {
    pub euler_char: i64,
    pub boundary_components: usize,
    pub sqp: bool,
    pub surface: Option<BennequinSurface>,
}

impl CompanionSummary {
    pub fn from_surface(s: &BennequinSurface) -> Self {
        let r = s.report();
        CompanionSummary {
            euler_char: r.euler_char,
            boundary_components: r.boundary_components,
            sqp: r.is_sqp,
            surface: Some(s.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternBand {
    #[serde(with = "serde_q")]
    pub theta: Q,
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

/// A braid in the solid torus written with band generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternBraid {
    pub n: usize,
    pub bands: Vec<PatternBand>,
    pub closed: bool,
}

impl PatternBraid {
    pub fn trivial(n: usize) -> Self {
        PatternBraid { n, bands: vec![], closed: true }
    }

    /// Band generators `(i, j, sign)` placed at `theta = t/k`.
    pub fn from_generators(n: usize, gens: &[(usize, usize, i8)]) -> Result<Self, SatelliteError> {
        let k = gens.len().max(1) as i128;
        let bands = gens
            .iter()
            .enumerate()
            .map(|(t, &(i, j, sign))| PatternBand { theta: Q::new(t as i128, k), i, j, sign })
            .collect();
        let p = PatternBraid { n, bands, closed: true };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<(), SatelliteError> {
        if self.n == 0 {
            return Err(SatelliteError::InvalidPattern("no strands".into()));
        }
        for (t, b) in self.bands.iter().enumerate() {
            if !(b.i < b.j && b.j < self.n) {
                return Err(SatelliteError::InvalidPattern(format!("band {t} joins strands {} and {}", b.i, b.j)));
            }
            if b.sign != 1 && b.sign != -1 {
                return Err(SatelliteError::InvalidPattern(format!("band {t} has sign {}", b.sign)));
            }
            if t > 0 && self.bands[t - 1].theta >= b.theta {
                return Err(SatelliteError::InvalidPattern("band thetas must increase".into()));
            }
        }
        Ok(())
    }
}

/// The `(p, q)` torus braid `(s_1 ... s_{p-1})^|q|`, with bands of the sign
/// of `q`.
pub fn torus_pattern(p: usize, q: i64) -> PatternBraid {
    let sign = if q < 0 { -1 } else { 1 };
    let mut gens = Vec::new();
    for _ in 0..q.unsigned_abs() {
        for i in 0..p.saturating_sub(1) {
            gens.push((i, i + 1, sign));
        }
    }
    PatternBraid::from_generators(p.max(1), &gens).expect("torus braids are well formed")
}

/// Result of a construction, with the surface when one was realized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub euler_char: i64,
    pub boundary_components: Option<usize>,
    pub sqp: bool,
    pub slack: i64,
    pub surface: Option<BennequinSurface>,
}

impl SurfaceSummary {
    pub fn from_surface(s: &BennequinSurface) -> Self {
        let r = s.report();
        SurfaceSummary {
            euler_char: r.euler_char,
            boundary_components: Some(r.boundary_components),
            sqp: r.is_sqp,
            slack: r.bennequin_slack,
            surface: Some(s.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Rank of each value among the distinct values, from 0.
fn ranks(values: impl Iterator<Item = Q>) -> BTreeMap<Q, usize> {
    let mut v: Vec<Q> = values.collect();
    v.sort();
    v.dedup();
    v.into_iter().enumerate().map(|(i, x)| (x, i)).collect()
}

/// `n` parallel copies of `r`, joined at disk 0 by the pattern bands.
fn realize(pattern: &PatternBraid, r: &BennequinSurface) -> BennequinSurface {
    let n = pattern.n;
    let d = r.disks.len();
    let mut disks = Vec::with_capacity(n * d);
    let mut per_torus: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
    for disk in &r.disks {
        per_torus.entry(disk.torus).or_default().push(disk.z);
    }
    let z_rank: BTreeMap<usize, BTreeMap<Q, usize>> =
        per_torus.into_iter().map(|(t, zs)| (t, ranks(zs.into_iter()))).collect();
    for c in 0..n {
        for disk in &r.disks {
            let rk = &z_rank[&disk.torus];
            let slot = (rk[&disk.z] * n + c) as i128;
            disks.push(Disk { torus: disk.torus, z: Q::new(slot, (rk.len() * n) as i128) });
        }
    }
    let t_rank = ranks(r.bands.iter().map(|b| b.theta));
    let total = (r.bands.len() * n + pattern.bands.len()).max(1) as i128;
    let mut bands = Vec::new();
    for c in 0..n {
        for b in &r.bands {
            let slot = (t_rank[&b.theta] * n + c) as i128;
            bands.push(Band { theta: Q::new(slot, total), from: c * d + b.from, to: c * d + b.to, sign: b.sign });
        }
    }
    let base = r.bands.len() * n;
    for (t, pb) in pattern.bands.iter().enumerate() {
        bands.push(Band { theta: Q::new((base + t) as i128, total), from: pb.i * d, to: pb.j * d, sign: pb.sign });
    }
    BennequinSurface { disks, bands, provenance: Provenance::FromSatellite }
}

fn glue(pattern: &PatternBraid, companion: &CompanionSummary) -> SurfaceSummary {
    match &companion.surface {
        Some(r) if !r.disks.is_empty() => SurfaceSummary::from_surface(&realize(pattern, r)),
        _ => {
            let neg = pattern.bands.iter().filter(|b| b.sign < 0).count() as i64;
            SurfaceSummary {
                euler_char: pattern.n as i64 * companion.euler_char - pattern.bands.len() as i64,
                boundary_components: None,
                sqp: neg == 0 && companion.sqp,
                slack: 2 * neg,
                surface: None,
            }
        }
    }
}

/// Satellite of a strongly quasipositive companion with a strongly
/// quasipositive braid pattern.
pub fn satellite(pattern: &PatternBraid, companion: &CompanionSummary) -> Result<SurfaceSummary, SatelliteError> {
    pattern.check()?;
    if let Some(t) = pattern.bands.iter().position(|b| b.sign < 0) {
        return Err(SatelliteError::NegativePatternBand(t));
    }
    if !companion.sqp {
        return Err(SatelliteError::NonSqpInput);
    }
    Ok(glue(pattern, companion))
}

/// The `(p, q)` cable, together with whether it is strongly quasipositive.
pub fn cable(p: i64, q: i64, companion: &CompanionSummary) -> Result<SurfaceSummary, SatelliteError> {
    if p < 1 {
        return Err(SatelliteError::InvalidP(p));
    }
    if !companion.sqp {
        return Err(SatelliteError::NonSqpInput);
    }
    let mut out = glue(&torus_pattern(p as usize, q), companion);
    if let Some(s) = out.surface.as_mut() {
        s.provenance = Provenance::FromCable;
    }
    Ok(out)
}

/// The ribbon of a Legendrian knot: an annulus with positive bands.
pub fn quasipositive_annulus(knot: &GraphFront, d: &MorseDiagram) -> Result<BennequinSurface, SatelliteError> {
    if !knot.vertices.is_empty() {
        return Err(SatelliteError::NotAKnot("front has graph vertices".into()));
    }
    let cs = chains(knot, d).map_err(ArcError::from)?;
    if cs.len() != 1 {
        return Err(SatelliteError::NotAKnot(format!("{} components", cs.len())));
    }
    let (a, _) = to_arc_position(knot, d, None)?;
    Ok(ribbon_to_bennequin(&a)?)
}

/// Plumbing of two strongly quasipositive surfaces along a square.
pub fn plumb(r1: &SurfaceSummary, r2: &SurfaceSummary) -> Result<SurfaceSummary, SatelliteError> {
    if !r1.sqp || !r2.sqp {
        return Err(SatelliteError::NonSqpInput);
    }
    Ok(SurfaceSummary {
        euler_char: r1.euler_char + r2.euler_char - 1,
        boundary_components: None,
        sqp: true,
        slack: 0,
        surface: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::builtin_front;
    use crate::morse::builtin_diagram;
    use crate::rational::q;
    use crate::surface::bennequin_from_bands;

    fn annulus() -> CompanionSummary {
        CompanionSummary::from_surface(&bennequin_from_bands(2, &[(q(0, 1), 0, 1, 1), (q(1, 2), 0, 1, 1)]).unwrap())
    }

    fn summary(chi: i64) -> CompanionSummary {
        CompanionSummary { euler_char: chi, boundary_components: 1, sqp: true, surface: None }
    }

    #[test]
    fn trivial_pattern_is_identity() {
        let c = annulus();
        let s = satellite(&PatternBraid::trivial(1), &c).unwrap();
        assert_eq!(s.euler_char, c.euler_char);
        assert_eq!(s.boundary_components, Some(c.boundary_components));
    }

    #[test]
    fn satellite_counts() {
        let p = PatternBraid::from_generators(2, &[(0, 1, 1); 3]).unwrap();
        assert_eq!(satellite(&p, &annulus()).unwrap().euler_char, -3);
        let p = PatternBraid::from_generators(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 1, 1)]).unwrap();
        let s = satellite(&p, &summary(-1)).unwrap();
        assert_eq!((s.euler_char, s.sqp), (-7, true));
        let neg = PatternBraid::from_generators(2, &[(0, 1, -1)]).unwrap();
        assert_eq!(satellite(&neg, &annulus()), Err(SatelliteError::NegativePatternBand(0)));
    }

    #[test]
    fn cables() {
        let s = cable(2, 3, &annulus()).unwrap();
        assert_eq!((s.euler_char, s.sqp), (-3, true));
        let s = cable(3, -2, &summary(-1)).unwrap();
        assert_eq!((s.sqp, s.slack), (false, 8));
        assert_eq!(cable(1, 4, &annulus()).unwrap().euler_char, 0);
        assert_eq!(cable(0, 1, &annulus()), Err(SatelliteError::InvalidP(0)));
    }

    #[test]
    fn plumbing() {
        let a = SurfaceSummary::from_surface(annulus().surface.as_ref().unwrap());
        assert_eq!(plumb(&a, &a).unwrap().euler_char, -1);
        let disk = SurfaceSummary::from_surface(&bennequin_from_bands(1, &[]).unwrap());
        assert_eq!(plumb(&a, &disk).unwrap().euler_char, a.euler_char);
    }

    #[test]
    fn unknot_annulus() {
        let (dn, f) = builtin_front("disk_unknot").unwrap();
        let d = builtin_diagram(&dn).unwrap();
        let r = quasipositive_annulus(&f, &d).unwrap().report();
        assert_eq!((r.euler_char, r.boundary_components, r.is_sqp), (0, 2, true));
    }
}
