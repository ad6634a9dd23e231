//! Oracles computed independently of the library's own bookkeeping.
#![allow(dead_code)]

use openbook_ribbons::surface::{BennequinSurface, RibbonFront};

/// Euler characteristic of the cell structure of a disk-and-band surface.
///
/// A disk with `m` band attachments is a polygon with `2m` corners and `2m`
/// sides (one vertex and one loop when `m = 0`); every band adds its two
/// free sides and one 2-cell.
pub fn cw_euler(disks: usize, degrees: &[usize], bands: usize) -> i64 {
    assert_eq!(degrees.len(), disks);
    let mut v = 0i64;
    let mut e = 0i64;
    for &m in degrees {
        let corners = if m == 0 { 1 } else { 2 * m as i64 };
        v += corners;
        e += corners;
    }
    e += 2 * bands as i64;
    let f = (disks + bands) as i64;
    v - e + f
}

pub fn surface_cw_euler(s: &BennequinSurface) -> i64 {
    let mut deg = vec![0; s.disks.len()];
    for b in &s.bands {
        deg[b.from] += 1;
        deg[b.to] += 1;
    }
    cw_euler(s.disks.len(), &deg, s.bands.len())
}

pub fn ribbon_cw_euler(r: &RibbonFront) -> i64 {
    let mut deg = vec![0; r.disks.len()];
    for b in &r.bands {
        deg[b.from] += 1;
        deg[b.to] += 1;
    }
    cw_euler(r.disks.len(), &deg, r.bands.len())
}

/// Boundary circles of a surface whose bands join distinct disks, as the
/// cycles of the product of the transpositions `(i j)` taken in page order
/// (the closed braid's permutation), with disks ordered along the binding.
pub fn permutation_boundary(s: &BennequinSurface) -> usize {
    let n = s.disks.len();
    let mut bands = s.bands.clone();
    bands.sort_by(|a, b| a.theta.cmp(&b.theta));
    let mut perm: Vec<usize> = (0..n).collect();
    for b in &bands {
        assert_ne!(b.from, b.to, "oracle needs bands between distinct disks");
        perm.swap(b.from, b.to);
    }
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for i in 0..n {
        if !seen[i] {
            cycles += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    cycles
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
