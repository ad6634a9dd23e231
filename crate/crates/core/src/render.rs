//! SVG drawings of Morse diagrams with fronts or arc diagrams on top.
//!
//! Each torus is a unit square, `theta` to the right and `z` up, with the
//! usual arrows marking the identifications of opposite sides. Output is a
//! pure function of the input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arc::ArcDiagram;
use crate::front::GraphFront;
use crate::geom::{delta, Pt};
use crate::morse::MorseDiagram;
use crate::rational::{to_f64, Q};

const SIZE: f64 = 320.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn x(theta: f64) -> f64 {
    MARGIN + theta * SIZE
}

fn y(z: f64) -> f64 {
    MARGIN + (1.0 - z) * SIZE
}

/// Draw the segment from `a` to `a + delta(a, b)` together with the copies
/// shifted by the lattice that can meet the square; the clip path trims them.
fn segment(out: &mut String, a: Pt, b: Pt, style: &str) {
    let (dt, dz) = delta(a, b);
    let (t0, z0) = (to_f64(a.theta), to_f64(a.z));
    let (t1, z1) = (t0 + to_f64(dt), z0 + to_f64(dz));
    for si in [-1.0, 0.0, 1.0] {
        for sj in [-1.0, 0.0, 1.0] {
            let (lo_t, hi_t) = (t0.min(t1) + si, t0.max(t1) + si);
            let (lo_z, hi_z) = (z0.min(z1) + sj, z0.max(z1) + sj);
            if hi_t < 0.0 || lo_t > 1.0 || hi_z < 0.0 || lo_z > 1.0 {
                continue;
            }
            writeln!(
                out,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
                x(t0 + si),
                y(z0 + sj),
                x(t1 + si),
                y(z1 + sj)
            )
            .unwrap();
        }
    }
}

fn dot(out: &mut String, p: Pt, r: f64, style: &str) {
    writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="{r}" {style}/>"#, x(to_f64(p.theta)), y(to_f64(p.z))).unwrap();
}

fn frame(out: &mut String, torus: usize) {
    let side = SIZE + 2.0 * MARGIN;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    )
    .unwrap();
    writeln!(out, r#"<title>torus {torus}</title>"#).unwrap();
    writeln!(out, r#"<clipPath id="square"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/></clipPath>"#).unwrap();
    writeln!(out, r##"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="#ffffff" stroke="#000000"/>"##).unwrap();
    for k in 1..8 {
        let f = k as f64 / 8.0;
        writeln!(
            out,
            r##"<line x1="{:.3}" y1="{MARGIN}" x2="{:.3}" y2="{:.3}" stroke="#e0e0e0" stroke-width="0.5"/>"##,
            x(f),
            x(f),
            MARGIN + SIZE
        )
        .unwrap();
        writeln!(
            out,
            r##"<line x1="{MARGIN}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#e0e0e0" stroke-width="0.5"/>"##,
            y(f),
            MARGIN + SIZE,
            y(f)
        )
        .unwrap();
    }
    // identification arrows: one on the theta sides, two on the z sides
    let (mid, lo, hi) = (MARGIN + SIZE / 2.0, MARGIN, MARGIN + SIZE);
    for yy in [lo, hi] {
        writeln!(out, r#"<path d="M {:.3} {:.3} l 8 -4 l -8 -4" transform="translate(0 4)" fill="none" stroke="black"/>"#, mid - 4.0, yy).unwrap();
    }
    for xx in [lo, hi] {
        for off in [-6.0, 2.0] {
            writeln!(out, r#"<path d="M {:.3} {:.3} l -4 -8 l -4 8" transform="translate(4 0)" fill="none" stroke="black"/>"#, xx, mid - off).unwrap();
        }
    }
}

fn skeleton(out: &mut String, d: &MorseDiagram, torus: usize) {
    let labels: Vec<&str> = {
        let mut l: Vec<&str> = d.edges.iter().map(|e| e.label.as_str()).collect();
        l.sort();
        l.dedup();
        l
    };
    let colour: BTreeMap<&str, &str> = labels.iter().enumerate().map(|(i, &l)| (l, PALETTE[i % PALETTE.len()])).collect();
    writeln!(out, r#"<g clip-path="url(#square)">"#).unwrap();
    for e in d.edges.iter().filter(|e| e.torus == torus) {
        let style = format!(r#"stroke="{}" stroke-width="2" class="skeleton""#, colour[e.label.as_str()]);
        for (_, a, b) in e.segments() {
            segment(out, a, b, &style);
        }
    }
    writeln!(out, "</g>").unwrap();
    for (i, v) in d.vertices.iter().enumerate().filter(|(_, v)| v.torus == torus) {
        let p = v.pt();
        dot(out, p, 3.5, r#"fill="black" class="vertex""#);
        writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="9" font-family="monospace">{i}~{}</text>"#,
            x(to_f64(p.theta)) + 4.0,
            y(to_f64(p.z)) - 4.0,
            v.partner
        )
        .unwrap();
    }
}

fn front_layer(out: &mut String, f: &GraphFront, torus: usize) {
    writeln!(out, r#"<g clip-path="url(#square)">"#).unwrap();
    let style = r#"stroke="black" stroke-width="1.5" class="strand""#;
    for s in f.strands.iter().filter(|s| s.torus == torus) {
        for i in 0..s.n_segments() {
            let (a, b) = s.segment(i);
            segment(out, a, b, style);
        }
    }
    // gap in the far strand, then the near strand drawn over it
    for c in f.crossings.iter().filter(|c| c.torus == torus) {
        dot(out, c.at, 5.0, r##"fill="#ffffff" class="gap""##);
        let (a, b) = f.strands[c.near.strand].segment(c.near.segment);
        segment(out, a, b, style);
    }
    writeln!(out, "</g>").unwrap();
    for s in f.strands.iter().filter(|s| s.torus == torus) {
        for i in s.cusp_indices() {
            dot(out, s.points[i].pt, 2.5, r##"fill="#ffffff" stroke="black" class="cusp""##);
        }
    }
    for v in f.vertices.iter().filter(|v| v.torus == torus) {
        dot(out, v.pt(), 3.0, r##"fill="#d62728" class="graph-vertex""##);
    }
}

fn arc_layer(out: &mut String, a: &ArcDiagram, torus: usize) {
    writeln!(out, r#"<g clip-path="url(#square)">"#).unwrap();
    for w in &a.wires {
        for arc in w.arcs.iter().filter(|arc| arc.torus == torus) {
            let from = Pt::new(w.theta, arc.z_from);
            let down = arc.length();
            let to = Pt::new(w.theta, arc.z_from - down);
            // split long arcs so each piece is an unambiguous segment
            let mid = Pt::new(w.theta, arc.z_from - down / Q::from_integer(2)).canonical();
            segment(out, from, mid, r#"stroke="black" stroke-width="1.5" class="wire""#);
            segment(out, mid, to.canonical(), r#"stroke="black" stroke-width="1.5" class="wire""#);
        }
    }
    writeln!(out, "</g>").unwrap();
    for v in a.vertices.iter().filter(|v| v.torus == torus) {
        writeln!(
            out,
            r##"<rect x="{:.3}" y="{:.3}" width="{SIZE}" height="1.5" fill="#d62728" class="binding-vertex"/>"##,
            MARGIN,
            y(to_f64(v.z)) - 0.75
        )
        .unwrap();
    }
}

/// One SVG document per torus.
pub fn render(d: &MorseDiagram, front: Option<&GraphFront>, arcs: Option<&ArcDiagram>) -> Vec<String> {
    (0..d.tori.max(1))
        .map(|t| {
            let mut out = String::new();
            frame(&mut out, t);
            skeleton(&mut out, d, t);
            if let Some(f) = front {
                front_layer(&mut out, f, t);
            }
            if let Some(a) = arcs {
                arc_layer(&mut out, a, t);
            }
            out.push_str("</svg>\n");
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::builtin_front;
    use crate::morse::builtin_diagram;

    #[test]
    fn deterministic_and_complete() {
        let d = builtin_diagram("ex_2_1_b").unwrap();
        let svgs = render(&d, None, None);
        assert_eq!(svgs.len(), 1);
        assert_eq!(svgs, render(&d, None, None));
        assert_eq!(svgs[0].matches(r#"class="vertex""#).count(), 4);
        let empty = render(&builtin_diagram("disk_identity").unwrap(), None, None);
        assert!(!empty[0].contains("skeleton"));
    }

    #[test]
    fn fronts_show_cusps() {
        let (dn, f) = builtin_front("disk_unknot").unwrap();
        let svg = &render(&builtin_diagram(&dn).unwrap(), Some(&f), None)[0];
        assert_eq!(svg.matches(r#"class="cusp""#).count(), 2);
    }
}
