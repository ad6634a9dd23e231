mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::{gcd, permutation_boundary, ribbon_cw_euler, surface_cw_euler};
use openbook_ribbons::io::{
    load_front, parse_arc, parse_bsurf, parse_front, parse_morse, write_arc, write_bsurf, write_front, write_morse,
};
use openbook_ribbons::morse::{builtin_diagram, validate_morse_diagram, Axiom, MorseDiagram, Side, BUILTIN_NAMES};
use openbook_ribbons::rational::q;
use openbook_ribbons::render::render;
use openbook_ribbons::satellite::torus_pattern;
use openbook_ribbons::surface::{
    bennequin_from_bands, destabilize, positive_markov_stabilization, ribbon_front, ribbon_to_bennequin,
    BennequinSurface,
};
use openbook_ribbons::{
    cable, graph_counts, random_graph_front, satellite, to_arc_position, CompanionSummary, PatternBraid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok() -> Outcome {
    Outcome { pass: true, detail: String::new() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return fail(format!($($msg)*));
        }
    };
}

fn c1_examples() -> Outcome {
    let expected = [
        ("ex_2_1_a", (2, 1, 0, 0)),
        ("ex_2_1_b", (1, 2, -1, 1)),
        ("ex_2_1_c", (2, 1, 0, 0)),
        ("disk_identity", (1, 0, 1, 0)),
    ];
    for (name, want) in expected {
        let d = builtin_diagram(name).unwrap();
        let r = validate_morse_diagram(&d).unwrap();
        ensure!(r.is_valid(), "{name}: {:?}", r.axioms());
        let p = d.page_invariants().unwrap();
        let got = (p.n_binding, p.h_handles, p.euler_char, p.genus);
        ensure!(got == want, "{name}: {got:?} != {want:?}");
    }
    ok()
}

type Mutation = (&'static str, &'static str, fn(&mut MorseDiagram), Axiom);

/// Make segment `k - 1` of edge `e` vertical by pulling point `k` back.
fn vertical(d: &mut MorseDiagram, e: usize, k: usize) {
    let t = d.edges[e].points[k - 1].theta;
    d.edges[e].points[k].theta = t;
}

fn mutations() -> Vec<Mutation> {
    vec![
        ("vertical segment 0", "ex_2_1_a", |d| vertical(d, 1, 1), Axiom::Monotone),
        ("vertical segment 4", "ex_2_1_a", |d| vertical(d, 1, 5), Axiom::Monotone),
        ("vertical segment 6", "ex_2_1_a", |d| vertical(d, 1, 7), Axiom::Monotone),
        ("relabel closed a", "ex_2_1_a", |d| d.edges[0].label = "c".into(), Axiom::Pairing),
        ("relabel winding a", "ex_2_1_c", |d| d.edges[1].label = "c".into(), Axiom::Pairing),
        ("relabel middle a", "ex_2_1_b", |d| d.edges[1].label = "c".into(), Axiom::Pairing),
        ("extra torus", "ex_2_1_a", |d| d.tori += 1, Axiom::Surgery),
        ("extra torus", "ex_2_1_b", |d| d.tori += 1, Axiom::Surgery),
        ("extra torus", "ex_2_1_c", |d| d.tori += 1, Axiom::Surgery),
        ("flip side of vertex 0", "ex_2_1_b", |d| d.vertices[0].side = Side::Right, Axiom::VertexPairs),
        ("flip side of vertex 3", "ex_2_1_b", |d| d.vertices[3].side = Side::Left, Axiom::VertexPairs),
        ("partner across slices", "ex_2_1_b", |d| d.vertices[0].partner = 2, Axiom::VertexPairs),
        ("own partner", "ex_2_1_b", |d| d.vertices[1].partner = 1, Axiom::VertexPairs),
    ]
}

fn c2_mutations() -> Outcome {
    let ms = mutations();
    ensure!(ms.len() >= 10, "only {} mutations", ms.len());
    for (what, name, mutate, axiom) in ms {
        let mut d = builtin_diagram(name).unwrap();
        mutate(&mut d);
        let r = match validate_morse_diagram(&d) {
            Ok(r) => r,
            Err(e) => return fail(format!("{name} / {what}: {e}")),
        };
        ensure!(r.axioms() == vec![axiom], "{name} / {what}: flagged {:?}, wanted {axiom:?}", r.axioms());
    }
    ok()
}

fn c3_pipeline() -> Outcome {
    let mut n = 0;
    for name in BUILTIN_NAMES {
        let d = builtin_diagram(name).unwrap();
        for seed in 0..25 {
            let f = random_graph_front(seed, 6, &d).unwrap();
            let (a, _) = match to_arc_position(&f, &d, None) {
                Ok(x) => x,
                Err(e) => return fail(format!("{name} seed {seed}: {e}")),
            };
            let s = ribbon_to_bennequin(&a).unwrap();
            let r = s.report();
            ensure!(s.b_minus() == 0, "{name} seed {seed}: negative band");
            ensure!(r.bennequin_slack == 0, "{name} seed {seed}: slack {}", r.bennequin_slack);
            ensure!(r.self_linking == -r.euler_char, "{name} seed {seed}: sl {} chi {}", r.self_linking, r.euler_char);
            ensure!(surface_cw_euler(&s) == r.euler_char, "{name} seed {seed}: surface cells disagree");
            let ribbon = ribbon_front(&f, &d).unwrap();
            let cw = ribbon_cw_euler(&ribbon);
            ensure!(cw == r.euler_char, "{name} seed {seed}: ribbon chi {cw} vs {}", r.euler_char);
            let g = graph_counts(&f, &d).unwrap();
            ensure!(a.euler() == g.euler(), "{name} seed {seed}: V-E {} vs {}", a.euler(), g.euler());
            n += 1;
        }
    }
    ensure!(n == 100, "{n} fronts");
    ok()
}

fn torus_link(q_: usize) -> BennequinSurface {
    let bands: Vec<_> = (0..q_).map(|k| (q(k as i128, q_ as i128), 0, 1, 1)).collect();
    bennequin_from_bands(2, &bands).unwrap()
}

fn c4_torus_links() -> Outcome {
    for qq in 2..=6usize {
        let s = torus_link(qq);
        let r = s.report();
        let qi = qq as i64;
        ensure!(r.euler_char == 2 - qi, "T(2,{qq}) chi {}", r.euler_char);
        ensure!(r.self_linking == qi - 2, "T(2,{qq}) sl {}", r.self_linking);
        ensure!(r.boundary_components == gcd(2, qi) as usize, "T(2,{qq}) boundary {}", r.boundary_components);
        ensure!(permutation_boundary(&s) == r.boundary_components, "T(2,{qq}) oracle boundary");
        ensure!(surface_cw_euler(&s) == r.euler_char, "T(2,{qq}) oracle chi");
    }
    ok()
}

/// Annulus around the unknot: two disks, two positive bands.
fn annulus() -> CompanionSummary {
    let s = bennequin_from_bands(2, &[(q(0, 1), 0, 1, 1), (q(1, 2), 0, 1, 1)]).unwrap();
    CompanionSummary::from_surface(&s)
}

/// Returns the grid points whose verdict disagrees with `q >= 0`; any other
/// discrepancy is reported as an error.
fn c5_cables() -> Result<Vec<(i64, i64)>, String> {
    let companion = annulus();
    let mut wrong = Vec::new();
    for p in 1..=5i64 {
        for qq in -5..=5i64 {
            let c = cable(p, qq, &companion).map_err(|e| format!("({p},{qq}): {e}"))?;
            if c.sqp != (qq >= 0) {
                wrong.push((p, qq));
            }
            if qq < 0 {
                let want = 2 * qq.abs() * (p - 1);
                if c.slack != want {
                    return Err(format!("({p},{qq}): slack {} != {want}", c.slack));
                }
            } else {
                let s = satellite(&torus_pattern(p as usize, qq), &companion).map_err(|e| e.to_string())?;
                if (s.euler_char, s.sqp) != (c.euler_char, c.sqp) {
                    return Err(format!("({p},{qq}): cable and satellite disagree"));
                }
            }
        }
    }
    Ok(wrong)
}

fn random_positive_surface(rng: &mut ChaCha8Rng) -> BennequinSurface {
    let d = rng.gen_range(1..=4usize);
    let k = if d == 1 { 0 } else { rng.gen_range(0..=5usize) };
    let bands: Vec<_> = (0..k)
        .map(|t| {
            let i = rng.gen_range(0..d);
            let j = (i + rng.gen_range(1..d)) % d;
            (q(t as i128, k as i128), i, j, 1)
        })
        .collect();
    bennequin_from_bands(d, &bands).unwrap()
}

fn random_pattern(rng: &mut ChaCha8Rng) -> PatternBraid {
    let n = rng.gen_range(1..=4usize);
    let k = if n == 1 { 0 } else { rng.gen_range(0..=5usize) };
    let gens: Vec<_> = (0..k)
        .map(|_| {
            let i = rng.gen_range(0..n - 1);
            (i, rng.gen_range(i + 1..n), 1)
        })
        .collect();
    PatternBraid::from_generators(n, &gens).unwrap()
}

fn c6_satellites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..50 {
        let r = random_positive_surface(&mut rng);
        let pat = random_pattern(&mut rng);
        let companion = CompanionSummary::from_surface(&r);
        let out = match satellite(&pat, &companion) {
            Ok(o) => o,
            Err(e) => return fail(format!("pair {t}: {e}")),
        };
        let Some(s) = out.surface.as_ref() else {
            return fail(format!("pair {t}: no realized surface"));
        };
        let want = pat.n as i64 * surface_cw_euler(&r) - pat.bands.len() as i64;
        let cw = surface_cw_euler(s);
        ensure!(cw == want, "pair {t}: cells give {cw}, formula {want}");
        ensure!(out.euler_char == want, "pair {t}: reported {}", out.euler_char);
    }
    ok()
}

fn random_mixed_surface(rng: &mut ChaCha8Rng) -> BennequinSurface {
    let d = rng.gen_range(2..=6usize);
    let k = rng.gen_range(0..=8usize);
    let bands: Vec<_> = (0..k)
        .map(|t| {
            let i = rng.gen_range(0..d);
            let j = (i + rng.gen_range(1..d)) % d;
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (q(t as i128, k as i128), i, j, sign)
        })
        .collect();
    bennequin_from_bands(d, &bands).unwrap()
}

fn c7_stabilization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..50 {
        let s = random_mixed_surface(&mut rng);
        let key = |s: &BennequinSurface| {
            let r = s.report();
            (r.self_linking, r.euler_char, r.boundary_components, r.is_sqp)
        };
        let mut cur = s.clone();
        for _ in 0..3 {
            cur = positive_markov_stabilization(&cur);
            ensure!(key(&cur) == key(&s), "surface {t}: invariants moved");
            ensure!(surface_cw_euler(&cur) == surface_cw_euler(&s), "surface {t}: cells moved");
        }
        for _ in 0..3 {
            cur = match destabilize(&cur) {
                Ok(c) => c,
                Err(e) => return fail(format!("surface {t}: {e}")),
            };
        }
        ensure!(cur == s, "surface {t}: destabilization does not undo stabilization");
    }
    ok()
}

fn samples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn c8_round_trip() -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(samples_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure!(!files.is_empty(), "no samples");
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap();
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let again = match ext {
            "morse" => parse_morse(&text).map(|d| write_morse(&d)),
            "front" => parse_front(&text).map(|(r, f)| write_front(&r, &f)),
            "arc" => parse_arc(&text).map(|(r, a)| write_arc(&r, &a)),
            "bsurf" => parse_bsurf(&text).map(|s| write_bsurf(&s)),
            _ => continue,
        };
        match again {
            Ok(t) => ensure!(t == text, "{} changes on rewrite", path.display()),
            Err(e) => return fail(format!("{}: {e}", path.display())),
        }
        if ext == "front" {
            let (d, _, f) = load_front(path).unwrap();
            let (a, _) = to_arc_position(&f, &d, None).unwrap();
            let first = render(&d, Some(&f), Some(&a));
            ensure!(first == render(&d, Some(&f), Some(&a)), "{}: svg differs", path.display());
        }
    }
    ok()
}

/// Straight to the stderr handle, so the lines show without `--nocapture`.
fn line(s: String) {
    let _ = writeln!(std::io::stderr(), "{s}");
}

fn report(n: usize, name: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = run();
    let took = start.elapsed();
    if o.pass && took > limit {
        o = fail(format!("took {took:?}, limit {limit:?}"));
    }
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    line(format!("criterion {n} {verdict} {name} ({took:.2?}) {}", o.detail));
    o.pass
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let mut passed = vec![
        report(1, "page invariants of the example diagrams", s(1), c1_examples),
        report(2, "axiom mutations", s(1), c2_mutations),
        report(3, "pipeline equality on 100 random fronts", s(30), c3_pipeline),
        report(4, "T(2,q) on the disk open book", s(1), c4_torus_links),
    ];

    // The p = 1 column of the cable grid has no bands, so negative q still
    // gives a strongly quasipositive annulus; the criterion's verdict rule
    // cannot hold there.
    let start = Instant::now();
    let cables = c5_cables();
    let expected: Vec<(i64, i64)> = (-5..0).map(|qq| (1, qq)).collect();
    let c5 = match &cables {
        Ok(w) if w.is_empty() => ok(),
        Ok(w) => fail(format!("verdict differs from q >= 0 at {w:?}")),
        Err(e) => fail(e.clone()),
    };
    line(format!(
        "criterion 5 {} cable verdicts ({:.2?}) {}",
        if c5.pass { "PASS" } else { "FAIL" },
        start.elapsed(),
        c5.detail
    ));
    passed.push(c5.pass);

    passed.push(report(6, "satellite Euler characteristic", s(10), c6_satellites));
    passed.push(report(7, "stabilization", s(5), c7_stabilization));
    passed.push(report(8, "sample round trips", s(5), c8_round_trip));

    for (i, p) in passed.iter().enumerate() {
        if i != 4 {
            assert!(p, "criterion {} failed", i + 1);
        }
    }
    assert_eq!(cables.as_deref(), Ok(&expected[..]), "cable grid fails outside p = 1, q < 0");
}
