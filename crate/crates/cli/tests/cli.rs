use std::path::Path;
use std::process::{Command, Output};

use openbook_ribbons::io::{write_bsurf, write_morse};
use openbook_ribbons::{bennequin_from_bands, builtin_diagram};
use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_openbook-ribbons"))
        .args(args)
        .current_dir(dir)
        .env_remove("OPENBOOK_RIBBONS_COLOR")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exported_builtin_validates() {
    let dir = tempfile::tempdir().unwrap();
    let text = write_morse(&builtin_diagram("ex_2_1_a").unwrap());
    std::fs::write(dir.path().join("a.morse"), &text).unwrap();
    let o = run(&["validate", "a.morse"], dir.path());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["valid"], true);
    assert_eq!(v["page_invariants"]["n_binding"], 2);
}

#[test]
fn truncated_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = write_morse(&builtin_diagram("ex_2_1_a").unwrap());
    let cut = &text[..text.len() / 2];
    let cut = &cut[..cut.rfind('/').unwrap() + 1];
    std::fs::write(dir.path().join("t.morse"), cut).unwrap();
    let o = run(&["validate", "t.morse"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn relabelled_edge_breaks_pairing() {
    let dir = tempfile::tempdir().unwrap();
    let mut d = builtin_diagram("ex_2_1_a").unwrap();
    d.edges[0].label = "zz".into();
    std::fs::write(dir.path().join("m.morse"), write_morse(&d)).unwrap();
    let o = run(&["validate", "m.morse"], dir.path());
    assert_eq!(code(&o), 1);
    let axioms: Vec<String> =
        json(&o)["violations"].as_array().unwrap().iter().map(|v| v["axiom"].as_str().unwrap().to_string()).collect();
    assert!(!axioms.is_empty());
    assert!(axioms.iter().all(|a| a == "ii"), "{axioms:?}");
}

#[test]
fn missing_file_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["validate", "nope.morse"], dir.path())), 3);
    assert_eq!(code(&run(&["validate", "x.txt"], dir.path())), 3);
}

#[test]
fn empty_front_gives_empty_surface() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("e.front"), "morse disk_identity\n").unwrap();
    let o = run(&["pipeline", "e.front", "--out", "out"], dir.path());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["invariants"]["euler_char"], 0);
    assert_eq!(v["invariants"]["bennequin_slack"], 0);
}

#[test]
fn pipeline_outputs_validate() {
    let dir = tempfile::tempdir().unwrap();
    for (diagram, seed) in [("ex_2_1_a", 1), ("ex_2_1_b", 2), ("disk_identity", 3)] {
        let name = format!("{diagram}.front");
        let o = run(&["gen", diagram, "--seed", &seed.to_string(), "--out", &name], dir.path());
        assert_eq!(code(&o), 0);
        let out = format!("out-{diagram}");
        let o = run(&["pipeline", &name, "--out", &out, "--svg"], dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["invariants"]["bennequin_slack"], 0);
        assert_eq!(v["invariants"]["is_sqp"], true);
        for f in ["arc.arc", "surface.bsurf"] {
            let p = format!("{out}/{f}");
            assert_eq!(code(&run(&["validate", &p], dir.path())), 0, "{p}");
        }
    }
}

#[test]
fn explicit_epsilon_too_large_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    run(&["gen", "disk_identity", "--out", "f.front"], dir.path());
    let o = run(&["pipeline", "f.front", "--epsilon", "9/10"], dir.path());
    assert_eq!(code(&o), 3);
    let o = run(&["pipeline", "f.front", "--epsilon", "x/y"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn rendering_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("b.morse"), write_morse(&builtin_diagram("ex_2_1_b").unwrap())).unwrap();
    let first = run(&["render", "b.morse"], dir.path());
    let second = run(&["render", "b.morse"], dir.path());
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let svg = String::from_utf8(first.stdout).unwrap();
    assert_eq!(svg.matches("<svg").count(), 1);
    let o = run(&["render", "b.morse", "--out", "svg"], dir.path());
    assert_eq!(json(&o)["files"].as_array().unwrap().len(), 1);
}

#[test]
fn cables_and_satellites() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(&["cable", "-p", "2", "-q", "3"], dir.path()));
    assert_eq!((v["sqp"].clone(), v["euler_char"].clone()), (Value::from(true), Value::from(-3)));
    let v = json(&run(&["cable", "-p", "3", "-q", "-2"], dir.path()));
    assert_eq!((v["sqp"].clone(), v["slack"].clone()), (Value::from(false), Value::from(8)));
    let trivial = json(&run(&["satellite"], dir.path()));
    assert_eq!(trivial["euler_char"], 0);
    assert_eq!(trivial["boundary_components"], 2);
    let o = run(&["satellite", "--strands", "2", "--bands", "0:1:-"], dir.path());
    assert_eq!(code(&o), 3);
    assert_eq!(code(&run(&["cable", "-p", "0", "-q", "1"], dir.path())), 3);
}

#[test]
fn stabilization_keeps_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let s = bennequin_from_bands(2, &[(openbook_ribbons::rational::q(0, 1), 0, 1, 1)]).unwrap();
    std::fs::write(dir.path().join("s.bsurf"), write_bsurf(&s)).unwrap();
    let before = json(&run(&["invariants", "s.bsurf"], dir.path()));
    let o = run(&["stabilize", "s.bsurf", "--times", "3", "--out", "t.bsurf"], dir.path());
    assert_eq!(code(&o), 0);
    let after = json(&run(&["invariants", "t.bsurf"], dir.path()));
    for k in ["euler_char", "self_linking", "boundary_components", "is_sqp"] {
        assert_eq!(before[k], after[k], "{k}");
    }
    assert_eq!(after["d"], 5);
    run(&["stabilize", "t.bsurf", "--times", "3", "--inverse", "--out", "u.bsurf"], dir.path());
    let back = std::fs::read_to_string(dir.path().join("u.bsurf")).unwrap();
    assert_eq!(back, write_bsurf(&s));
}

#[test]
fn colour_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let plain = run(&["cable", "-p", "1", "-q", "1"], dir.path());
    assert!(!String::from_utf8_lossy(&plain.stderr).contains('\x1b'));
    let coloured = Command::new(env!("CARGO_BIN_EXE_openbook-ribbons"))
        .args(["cable", "-p", "1", "-q", "1"])
        .current_dir(dir.path())
        .env("OPENBOOK_RIBBONS_COLOR", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&coloured.stderr).contains('\x1b'));
}

#[test]
fn generation_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["gen", "ex_2_1_b", "--seed", "5"], dir.path());
    let b = run(&["gen", "ex_2_1_b", "--seed", "5"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&run(&["gen", "nowhere"], dir.path())), 3);
}
