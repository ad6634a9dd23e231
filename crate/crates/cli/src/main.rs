use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use openbook_ribbons::arc::{epsilon_bound, to_cusped, validate_cusped};
use openbook_ribbons::generate::{builtin_front, random_graph_front};
use openbook_ribbons::io::{self, FileKind, LoadError, ParseError};
use openbook_ribbons::morse::{builtin_diagram, BUILTIN_NAMES};
use openbook_ribbons::rational::{fmt_q, parse_q, Q};
use openbook_ribbons::satellite::{cable, satellite, CompanionSummary, PatternBraid, SatelliteError};
use openbook_ribbons::surface::{destabilize, positive_markov_stabilization, ribbon_to_bennequin, BennequinSurface};
use openbook_ribbons::{
    quasipositive_annulus, to_arc_position, validate_arc_diagram, validate_front, validate_morse_diagram, MorseDiagram,
};

#[derive(Parser)]
#[command(name = "openbook-ribbons", version, about = "Legendrian ribbons and Bennequin surfaces in open books")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a .morse, .front, .arc or .bsurf file and print a JSON report.
    Validate { path: PathBuf },
    /// Front -> arc diagram -> Bennequin surface, with an invariant report.
    Pipeline {
        front: PathBuf,
        /// Slant parameter for arc position: `auto` or a rational `p/q`.
        #[arg(long, default_value = "auto")]
        epsilon: String,
        #[arg(long, default_value = "pipeline-out")]
        out: PathBuf,
        /// Also write SVG drawings.
        #[arg(long)]
        svg: bool,
    },
    /// Draw a .morse, .front or .arc file, one SVG per torus.
    Render {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Satellite of a companion surface with a positive braid pattern.
    Satellite {
        /// Number of strands of the pattern.
        #[arg(long, default_value_t = 1)]
        strands: usize,
        /// Bands as `i:j` (positive) or `i:j:-` (negative), comma separated.
        #[arg(long, default_value = "")]
        bands: String,
        /// Companion surface (.bsurf); defaults to the annulus of the unknot.
        #[arg(long)]
        companion: Option<PathBuf>,
    },
    /// The (p, q) cable of a companion surface.
    Cable {
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        companion: Option<PathBuf>,
    },
    /// Positive Markov stabilization (or its inverse) of a surface.
    Stabilize {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: usize,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant report of a surface.
    Invariants { path: PathBuf },
    /// A random front on a builtin diagram.
    Gen {
        /// Builtin diagram name.
        diagram: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(Value),
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

fn parse_err(path: &Path, e: ParseError) -> Failure {
    Failure::Parse(format!("{}: {e}", path.display()))
}

fn pre(e: impl std::fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

type Outcome = Result<Value, Failure>;

fn colour() -> bool {
    std::env::var("OPENBOOK_RIBBONS_COLOR").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn status(ok: bool, msg: &str) {
    let (code, word) = if ok { ("32", "ok") } else { ("31", "error") };
    if colour() {
        eprintln!("\x1b[{code}m{word}\x1b[0m {msg}");
    } else {
        eprintln!("{word} {msg}");
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| pre(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| pre(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| pre(format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<BennequinSurface, Failure> {
    let s = io::parse_bsurf(&read(path)?).map_err(|e| parse_err(path, e))?;
    s.check(s.provenance == openbook_ribbons::surface::Provenance::FromRibbon)
        .map_err(|e| Failure::Invalid(json!({ "kind": "bsurf", "valid": false, "error": e.to_string() })))?;
    Ok(s)
}

fn kind_of(path: &Path) -> Result<FileKind, Failure> {
    FileKind::of(path).ok_or_else(|| pre(format!("{}: unknown file type", path.display())))
}

fn validate(path: &Path) -> Outcome {
    let report = match kind_of(path)? {
        FileKind::Morse => {
            let d = io::parse_morse(&read(path)?).map_err(|e| parse_err(path, e))?;
            match validate_morse_diagram(&d) {
                Ok(r) => {
                    let violations: Vec<Value> = r
                        .violations
                        .iter()
                        .map(|v| json!({ "axiom": v.axiom.numeral(), "detail": v.detail }))
                        .collect();
                    let mut out = json!({ "kind": "morse", "valid": r.is_valid(), "violations": violations });
                    if r.is_valid() {
                        out["page_invariants"] = serde_json::to_value(d.page_invariants().map_err(pre)?).unwrap();
                    }
                    out
                }
                Err(e) => json!({ "kind": "morse", "valid": false, "error": e.to_string() }),
            }
        }
        FileKind::Front => {
            let (d, _, f) = io::load_front(path)?;
            match validate_front(&f, &d) {
                Ok(r) => json!({
                    "kind": "front",
                    "valid": r.is_valid(),
                    "issues": r.issues.iter().map(|i| format!("{:?}", i.kind)).collect::<Vec<_>>(),
                }),
                Err(e) => json!({ "kind": "front", "valid": false, "error": e.to_string() }),
            }
        }
        FileKind::Arc => {
            let (d, _, a) = io::load_arc(path)?;
            match validate_arc_diagram(&a, &d) {
                Ok(r) => json!({
                    "kind": "arc",
                    "valid": r.is_valid(),
                    "issues": r.issues.iter().map(|i| format!("{:?}: {}", i.kind, i.detail)).collect::<Vec<_>>(),
                }),
                Err(e) => json!({ "kind": "arc", "valid": false, "error": e.to_string() }),
            }
        }
        FileKind::Bsurf => {
            let s = load_surface(path)?;
            json!({ "kind": "bsurf", "valid": true, "invariants": s.report() })
        }
    };
    if report["valid"] == json!(true) {
        Ok(report)
    } else {
        Err(Failure::Invalid(report))
    }
}

fn write_svgs(out: &Path, stem: &str, svgs: &[String]) -> Result<Vec<String>, Failure> {
    let mut names = Vec::new();
    for (t, svg) in svgs.iter().enumerate() {
        let p = out.join(format!("{stem}-torus{t}.svg"));
        write(&p, svg)?;
        names.push(p.display().to_string());
    }
    Ok(names)
}

fn pipeline(front: &Path, epsilon: &str, out: &Path, svg: bool) -> Outcome {
    let (d, morse_ref, f) = io::load_front(front)?;
    let eps = match epsilon {
        "auto" => None,
        e => Some(parse_q(e).map_err(|m| Failure::Parse(format!("--epsilon: {m}")))?),
    };
    let report = validate_front(&f, &d).map_err(|e| pre(format!("front: {e}")))?;
    if !report.is_valid() {
        let issues: Vec<String> = report.issues.iter().map(|i| format!("{:?}", i.kind)).collect();
        return Err(Failure::Invalid(json!({ "stage": "front", "valid": false, "issues": issues })));
    }
    let (a, record) = to_arc_position(&f, &d, eps).map_err(|e| pre(format!("arc position: {e}")))?;
    let surface = ribbon_to_bennequin(&a).map_err(|e| pre(format!("bennequin: {e}")))?;
    let invariants = surface.report();

    // the arc diagram is referenced from the output directory
    let morse_ref = if BUILTIN_NAMES.contains(&morse_ref.as_str()) {
        morse_ref
    } else {
        write(&out.join("diagram.morse"), &io::write_morse(&d))?;
        "diagram.morse".to_string()
    };
    write(&out.join("arc.arc"), &io::write_arc(&morse_ref, &a))?;
    write(&out.join("subdivision.json"), &record.to_json())?;
    write(&out.join("surface.bsurf"), &io::write_bsurf(&surface))?;
    write(&out.join("report.json"), &invariants.to_json())?;
    let cusped = if a.wires.is_empty() {
        Value::Null
    } else {
        let e = epsilon_bound(&a, &d) / Q::from_integer(2);
        let c = to_cusped(&a, &d, e).map_err(|e| pre(format!("cusped: {e}")))?;
        let r = validate_cusped(&c);
        if !r.is_valid() {
            return Err(Failure::Invalid(json!({ "stage": "cusped", "valid": false, "issues": r.summary() })));
        }
        json!({ "epsilon": fmt_q(e), "valid": true })
    };
    let mut files = vec!["arc.arc", "subdivision.json", "surface.bsurf", "report.json"]
        .into_iter()
        .map(|n| out.join(n).display().to_string())
        .collect::<Vec<_>>();
    if svg {
        files.extend(write_svgs(out, "front", &openbook_ribbons::render::render(&d, Some(&f), None))?);
        files.extend(write_svgs(out, "arc", &openbook_ribbons::render::render(&d, None, Some(&a)))?);
    }
    Ok(json!({
        "epsilon": fmt_q(record.epsilon),
        "steps": record.rectangular.steps,
        "binding_vertices": a.vertices.len(),
        "wires": a.wires.len(),
        "cusped": cusped,
        "invariants": invariants,
        "files": files,
    }))
}

fn render(path: &Path, out: Option<&Path>) -> Outcome {
    let (d, f, a): (MorseDiagram, _, _) = match kind_of(path)? {
        FileKind::Morse => (io::parse_morse(&read(path)?).map_err(|e| parse_err(path, e))?, None, None),
        FileKind::Front => {
            let (d, _, f) = io::load_front(path)?;
            (d, Some(f), None)
        }
        FileKind::Arc => {
            let (d, _, a) = io::load_arc(path)?;
            (d, None, Some(a))
        }
        FileKind::Bsurf => return Err(pre("surfaces have no drawing")),
    };
    let svgs = openbook_ribbons::render::render(&d, f.as_ref(), a.as_ref());
    match out {
        Some(dir) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("render");
            Ok(json!({ "files": write_svgs(dir, stem, &svgs)? }))
        }
        None => {
            for s in &svgs {
                emit(s);
            }
            Ok(Value::Null)
        }
    }
}

fn default_companion() -> Result<BennequinSurface, Failure> {
    let (dn, f) = builtin_front("disk_unknot").map_err(pre)?;
    let d = builtin_diagram(&dn).map_err(pre)?;
    quasipositive_annulus(&f, &d).map_err(pre)
}

fn companion(path: Option<&Path>) -> Result<CompanionSummary, Failure> {
    let s = match path {
        Some(p) => load_surface(p)?,
        None => default_companion()?,
    };
    Ok(CompanionSummary::from_surface(&s))
}

fn parse_bands(text: &str) -> Result<Vec<(usize, usize, i8)>, Failure> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = tok.split(':').collect();
        let bad = || Failure::Parse(format!("--bands: bad band `{tok}`"));
        let (i, j, sign) = match parts.as_slice() {
            [i, j] => (i, j, 1),
            [i, j, "-"] => (i, j, -1),
            [i, j, "+"] => (i, j, 1),
            _ => return Err(bad()),
        };
        out.push((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?, sign));
    }
    Ok(out)
}

fn satellite_error(e: SatelliteError) -> Failure {
    pre(e)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { path } => validate(&path),
        Command::Pipeline { front, epsilon, out, svg } => pipeline(&front, &epsilon, &out, svg),
        Command::Render { path, out } => render(&path, out.as_deref()),
        Command::Satellite { strands, bands, companion: c } => {
            let pattern = PatternBraid::from_generators(strands, &parse_bands(&bands)?).map_err(satellite_error)?;
            let c = companion(c.as_deref())?;
            let s = satellite(&pattern, &c).map_err(satellite_error)?;
            Ok(summary_json(&s))
        }
        Command::Cable { p, q, companion: c } => {
            let c = companion(c.as_deref())?;
            let s = cable(p, q, &c).map_err(satellite_error)?;
            let mut v = summary_json(&s);
            v["p"] = json!(p);
            v["q"] = json!(q);
            Ok(v)
        }
        Command::Stabilize { path, times, inverse, out } => {
            let mut s = load_surface(&path)?;
            for _ in 0..times {
                s = if inverse { destabilize(&s).map_err(pre)? } else { positive_markov_stabilization(&s) };
            }
            let text = io::write_bsurf(&s);
            match out {
                Some(p) => {
                    write(&p, &text)?;
                    Ok(json!({ "file": p.display().to_string(), "invariants": s.report() }))
                }
                None => {
                    emit(&text);
                    Ok(Value::Null)
                }
            }
        }
        Command::Invariants { path } => Ok(serde_json::to_value(load_surface(&path)?.report()).unwrap()),
        Command::Gen { diagram, seed, size, out } => {
            let d = builtin_diagram(&diagram).map_err(pre)?;
            let f = random_graph_front(seed, size, &d).map_err(pre)?;
            let text = io::write_front(&diagram, &f);
            match out {
                Some(p) => {
                    write(&p, &text)?;
                    Ok(json!({ "file": p.display().to_string(), "strands": f.strands.len() }))
                }
                None => {
                    emit(&text);
                    Ok(Value::Null)
                }
            }
        }
    }
}

fn summary_json(s: &openbook_ribbons::SurfaceSummary) -> Value {
    json!({
        "euler_char": s.euler_char,
        "boundary_components": s.boundary_components,
        "sqp": s.sqp,
        "slack": s.slack,
        "d": s.surface.as_ref().map(|x| x.disks.len()),
        "bands": s.surface.as_ref().map(|x| x.bands.len()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            if !v.is_null() {
                emit(&format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
            }
            status(true, "done");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Invalid(v) => {
                    emit(&format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
                    status(false, "validation failed");
                }
                Failure::Parse(m) => status(false, &format!("parse error: {m}")),
                Failure::Precondition(m) => status(false, &m),
            }
            ExitCode::from(code)
        }
    }
}
