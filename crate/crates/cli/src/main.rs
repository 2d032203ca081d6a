use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shtop_core::collapse::CollapseEngine;
use shtop_core::complex::write_scx;
use shtop_core::nerve::{embed_square_nerve, nerve};
use shtop_core::poset::{barycentric_complex, barycentric_poset, face_poset, order_complex, poset_core, write_fsp};
use shtop_core::report::{analyze, compare, parse_object, AnalysisOptions, Certificate, ObjectId};
use shtop_core::strong::core;
use shtop_core::symmetry::{conjecture_audit, multiple};
use shtop_core::workbench::{align_labels, verify_trace, verify_trace_exact, GenMode, Generator, GeneratorConfig, Object};
use shtop_core::{MoveTrace, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "shtop", version, about = "Strong homotopy, nerves, finite spaces and collapse levels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also compute symmetry findings and subdivision certificates.
    #[arg(long, global = true)]
    deep: bool,
    /// Node budget for each search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for written objects and traces.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complex,
    Poset,
    /// Vertex-homogeneous complexes.
    Vh,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Uniform,
    Domination,
    Beat,
}

#[derive(Subcommand)]
enum Command {
    /// Report on a `.scx` complex or `.fsp` poset.
    Analyze { path: PathBuf },
    /// Compare the strong homotopy types of two complexes.
    Compare { a: PathBuf, b: PathBuf },
    /// Apply core, nerve, nerve2, barycentric, face-poset, order-complex or multiple:<n>.
    Transform { path: PathBuf, op: String },
    /// Replay a `.trc` trace; exit 1 when it is invalid.
    Verify { start: PathBuf, trace: PathBuf, end: PathBuf },
    /// Core and non-evasiveness of vertex-homogeneous complexes, from files
    /// or, without paths, from the generator.
    ConjectureAudit {
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
    },
    /// Write random objects.
    Gen {
        #[arg(long, value_enum, default_value_t = Kind::Complex)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Core { path: String, source: shtop_core::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source: shtop_core::Error::SearchBudgetExceeded { .. }, .. } => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn core_err(path: &Path) -> impl Fn(shtop_core::Error) -> CliError + '_ {
    move |source| CliError::Core { path: path.display().to_string(), source }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> CliResult<(Object, String)> {
    let text = read(path)?;
    let object = parse_object(&path.display().to_string(), &text).map_err(core_err(path))?;
    Ok((object, text))
}

fn render(object: &Object) -> (String, &'static str) {
    match object {
        Object::Complex(k) => (write_scx(k), "scx"),
        Object::Poset(x) => (write_fsp(x), "fsp"),
    }
}

fn names(object: &Object) -> impl Fn(u32) -> String + '_ {
    move |id| match object {
        Object::Complex(k) => k.label(id),
        Object::Poset(x) => x.label(id),
    }
}

fn resolve(object: &Object, token: &str) -> Option<u32> {
    match object {
        Object::Complex(k) => k.vertex_by_label(token).filter(|&v| k.contains_vertex(v)),
        Object::Poset(x) => x.element_by_label(token).filter(|&e| x.contains(e)),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

fn out_dir(cli: &Cli) -> CliResult<PathBuf> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    Ok(dir)
}

/// Writes `<base>.trc`, `<base>.start.*` and `<base>.end.*`; returns the trace path.
fn write_certificate(dir: &Path, base: &str, c: &Certificate) -> CliResult<String> {
    let verdict = verify_trace_exact(&c.start, &c.trace, &c.end);
    assert!(verdict.valid, "certificate `{}` does not verify: {:?}", c.name, verdict);
    let (start, ext) = render(&c.start);
    let (end, _) = render(&c.end);
    write(&dir.join(format!("{base}.start.{ext}")), &start)?;
    write(&dir.join(format!("{base}.end.{ext}")), &end)?;
    let trc = dir.join(format!("{base}.trc"));
    write(&trc, &c.trace.to_trc(names(&c.start)))?;
    Ok(trc.display().to_string())
}

fn emit(value: &Value, format: Format) {
    let mut out = String::new();
    render_value(value, format, &mut out);
    // A closed pipe (`shtop ... | head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn render_value(value: &Value, format: Format, out: &mut String) {
    match (format, value) {
        (Format::Json, v) => {
            out.push_str(&serde_json::to_string_pretty(v).unwrap());
            out.push('\n');
        }
        (Format::Text, Value::Object(map)) => {
            for (k, v) in map {
                match v {
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        (Format::Text, Value::Array(items)) => {
            for item in items {
                render_value(item, format, out);
                out.push('\n');
            }
        }
        (Format::Text, other) => out.push_str(&format!("{other}\n")),
    }
}

fn cmd_analyze(cli: &Cli, path: &Path) -> CliResult<u8> {
    let (object, text) = load(path)?;
    let opts = AnalysisOptions { deep: cli.deep, budget: cli.budget };
    let id = ObjectId::new(&path.display().to_string(), text.as_bytes());
    let mut analysis = analyze(&object, id, &opts).map_err(core_err(path))?;
    if cli.out.is_some() {
        let dir = out_dir(cli)?;
        let base = stem(path);
        for c in &analysis.certificates {
            let trc = write_certificate(&dir, &format!("{base}.{}", c.name), c)?;
            analysis.report.traces.push(trc);
        }
    }
    let report = &analysis.report;
    if let Err(e) = report.check_consistency() {
        panic!("inconsistent report: {e}");
    }
    emit(&serde_json::to_value(report).unwrap(), cli.format);
    Ok(if report.budget_exhausted { 3 } else { 0 })
}

fn cmd_compare(cli: &Cli, a: &Path, b: &Path) -> CliResult<u8> {
    let complex = |path: &Path| -> CliResult<_> {
        match load(path)?.0 {
            Object::Complex(k) => Ok(k),
            Object::Poset(_) => Err(core_err(path)(shtop_core::Error::KindMismatch("poset".into()))),
        }
    };
    let (ka, kb) = (complex(a)?, complex(b)?);
    let verdict = compare(&ka, &kb).map_err(core_err(a))?;
    emit(&serde_json::to_value(verdict).unwrap(), cli.format);
    Ok(0)
}

fn cmd_transform(cli: &Cli, path: &Path, op: &str) -> CliResult<u8> {
    let (object, _) = load(path)?;
    let mismatch = |kind: &str| core_err(path)(shtop_core::Error::KindMismatch(kind.into()));
    let mut certificate = None;
    let result = match (op, &object) {
        ("core", Object::Complex(k)) => {
            let (c, trace) = core(k);
            certificate = Some(Certificate { name: "core", start: object.clone(), trace, end: Object::Complex(c.clone()) });
            Object::Complex(c)
        }
        ("core", Object::Poset(x)) => {
            let (c, trace) = poset_core(x);
            certificate = Some(Certificate { name: "core", start: object.clone(), trace, end: Object::Poset(c.clone()) });
            Object::Poset(c)
        }
        ("nerve", Object::Complex(k)) => Object::Complex(nerve(k)),
        ("nerve2", Object::Complex(k)) => {
            let e = embed_square_nerve(k).map_err(core_err(path))?;
            let image = Object::Complex(e.image);
            certificate = Some(Certificate { name: "nerve2", start: object.clone(), trace: e.trace, end: image.clone() });
            image
        }
        ("barycentric", Object::Complex(k)) => Object::Complex(barycentric_complex(k)),
        ("barycentric", Object::Poset(x)) => Object::Poset(barycentric_poset(x)),
        ("face-poset", Object::Complex(k)) => Object::Poset(face_poset(k).poset),
        ("order-complex", Object::Poset(x)) => Object::Complex(order_complex(x)),
        (op, Object::Complex(k)) if op.starts_with("multiple:") => {
            let n: u32 = op["multiple:".len()..]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad multiplicity in `{op}`")))?;
            Object::Complex(multiple(k, n).map_err(core_err(path))?)
        }
        ("nerve" | "nerve2" | "face-poset" | "order-complex", o) => return Err(mismatch(o.kind())),
        (op, Object::Poset(_)) if op.starts_with("multiple:") => return Err(mismatch("poset")),
        (op, _) => return Err(CliError::Usage(format!("unknown transform `{op}`"))),
    };
    let dir = out_dir(cli)?;
    let base = format!("{}.{}", stem(path), op.replace(':', "_"));
    let (text, ext) = render(&result);
    let file = dir.join(format!("{base}.{ext}"));
    write(&file, &text)?;
    let mut summary = json!({ "op": op, "output": file.display().to_string() });
    if let Some(c) = certificate {
        summary["trace"] = Value::String(write_certificate(&dir, &base, &c)?);
    }
    emit(&summary, cli.format);
    Ok(0)
}

fn cmd_verify(cli: &Cli, start: &Path, trace: &Path, end: &Path) -> CliResult<u8> {
    let (s, _) = load(start)?;
    let (e, _) = load(end)?;
    let moves = MoveTrace::parse_trc(&read(trace)?, |t| resolve(&s, t)).map_err(core_err(trace))?;
    let verdict = match align_labels(&e, &s) {
        Some(aligned) => verify_trace_exact(&s, &moves, &aligned),
        None => verify_trace(&s, &moves, &e),
    };
    emit(&serde_json::to_value(&verdict).unwrap(), cli.format);
    Ok(if verdict.valid { 0 } else { 1 })
}

fn cmd_audit(cli: &Cli, paths: &[PathBuf], count: usize, max_vertices: usize) -> CliResult<u8> {
    let mut engine = CollapseEngine::new(cli.budget);
    let mut rows = Vec::new();
    if paths.is_empty() {
        let mut g = Generator::new(GeneratorConfig::new(cli.seed, max_vertices, GenMode::UniformFacets));
        for i in 0..count {
            let k = g.vertex_homogeneous();
            let audit = conjecture_audit(&k, &mut engine).map_err(|source| CliError::Core { path: format!("generated #{i}"), source })?;
            rows.push(json!({ "source": format!("generated #{i}"), "facets": write_scx(&k), "audit": audit }));
        }
    } else {
        for path in paths {
            let Object::Complex(k) = load(path)?.0 else {
                return Err(core_err(path)(shtop_core::Error::KindMismatch("poset".into())));
            };
            let audit = conjecture_audit(&k, &mut engine).map_err(core_err(path))?;
            rows.push(json!({ "source": path.display().to_string(), "audit": audit }));
        }
    }
    emit(&Value::Array(rows), cli.format);
    Ok(0)
}

fn cmd_gen(cli: &Cli, kind: Kind, mode: Mode, count: usize, max_vertices: usize) -> CliResult<u8> {
    let mode = match mode {
        Mode::Uniform => GenMode::UniformFacets,
        Mode::Domination => GenMode::GrownByDomination,
        Mode::Beat => GenMode::GrownByBeatPoints,
    };
    let mut g = Generator::new(GeneratorConfig::new(cli.seed, max_vertices, mode));
    let mut written = Vec::new();
    for i in 0..count {
        let object = match kind {
            Kind::Complex => Object::Complex(g.complex()),
            Kind::Poset => Object::Poset(g.poset()),
            Kind::Vh => Object::Complex(g.vertex_homogeneous()),
        };
        let (text, ext) = render(&object);
        match &cli.out {
            Some(_) => {
                let file = out_dir(cli)?.join(format!("gen_{}_{i}.{ext}", cli.seed));
                write(&file, &text)?;
                written.push(file.display().to_string());
            }
            None => {
                let _ = write!(std::io::stdout().lock(), "# {ext} {i}\n{text}");
            }
        }
    }
    if !written.is_empty() {
        emit(&json!(written), cli.format);
    }
    Ok(0)
}

fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(cli, path),
        Command::Compare { a, b } => cmd_compare(cli, a, b),
        Command::Transform { path, op } => cmd_transform(cli, path, op),
        Command::Verify { start, trace, end } => cmd_verify(cli, start, trace, end),
        Command::ConjectureAudit { paths, count, max_vertices } => cmd_audit(cli, paths, *count, *max_vertices),
        Command::Gen { kind, mode, count, max_vertices } => cmd_gen(cli, *kind, *mode, *count, *max_vertices),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("shtop: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
