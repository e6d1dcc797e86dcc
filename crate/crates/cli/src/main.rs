use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use posat::hasse::{cover_edges, hasse_dot};
use posat::saturation::{upper_bound_catalog, Evidence};
use posat::search::{SearchManifest, SearchStatus, TOOL_VERSION};
use posat::structure::{decompose, verify_invariants, CheckStatus};
use posat::{
    classify_minimum, is_saturated, q3_probe, sat_star_exact, sat_star_no_extremes, CheckMode,
    PatternPoset, SearchOptions, SetFamily,
};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "posat", version, about = "Induced poset saturation toolkit")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a family is free / saturated for a pattern.
    Check(CheckArgs),
    /// Decompose a diamond-saturated family and verify its structural checks.
    Analyze(AnalyzeArgs),
    /// Exact minimum saturated family size.
    Satstar(SearchArgs),
    /// All minimum saturated families up to relabeling, tagged.
    Classify(SearchArgs),
    /// Minimum saturated family avoiding the empty and full sets.
    Noextremes(SearchArgs),
    /// Check the 3n-2 construction for Q3 and compare it with the exact minimum.
    Q3probe(ProbeArgs),
    /// Hasse diagram of a family as DOT.
    Hasse(HasseArgs),
    /// Known saturated constructions, each verified.
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
struct PatternArgs {
    /// Named pattern: chain:k, diamond, qk:k, v, lambda, antichain:k.
    #[arg(long, default_value = "diamond")]
    pattern: String,
    /// Pattern in the matrix text format; overrides --pattern.
    #[arg(long)]
    pattern_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Spot,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    family: PathBuf,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Missing sets sampled in spot mode.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record a copy through every missing set (full mode).
    #[arg(long)]
    certificate: bool,
    /// Reject files whose sets are out of canonical order.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    family: PathBuf,
    /// Emit the Hasse diagram with member classes instead of the report.
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    pattern: PatternArgs,
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args, Debug)]
struct HasseArgs {
    #[arg(long)]
    family: PathBuf,
    /// Colour members by decomposition class (diamond-saturated input).
    #[arg(long)]
    classes: bool,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    pattern: PatternArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<posat::Error> for Failure {
    fn from(e: posat::Error) -> Self {
        use posat::Error as E;
        let code = match e {
            E::Parse { .. }
            | E::DuplicateSet { .. }
            | E::ElementOutOfRange { .. }
            | E::InvalidPoset(_)
            | E::EmptyInput => EX_DATAERR,
            E::Internal(_) => EX_SOFTWARE,
            _ => EX_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EX_NOINPUT, format!("cannot read {}: {e}", path.display())))
}

fn load_family(path: &Path, strict: bool) -> Result<SetFamily, Failure> {
    let text = read_input(path)?;
    let parsed = posat::family::parse_family_with(&text, strict)
        .map_err(|e| Failure::new(EX_DATAERR, format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.family)
}

fn load_pattern(args: &PatternArgs) -> Result<(PatternPoset, String), Failure> {
    match &args.pattern_file {
        Some(path) => {
            let text = read_input(path)?;
            let p = PatternPoset::parse_text(&text)
                .map_err(|e| Failure::new(EX_DATAERR, format!("{}: {e}", path.display())))?;
            let id = p.keyword();
            Ok((p, id))
        }
        None => {
            let p = PatternPoset::from_keyword(&args.pattern)?;
            Ok((p, args.pattern.clone()))
        }
    }
}

fn pattern_echo(args: &PatternArgs) -> Value {
    json!({
        "pattern": args.pattern,
        "pattern_file": args.pattern_file.as_ref().map(|p| p.display().to_string()),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_out = cli.json;
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::new(EX_SOFTWARE, format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match outcome {
        Ok(report) => {
            if json_out {
                let body = json!({
                    "tool_version": TOOL_VERSION,
                    "command": command_name(&cli.command),
                    "config": config_echo(&cli.command),
                    "result": report.json,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&body).expect("report serializes")
                );
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check(_) => "check",
        Command::Analyze(_) => "analyze",
        Command::Satstar(_) => "satstar",
        Command::Classify(_) => "classify",
        Command::Noextremes(_) => "noextremes",
        Command::Q3probe(_) => "q3probe",
        Command::Hasse(_) => "hasse",
        Command::Catalog(_) => "catalog",
    }
}

/// Echo of the options that determine the output. The thread count is
/// left out so reports compare byte for byte across it.
fn config_echo(c: &Command) -> Value {
    let mut v = match c {
        Command::Check(a) => json!({
            "family": a.family.display().to_string(),
            "mode": match a.mode { ModeArg::Full => "full", ModeArg::Spot => "spot" },
            "samples": a.samples,
            "certificate": a.certificate,
            "strict": a.strict,
        }),
        Command::Analyze(a) => json!({ "family": a.family.display().to_string(), "dot": a.dot }),
        Command::Satstar(a) | Command::Classify(a) | Command::Noextremes(a) => json!({
            "n": a.n,
            "size_cap": a.size_cap,
            "symmetry": !a.no_symmetry,
        }),
        Command::Q3probe(a) => json!({
            "n": a.n,
            "size_cap": a.size_cap,
            "symmetry": !a.no_symmetry,
        }),
        Command::Hasse(a) => {
            json!({ "family": a.family.display().to_string(), "classes": a.classes })
        }
        Command::Catalog(a) => json!({ "n": a.n }),
    };
    let obj = v.as_object_mut().expect("object");
    let pattern = match c {
        Command::Check(a) => Some(&a.pattern),
        Command::Satstar(a) | Command::Classify(a) | Command::Noextremes(a) => Some(&a.pattern),
        Command::Catalog(a) => Some(&a.pattern),
        _ => None,
    };
    if let Some(p) = pattern {
        if let Value::Object(extra) = pattern_echo(p) {
            obj.extend(extra);
        }
    }
    let seed = match c {
        Command::Check(a) => Some(a.seed),
        _ => None,
    };
    obj.insert("seed".into(), json!(seed));
    v
}

fn dispatch(c: &Command) -> Result<Report, Failure> {
    match c {
        Command::Check(a) => check(a),
        Command::Analyze(a) => analyze(a),
        Command::Satstar(a) => {
            let (p, _) = load_pattern(&a.pattern)?;
            let m = sat_star_exact(a.n, &p, search_options(a.size_cap, a.no_symmetry))?;
            Ok(manifest_report(m, false))
        }
        Command::Classify(a) => {
            let (p, _) = load_pattern(&a.pattern)?;
            let m = classify_minimum(a.n, &p, search_options(a.size_cap, a.no_symmetry))?;
            Ok(manifest_report(m, true))
        }
        Command::Noextremes(a) => {
            let (p, _) = load_pattern(&a.pattern)?;
            let m = sat_star_no_extremes(a.n, &p, search_options(a.size_cap, a.no_symmetry))?;
            Ok(manifest_report(m, false))
        }
        Command::Q3probe(a) => q3(a),
        Command::Hasse(a) => hasse(a),
        Command::Catalog(a) => catalog(a),
    }
}

fn search_options(size_cap: Option<usize>, no_symmetry: bool) -> SearchOptions {
    SearchOptions {
        symmetry: !no_symmetry,
        size_cap,
    }
}

fn check(a: &CheckArgs) -> Result<Report, Failure> {
    let f = load_family(&a.family, a.strict)?;
    let (p, id) = load_pattern(&a.pattern)?;
    let mode = match a.mode {
        ModeArg::Full => CheckMode::Full {
            certificate: a.certificate,
        },
        ModeArg::Spot => CheckMode::Spot {
            samples: a.samples,
            seed: a.seed,
        },
    };
    let report = is_saturated(&f, &p, mode)?;
    let verdict = serde_json::to_value(report.verdict).expect("verdict serializes");
    let mut text = format!("{}\n", verdict.as_str().unwrap_or_default());
    if !report.exhaustive {
        writeln!(
            text,
            "spot check: {} of {} missing sets tested",
            report.missing_checked, report.missing_total
        )
        .expect("writing to a String");
    }
    match &report.evidence {
        Evidence::Copy(e) => {
            let images: Vec<String> = e.images().iter().map(|s| s.to_string()).collect();
            writeln!(text, "copy: {}", images.join(" ")).expect("writing to a String");
        }
        Evidence::Completable(s) => {
            writeln!(text, "completable by: {s}").expect("writing to a String")
        }
        Evidence::Certificate(_) => {}
    }
    Ok(Report {
        text,
        json: report.to_json(&id),
        code: report.verdict.exit_code() as u8,
    })
}

fn analyze(a: &AnalyzeArgs) -> Result<Report, Failure> {
    let f = load_family(&a.family, false)?;
    let report = verify_invariants(&f);
    if a.dot {
        let dot = hasse_dot(&f, report.decomposition.as_ref())?;
        return Ok(Report {
            text: dot.clone(),
            json: json!({ "dot": dot }),
            code: 0,
        });
    }
    let mut text = String::new();
    if let Some(reason) = &report.vacuous {
        writeln!(text, "vacuous: {reason}").expect("writing to a String");
    }
    for c in &report.checks {
        let status = match &c.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail { evidence } => format!("FAIL {evidence}"),
            CheckStatus::NotApplicable { reason } => format!("n/a ({reason})"),
        };
        writeln!(text, "{}: {status}", c.id).expect("writing to a String");
    }
    let code = if report.has_failure() { EX_SOFTWARE } else { 0 };
    Ok(Report {
        text,
        json: report.to_json(),
        code,
    })
}

fn manifest_report(m: SearchManifest, tagged: bool) -> Report {
    let mut text = match m.status {
        SearchStatus::Exact => format!("{}\n", m.value.expect("exact status has a value")),
        SearchStatus::LowerBound => {
            format!(">= {} (size cap {} reached)\n", m.lower_bound, m.size_cap)
        }
        SearchStatus::Infeasible => "infeasible\n".to_string(),
    };
    let families = m.families();
    if tagged {
        let tags = m.result_tags.clone().unwrap_or_default();
        for (f, t) in families.iter().zip(tags) {
            let names: Vec<String> = t
                .iter()
                .map(|t| {
                    serde_json::to_value(t)
                        .expect("tag serializes")
                        .as_str()
                        .unwrap_or_default()
                        .to_string()
                })
                .collect();
            writeln!(text, "# {}", names.join(" ")).expect("writing to a String");
            text.push_str(&f.to_text());
        }
    } else if let Some(w) = families.first() {
        text.push_str(&w.to_text());
    }
    Report {
        text,
        json: m.to_json(),
        code: 0,
    }
}

fn q3(a: &ProbeArgs) -> Result<Report, Failure> {
    let probe = q3_probe(a.n, search_options(a.size_cap, a.no_symmetry))?;
    let verdict = serde_json::to_value(probe.verdict).expect("verdict serializes");
    let mut text = format!(
        "size {} (3n-2 = {}) {}\n",
        probe.size,
        probe.expected_size,
        verdict.as_str().unwrap_or_default()
    );
    if let Some(m) = &probe.exact {
        match m.value {
            Some(v) => writeln!(text, "exact minimum: {v}"),
            None => writeln!(text, "exact minimum: >= {}", m.lower_bound),
        }
        .expect("writing to a String");
    }
    let family = SetFamily::from_json(&probe.family)?;
    text.push_str(&family.to_text());
    let json = serde_json::to_value(&probe).expect("probe serializes");
    Ok(Report {
        text,
        json,
        code: 0,
    })
}

fn hasse(a: &HasseArgs) -> Result<Report, Failure> {
    let f = load_family(&a.family, false)?;
    let decomposition = if a.classes {
        Some(decompose(&f)?)
    } else {
        None
    };
    let dot = hasse_dot(&f, decomposition.as_ref())?;
    let edges: Vec<[usize; 2]> = cover_edges(&f).into_iter().map(|(i, j)| [i, j]).collect();
    let json = json!({ "nodes": f.len(), "edges": edges, "dot": dot });
    Ok(Report {
        text: dot,
        json,
        code: 0,
    })
}

fn catalog(a: &CatalogArgs) -> Result<Report, Failure> {
    let (p, _) = load_pattern(&a.pattern)?;
    let c = upper_bound_catalog(a.n, &p)?;
    let mut text = String::new();
    for e in &c.entries {
        writeln!(text, "# {} ({} sets)", e.name, e.family.len()).expect("writing to a String");
        text.push_str(&e.family.to_text());
    }
    for (name, why) in &c.rejected {
        writeln!(text, "# rejected {name}: {why}").expect("writing to a String");
    }
    let json = json!({
        "entries": c.entries.iter().map(|e| json!({
            "name": e.name,
            "size": e.family.len(),
            "family": e.family.to_json(),
        })).collect::<Vec<_>>(),
        "rejected": c.rejected.iter().map(|(name, why)| json!({ "name": name, "reason": why })).collect::<Vec<_>>(),
    });
    Ok(Report {
        text,
        json,
        code: 0,
    })
}
