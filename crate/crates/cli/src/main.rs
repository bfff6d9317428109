use std::collections::{BTreeMap, HashMap};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tensorcat::action::{
    check_compatibility_with_cap, conjugation_pair, AutAction, CompatiblePair,
};
use tensorcat::catalog::{build_with_cap, corpus_groups, GroupSpec, MAX_CORPUS_ORDER};
use tensorcat::error::Error;
use tensorcat::group::FiniteGroup;
use tensorcat::tensor::{
    derivative_subgroup, exterior_square, m0_and_bogomolov, tensor_product, Caps, Factor,
};
use tensorcat::verify::{self, SuiteReport, REPORT_ONLY_SUITES, SUITES};

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tensorcat",
    version,
    about = "Non-abelian tensor squares, multipliers and B0 of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest group order: the catalog cap, or the corpus bound for `verify`.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    #[arg(long, global = true)]
    max_cosets: Option<usize>,
    /// Time budget per computation (per instance for `verify`).
    #[arg(long, global = true)]
    timeout_secs: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled associativity checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include runtimes in the output (JSON is then no longer byte-stable).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Order, nilpotency class, solvability and the abelianization of a group.
    Info { spec: String },
    /// The tensor product of a compatible pair; `G` alone means `G (x) G` under conjugation.
    Tensor {
        g: String,
        h: Option<String>,
        /// How `G` acts on `H`: trivial, conjugation, inversion, or a file of `act g h -> h'` lines.
        #[arg(long)]
        alpha: Option<String>,
        /// How `H` acts on `G`, in the same forms.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Tensor and exterior squares, J, nabla, the Schur multiplier, M0 and B0.
    Square { spec: String },
    /// Run property suites over the standard corpus or a corpus file.
    Verify {
        /// Suite to run; repeat for several. Defaults to every suite.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Specs as a JSON array, or one inline or JSON spec per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else {
            match e {
                Error::Parse { .. }
                | Error::InvalidSpec(_)
                | Error::InvalidInput(_)
                | Error::InvalidAction(_)
                | Error::NotACocycle(_)
                | Error::UnknownSuite(_) => EXIT_USAGE,
                _ => EXIT_ASSERTION,
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn caps_from(cli: &Cli) -> Result<Caps, Failure> {
    let mut caps = match std::env::var("TENSORCAT_CAPS") {
        Ok(text) => serde_json::from_str::<Caps>(&text)
            .map_err(|e| usage(format!("TENSORCAT_CAPS: {e}")))?,
        Err(_) => Caps::default(),
    };
    if let Some(n) = cli.max_order {
        if !matches!(cli.command, Command::Verify { .. }) {
            caps.max_group_order = n;
        }
    }
    if let Some(n) = cli.max_cosets {
        caps.max_cosets = n;
    }
    if let Some(t) = cli.timeout_secs {
        caps.max_time_secs = t;
    }
    if let Some(s) = cli.seed {
        caps.seed = s;
    }
    // Going over a hard limit is a configuration mistake, not a budget overrun.
    caps.validate().map_err(|e| usage(e.to_string()))?;
    Ok(caps)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let caps = caps_from(cli)?;
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match &cli.command {
        Command::Info { spec } => emit(cli, info(&group(spec, &caps)?)),
        Command::Tensor { g, h, alpha, beta } => {
            let caps = caps.started();
            let report = tensor(g, h.as_deref(), alpha.as_deref(), beta.as_deref(), &caps)?;
            emit(cli, report)
        }
        Command::Square { spec } => {
            let caps = caps.started();
            emit(cli, square(&group(spec, &caps)?, &caps)?)
        }
        Command::Verify { suites, corpus } => {
            run_verify(cli, suites, corpus.as_deref(), &caps, threads)
        }
    }
}

fn group(text: &str, caps: &Caps) -> Result<FiniteGroup, Failure> {
    Ok(build_with_cap(
        &GroupSpec::parse(text)?,
        caps.max_group_order,
    )?)
}

fn emit(cli: &Cli, report: BTreeMap<String, Value>) -> Result<u8, Failure> {
    let mut out = std::io::stdout().lock();
    match cli.format {
        Format::Json => {
            let _ = writeln!(out, "{}", Value::Object(report.into_iter().collect()));
        }
        Format::Text => {
            for (k, v) in report {
                let _ = writeln!(out, "{k}: {}", text_value(&v));
            }
        }
    }
    Ok(0)
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn info(g: &FiniteGroup) -> BTreeMap<String, Value> {
    let mut r = BTreeMap::new();
    r.insert("order".into(), json!(g.order()));
    r.insert("class".into(), json!(g.nilpotency_class()));
    r.insert("abelian".into(), json!(g.is_abelian()));
    r.insert("solvable".into(), json!(g.is_solvable()));
    r.insert("supersolvable".into(), json!(g.is_supersolvable()));
    r.insert("derived_length".into(), json!(g.derived_length()));
    r.insert(
        "abelianization".into(),
        json!(g.abelianization_invariants().ok()),
    );
    r
}

fn tensor(
    g_text: &str,
    h_text: Option<&str>,
    alpha: Option<&str>,
    beta: Option<&str>,
    caps: &Caps,
) -> Result<BTreeMap<String, Value>, Failure> {
    let g = group(g_text, caps)?;
    let pair = match h_text {
        None if alpha.is_none() && beta.is_none() => conjugation_pair(&g),
        _ => {
            let h = match h_text {
                Some(t) => group(t, caps)?,
                None => g.clone(),
            };
            let a = action(alpha.unwrap_or("trivial"), &g, &h)?;
            let b = action(beta.unwrap_or("trivial"), &h, &g)?;
            compatible(&g, &h, a, b, caps)?
        }
    };
    let t = tensor_product(&pair, caps)?;
    let mut r = BTreeMap::new();
    r.insert("order".into(), json!(t.order()));
    r.insert(
        "derivative_g".into(),
        json!(derivative_subgroup(&pair, Factor::G).order()),
    );
    r.insert(
        "derivative_h".into(),
        json!(derivative_subgroup(&pair, Factor::H).order()),
    );
    r.insert("kernel_phi".into(), json!(t.kernel_invariants()?));
    r.insert("kernel_central".into(), json!(t.kernel_is_central()));
    Ok(r)
}

fn compatible(
    g: &FiniteGroup,
    h: &FiniteGroup,
    alpha: AutAction,
    beta: AutAction,
    caps: &Caps,
) -> Result<CompatiblePair, Failure> {
    let c = check_compatibility_with_cap(g, h, alpha, beta, caps.max_pair_order)?;
    let count = c.violations().len();
    let first = c.violations().first().map(|v| format!("{v:?}"));
    c.into_pair().ok_or_else(|| {
        usage(format!(
            "the actions are not compatible ({count} violations, first {})",
            first.unwrap_or_default()
        ))
    })
}

/// A named action or a file of `act x y -> z` lines; unlisted entries act trivially.
fn action(text: &str, actor: &FiniteGroup, space: &FiniteGroup) -> Result<AutAction, Failure> {
    match text {
        "trivial" => Ok(AutAction::trivial(actor, space)),
        "inversion" => Ok(AutAction::inversion(actor, space)?),
        "conjugation" => {
            if actor.table().is_none() || actor.table() != space.table() {
                return Err(usage("conjugation needs the same group on both sides"));
            }
            Ok(AutAction::conjugation(actor))
        }
        path => action_file(Path::new(path), actor, space),
    }
}

fn action_file(
    path: &Path,
    actor: &FiniteGroup,
    space: &FiniteGroup,
) -> Result<AutAction, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        usage(format!(
            "{}: not a named action and not readable: {e}",
            path.display()
        ))
    })?;
    // Elements are named by label or by index.
    let index = |g: &FiniteGroup| -> HashMap<String, u32> {
        g.elements()
            .flat_map(|x| [(g.label(x), x), (x.to_string(), x)])
            .collect()
    };
    let (actors, points) = (index(actor), index(space));
    let ns = space.order();
    let mut table: Vec<u32> = (0..actor.order()).flat_map(|_| 0..ns as u32).collect();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |column: usize, message: &str| {
            Failure::from(Error::Parse {
                line: i + 1,
                column,
                message: message.into(),
            })
        };
        let body = line
            .strip_prefix("act ")
            .ok_or_else(|| err(1, "expected `act g h -> h'`"))?;
        let (lhs, rhs) = body
            .split_once("->")
            .ok_or_else(|| err(5, "expected `->`"))?;
        let mut words = lhs.split_whitespace();
        let (Some(a), Some(x), None) = (words.next(), words.next(), words.next()) else {
            return Err(err(5, "expected an actor and a point before `->`"));
        };
        let column = line.find("->").unwrap_or(0) + 3;
        let a = *actors
            .get(a)
            .ok_or_else(|| err(5, &format!("unknown actor element `{a}`")))?;
        let x = *points
            .get(x)
            .ok_or_else(|| err(5, &format!("unknown element `{x}`")))?;
        let y = *points
            .get(rhs.trim())
            .ok_or_else(|| err(column, &format!("unknown element `{}`", rhs.trim())))?;
        table[a as usize * ns + x as usize] = y;
    }
    Ok(AutAction::new(actor, space, table)?)
}

fn square(g: &FiniteGroup, caps: &Caps) -> Result<BTreeMap<String, Value>, Failure> {
    let w = exterior_square(g, caps)?;
    let m = m0_and_bogomolov(g, caps)?;
    let mut r = BTreeMap::new();
    r.insert("tensor_square_order".into(), json!(w.square.order()));
    r.insert("exterior_square_order".into(), json!(w.wedge.order()));
    r.insert("j".into(), json!(m.j_invariants));
    r.insert("nabla".into(), json!(m.nabla_invariants));
    r.insert("schur_multiplier".into(), json!(m.schur));
    r.insert("m0_order".into(), json!(m.m0_order as u64));
    r.insert("bogomolov".into(), json!(m.bogomolov));
    r.insert("bogomolov_trivial".into(), json!(m.bogomolov.is_trivial()));
    Ok(r)
}

fn read_corpus(path: &Path) -> Result<Vec<GroupSpec>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| {
            Failure::from(Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        });
    }
    let mut specs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        specs.push(GroupSpec::parse(line).map_err(|e| match e {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line: i + 1,
                column,
                message,
            },
            other => other,
        })?);
    }
    Ok(specs)
}

fn run_verify(
    cli: &Cli,
    suites: &[String],
    corpus: Option<&Path>,
    caps: &Caps,
    threads: usize,
) -> Result<u8, Failure> {
    let names: Vec<String> = if suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(Error::UnknownSuite(bad.clone()).into());
    }
    let entries = match corpus {
        Some(path) => verify::build_corpus(&read_corpus(path)?, caps.max_group_order)?,
        None => {
            let max = cli.max_order.unwrap_or(16);
            if max > MAX_CORPUS_ORDER {
                return Err(usage(format!(
                    "--max-order is at most {MAX_CORPUS_ORDER} for the standard corpus"
                )));
            }
            corpus_groups(max)
        }
    };
    let entries: Vec<_> = match (corpus, cli.max_order) {
        (Some(_), Some(max)) => entries
            .into_iter()
            .filter(|(_, g)| g.order() <= max)
            .collect(),
        _ => entries,
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    let mut out = std::io::stdout().lock();
    for name in &names {
        let report = verify::run_suite_on(name, &entries, caps, threads)?;
        match cli.format {
            Format::Json => {
                let _ = out.write_all(report.json_lines(cli.timings).as_bytes());
                let summary = json!({ "suite": report.suite, "summary": report.summary });
                let _ = writeln!(out, "{summary}");
            }
            Format::Text => {
                for r in &report.records {
                    let _ = writeln!(
                        out,
                        "{:<24} {:<18} #{:<4} {}",
                        r.suite,
                        r.status.to_string(),
                        r.index,
                        short(&r.name())
                    );
                }
            }
        }
        reports.push(report);
    }
    if cli.format == Format::Text {
        let _ = writeln!(out);
        let _ = out.write_all(summary_text(&reports, cli.timings).as_bytes());
    }
    let failed = reports
        .iter()
        .any(|r| !REPORT_ONLY_SUITES.contains(&r.suite.as_str()) && !r.ok());
    Ok(if failed { EXIT_ASSERTION } else { 0 })
}

fn summary_text(reports: &[SuiteReport], timings: bool) -> String {
    let table = verify::summary_table(reports);
    if timings {
        return table;
    }
    // Without timings, drop the time column so the text is reproducible too.
    table
        .lines()
        .map(|l| {
            if l.starts_with("FAIL ") {
                l.to_string()
            } else {
                l.rsplit_once(' ')
                    .map_or(l, |(head, _)| head.trim_end())
                    .to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// Table rows stay one line; the JSON form carries the full spec.
fn short(name: &str) -> String {
    const WIDTH: usize = 72;
    if name.chars().count() <= WIDTH {
        name.to_string()
    } else {
        name.chars().take(WIDTH - 3).collect::<String>() + "..."
    }
}
