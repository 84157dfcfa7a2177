use std::collections::BTreeSet;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use eqdomain::enumerate::{self, CorpusError, SOFT_MAX_ORDER};
use eqdomain::geometry::{self, equality_set, Bitmap, PointSet, PointSpace};
use eqdomain::proof::{check_semigroup, ProofError, WitnessReport};
use eqdomain::terms::{ClosureError, System, TermFunctions};
use eqdomain::verify::{self, TableOutcome};
use eqdomain::{Equation, Mode, Semigroup};

#[derive(Parser, Debug)]
#[command(name = "eqdomain", version)]
#[command(about = "Algebraic sets over finite semigroups and an exhaustive equational-domain checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximum number of distinct term functions per closure
    #[arg(long, global = true, env = "EQDOMAIN_BUDGET", default_value_t = eqdomain::DEFAULT_BUDGET)]
    budget: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for batch runs (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Treat any invalid table in an input file as fatal
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check each table in a file and print its witness report
    Check { file: PathBuf },
    /// Check every semigroup of order 2..=N
    VerifyTheorem {
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value = "raw")]
        mode: Mode,
        /// Permit orders above 5
        #[arg(long)]
        allow_large: bool,
    },
    /// List every semigroup of order N
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "raw")]
        mode: Mode,
        #[arg(long)]
        allow_large: bool,
    },
    /// Algebraic closure of a point set
    Closure {
        file: PathBuf,
        /// m3, m4, or @FILE with a JSON point list or bitmap
        #[arg(long, conflicts_with = "equations")]
        set: Option<String>,
        /// File of equations whose solution set is the input set
        #[arg(long)]
        equations: Option<PathBuf>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// All term functions in k variables
    TermFunctions {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
    },
}

/// Exit codes: 2 bad input, 3 internal inconsistency, 4 budget exceeded.
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Inconsistent(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Inconsistent(_) => 3,
            Failure::Budget(_) => 4,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<ClosureError> for Failure {
    fn from(e: ClosureError) -> Self {
        match e {
            ClosureError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

impl From<ProofError> for Failure {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::Closure(c) => c.into(),
            other => Failure::Inconsistent(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Inconsistent(m) => eprintln!("inconsistency: {m}"),
                Failure::Budget(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    if cli.budget == 0 {
        return Err(anyhow!("--budget must be at least 1").into());
    }
    match &cli.command {
        Command::Check { file } => cmd_check(cli, file, out),
        Command::VerifyTheorem { max_order, mode, allow_large } => {
            check_order(*max_order, *allow_large, "--max-order")?;
            cmd_verify_theorem(cli, *max_order, *mode, out)
        }
        Command::Enumerate { order, mode, allow_large } => {
            check_order(*order, *allow_large, "--order")?;
            cmd_enumerate(cli, *order, *mode, out)
        }
        Command::Closure { file, set, equations, arity } => {
            cmd_closure(cli, file, set.as_deref(), equations.as_deref(), *arity, out)
        }
        Command::TermFunctions { file, arity } => cmd_term_functions(cli, file, *arity, out),
    }
}

fn check_order(order: usize, allow_large: bool, flag: &str) -> Result<(), Failure> {
    if order == 0 {
        return Err(anyhow!("{flag} must be at least 1").into());
    }
    if order > SOFT_MAX_ORDER && !allow_large {
        return Err(anyhow!("{flag} {order} exceeds {SOFT_MAX_ORDER}; pass --allow-large to proceed").into());
    }
    Ok(())
}

fn load_tables(path: &Path, strict: bool) -> Result<Vec<Semigroup>, Failure> {
    let (tables, rejected) = enumerate::read_corpus(path, strict).map_err(|e| match e {
        CorpusError::Io { .. } => Failure::Input(anyhow!(e)),
        other => Failure::Input(anyhow!("{}: {other}", path.display())),
    })?;
    for r in &rejected {
        eprintln!("warning: {}: skipped {r}", path.display());
    }
    if tables.is_empty() {
        if let Some(first) = rejected.into_iter().next() {
            return Err(anyhow!("{}: {first}", path.display()).into());
        }
    }
    Ok(tables)
}

fn load_one(path: &Path) -> Result<Semigroup, Failure> {
    load_tables(path, true)?
        .into_iter()
        .next()
        .ok_or_else(|| anyhow!("{}: no table found", path.display()).into())
}

fn write_json(out: &mut Out, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| anyhow!(e))?;
    writeln!(out)?;
    Ok(())
}

fn fmt_point(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn write_report_text(out: &mut Out, r: &WitnessReport) -> io::Result<()> {
    writeln!(out, "order {}: {}", r.order, r.classification)?;
    for row in &r.table {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "  {}", cells.join(" "))?;
    }
    if let Some(lemma) = r.lemma {
        let target = r.target.map(|t| t.name()).unwrap_or("-");
        writeln!(out, "lemma {lemma}, target {target}")?;
    }
    if !r.elements.is_empty() {
        let els: Vec<String> = r.elements.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        writeln!(out, "elements: {}", els.join(", "))?;
    }
    for id in &r.verified_identities {
        writeln!(out, "  [{}] {}", if id.holds { "ok" } else { "FAILED" }, id.name)?;
    }
    if !r.probe_points.inside.is_empty() || !r.probe_points.outside.is_empty() {
        let inside: Vec<String> = r.probe_points.inside.iter().map(|p| fmt_point(p)).collect();
        let outside: Vec<String> = r.probe_points.outside.iter().map(|p| fmt_point(p)).collect();
        writeln!(out, "probe points inside: {}; outside: {}", inside.join(" "), outside.join(" "))?;
    }
    if let Some(p) = &r.separating_point {
        writeln!(out, "separating point: {}", fmt_point(p))?;
    }
    writeln!(out, "equational domain: {}", r.is_equational_domain)
}

fn cmd_check(cli: &Cli, file: &Path, out: &mut Out) -> Result<(), Failure> {
    let tables = load_tables(file, cli.strict)?;
    if tables.is_empty() {
        return Err(anyhow!("{}: no table found", file.display()).into());
    }
    let mut inconsistent = Vec::new();
    for (i, s) in tables.iter().enumerate() {
        let report = check_semigroup(s, cli.budget)?;
        match cli.format {
            Format::Json => write_json(out, &report)?,
            Format::Text => {
                if i > 0 {
                    writeln!(out)?;
                }
                write_report_text(out, &report)?;
            }
        }
        if !report.is_consistent() {
            let failed: Vec<&str> = report.failed_identities().map(|f| f.name.as_str()).collect();
            inconsistent.push(format!("table {i}: failed [{}]", failed.join(", ")));
        }
    }
    if inconsistent.is_empty() {
        Ok(())
    } else {
        Err(Failure::Inconsistent(inconsistent.join("; ")))
    }
}

fn cmd_verify_theorem(cli: &Cli, max_order: usize, mode: Mode, out: &mut Out) -> Result<(), Failure> {
    let run = verify::verify_theorem(max_order, mode, cli.budget, cli.jobs);
    match cli.format {
        Format::Json => {
            for (_, outcomes) in &run.outcomes {
                for outcome in outcomes {
                    write_json(out, outcome)?;
                }
            }
            write_json(out, &json!({ "summary": run.summary }))?;
        }
        Format::Text => {
            for (order, outcomes) in &run.outcomes {
                for (i, outcome) in outcomes.iter().enumerate() {
                    if let TableOutcome::Error { error, .. } = outcome {
                        writeln!(out, "order {order} table {i}: {error}")?;
                    }
                }
            }
            let s = &run.summary;
            writeln!(out, "mode {}, orders 2..={}", s.mode, s.max_order)?;
            for o in &s.orders {
                let lemmas: Vec<String> = o.by_lemma.iter().map(|(l, c)| format!("{l}: {c}")).collect();
                writeln!(
                    out,
                    "order {}: {} tables, lemmas {{{}}}, equational domains {}, inconsistent {}, budget exceeded {}",
                    o.order,
                    o.tables,
                    lemmas.join(", "),
                    o.equational_domains,
                    o.inconsistent.len(),
                    o.budget_exceeded.len()
                )?;
            }
            if let Some(note) = &s.note {
                writeln!(out, "note: {note}")?;
            }
            writeln!(out, "tables checked: {}, success: {}", s.tables_checked, s.success)?;
        }
    }
    if run.summary.success {
        Ok(())
    } else {
        Err(Failure::Inconsistent("some nontrivial semigroup lacks a verified separating point".into()))
    }
}

fn cmd_enumerate(cli: &Cli, order: usize, mode: Mode, out: &mut Out) -> Result<(), Failure> {
    for (i, s) in enumerate::enumerate_tables(order, mode).enumerate() {
        match cli.format {
            Format::Json => write_json(out, &json!({ "order": order, "mode": mode, "table": s.rows() }))?,
            Format::Text => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{s}")?;
            }
        }
    }
    Ok(())
}

fn read_point_file(path: &Path, order: usize, arity: Option<usize>) -> Result<PointSet, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.is_object() {
        let bitmap: Bitmap = serde_json::from_value(value).context("point bitmap")?;
        if bitmap.order != order || arity.is_some_and(|k| k != bitmap.arity) {
            let expected = geometry::PointSetError::ShapeMismatch {
                order: bitmap.order,
                arity: bitmap.arity,
                expected_order: order,
                expected_arity: arity.unwrap_or(bitmap.arity),
            };
            return Err(anyhow!(expected).into());
        }
        return Ok(PointSet::from_bitmap(&bitmap).map_err(|e| anyhow!(e))?);
    }
    let points: Vec<Vec<usize>> = serde_json::from_value(value).context("expected a list of points")?;
    let arity = match (arity, points.first()) {
        (Some(k), _) => k,
        (None, Some(p)) => p.len(),
        (None, None) => bail_input("an empty point list needs --arity")?,
    };
    let space = PointSpace::new(order, arity)?;
    Ok(PointSet::from_points(space, &points).map_err(|e| anyhow!(e))?)
}

fn bail_input<T>(message: &str) -> Result<T, Failure> {
    Err(Failure::Input(anyhow!(message.to_string())))
}

#[derive(Serialize)]
struct ClosureReport {
    order: usize,
    arity: usize,
    set: String,
    input_size: usize,
    closure_size: usize,
    closure: Vec<Vec<usize>>,
    closure_bitmap: Bitmap,
    /// One equation per distinct proper solution set cutting out the closure.
    system: Vec<String>,
    algebraic: bool,
    separating_point: Option<Vec<usize>>,
}

fn cmd_closure(
    cli: &Cli,
    file: &Path,
    set: Option<&str>,
    equations: Option<&Path>,
    arity: Option<usize>,
    out: &mut Out,
) -> Result<(), Failure> {
    let s = load_one(file)?;
    let (label, input) = match (set, equations) {
        (Some("m3"), _) => {
            if arity.is_some_and(|k| k != 3) {
                bail_input("m3 has arity 3")?;
            }
            ("m3".to_string(), geometry::union_target_m3(&s)?)
        }
        (Some("m4"), _) => {
            if arity.is_some_and(|k| k != 4) {
                bail_input("m4 has arity 4")?;
            }
            ("m4".to_string(), geometry::union_target_m4(&s)?)
        }
        (Some(spec), _) => {
            let path = spec
                .strip_prefix('@')
                .ok_or_else(|| anyhow!("--set must be m3, m4 or @FILE, found {spec:?}"))?;
            ("points".to_string(), read_point_file(Path::new(path), s.order(), arity)?)
        }
        (None, Some(path)) => {
            let k = arity.ok_or_else(|| anyhow!("--equations needs --arity"))?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let system = System::parse(&text, k).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            ("equations".to_string(), geometry::system_solution_set(&s, &system)?)
        }
        (None, None) => bail_input("one of --set or --equations is required")?,
    };
    let verdict = geometry::is_algebraic(&s, &input, cli.budget)?;
    let cert = &verdict.certificate;
    let space = input.space();
    let full = PointSet::full(space);
    let mut seen = BTreeSet::new();
    let mut system = Vec::new();
    for &(a, b) in &cert.agreeing_pairs {
        let (fa, fb) = (&cert.functions.functions()[a], &cert.functions.functions()[b]);
        let eq_set = equality_set(space, &fa.values, &fb.values);
        if eq_set != full && seen.insert(eq_set.to_hex()) {
            system.push(Equation::new(fa.witness.clone(), fb.witness.clone()).to_string());
        }
    }
    let report = ClosureReport {
        order: s.order(),
        arity: space.arity(),
        set: label,
        input_size: input.len(),
        closure_size: cert.closure.len(),
        closure: cert.closure.points(),
        closure_bitmap: cert.closure.to_bitmap(),
        system,
        algebraic: verdict.algebraic,
        separating_point: verdict.separating_point.clone(),
    };
    match cli.format {
        Format::Json => write_json(out, &report)?,
        Format::Text => {
            writeln!(out, "set {} over order {}, arity {}", report.set, report.order, report.arity)?;
            writeln!(out, "input size {}, closure size {}", report.input_size, report.closure_size)?;
            let pts: Vec<String> = report.closure.iter().map(|p| fmt_point(p)).collect();
            writeln!(out, "closure: {}", pts.join(" "))?;
            writeln!(out, "closure bitmap: {}", report.closure_bitmap.bitmap)?;
            for eq in &report.system {
                writeln!(out, "  {eq}")?;
            }
            writeln!(out, "algebraic: {}", report.algebraic)?;
            if let Some(p) = &report.separating_point {
                writeln!(out, "separating point: {}", fmt_point(p))?;
            }
        }
    }
    Ok(())
}

fn cmd_term_functions(cli: &Cli, file: &Path, arity: usize, out: &mut Out) -> Result<(), Failure> {
    let s = load_one(file)?;
    let fs = TermFunctions::compute(&s, arity, cli.budget)?;
    let witnesses: Vec<String> = fs.iter().map(|f| f.witness.to_string()).collect();
    match cli.format {
        Format::Json => write_json(
            out,
            &json!({ "order": s.order(), "arity": arity, "count": fs.len(), "witnesses": witnesses }),
        )?,
        Format::Text => {
            writeln!(out, "{} term functions in {} variables over order {}", fs.len(), arity, s.order())?;
            for w in &witnesses {
                writeln!(out, "  {w}")?;
            }
        }
    }
    Ok(())
}
