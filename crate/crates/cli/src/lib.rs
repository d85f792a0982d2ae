//! Command-line front end for the Basis Type engine.
//!
//! [`run`] does all the work and returns what should be written to stdout and
//! stderr together with the exit code, so the binary is a thin shell around it
//! and tests can drive commands in-process.

pub mod dsl;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use ibn_core::calculus::infer;
use ibn_core::rank::{canonical_rank, class_count, derive_type, equiv_ranks, oracle_closure};
use ibn_core::star::{
    verify_isometry, verify_unitary, witness, MatrixFile, Properness, Residual, WitnessAlgebra,
    DEFAULT_STEP_BOUND,
};
use ibn_core::{
    normalize_exact, AlgebraExpr, BasisType, Catalog, EquivalenceWitnessSet, Knowledge, Rank,
    Status, Verification,
};
use serde_json::{json, Value};
use thiserror::Error;

pub use dsl::{parse, DslError};

/// Name of the environment variable overriding the rewriter step bound.
pub const STEP_BOUND_VAR: &str = "IBN_STEP_BOUND";

/// JSON Schema for every `--json` output line.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/output.schema.json");

/// Largest rank `witness` will build a matrix for.
pub const MAX_WITNESS_RANK: u64 = 256;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "ibn", version, about = "Basis Types of unital C*-algebras")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Extra catalog entries, as a JSON file `{"entries": [...]}`.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer what is known about the Basis Type of an expression.
    Type { expr: String },
    /// Decide whether A^n and A^m are isomorphic.
    Equiv { expr: String, n: u64, m: u64 },
    /// Smallest rank isomorphic to the given one.
    Canon { expr: String, n: u64 },
    /// Describe the isomorphism classes of free modules.
    Classes { expr: String },
    /// Build a unitary matrix witnessing A^n ≃ A^m and print it as a matrix file.
    Witness {
        atom: String,
        n: u64,
        m: u64,
        /// Also check the matrix by rewriting; the report goes to stderr.
        #[arg(long)]
        verify: bool,
    },
    /// Check that a matrix file holds a unitary (or, with --isometry, an isometry).
    Verify {
        path: String,
        /// Check only V*V = I and report whether VV* - I survives rewriting.
        #[arg(long)]
        isometry: bool,
    },
    /// Congruence closure of witness pairs on {0, ..., bound}.
    Oracle {
        /// Comma-separated pairs `a:b`.
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        bound: u64,
    },
    /// List catalog entries or show one.
    Catalog { id: Option<String> },
    /// Check every catalog entry against the consistency rules.
    ValidateCatalog,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Dsl(#[from] DslError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] ibn_core::Error),
    #[error("matrix of size {rank} exceeds the limit of {MAX_WITNESS_RANK}")]
    TooLarge { rank: u64 },
    #[error("catalog has {0} violation(s)")]
    Violations(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ibn_core::Error as E;
        match self {
            CliError::Dsl(_) | CliError::Usage(_) => exit::USAGE,
            CliError::TooLarge { .. } | CliError::Violations(_) => exit::DOMAIN,
            CliError::Core(e) => match e {
                E::NotEquivalent { .. }
                | E::NotFound(_)
                | E::ArithmeticOverflow { .. }
                | E::EmptyLimit
                | E::NoWitnessConstruction(_)
                | E::InvalidEntry { .. } => exit::DOMAIN,
                E::InvalidBasisType { .. }
                | E::InvalidWitnessPair { .. }
                | E::EmptyWitnessSet
                | E::WitnessOutOfBound { .. }
                | E::IndexOutOfRange { .. }
                | E::Shape(_)
                | E::UnknownGenerator(_)
                | E::PolySyntax { .. }
                | E::BadPresentation(_)
                | E::Json(_) => exit::USAGE,
            },
        }
    }

    pub fn code(&self) -> &'static str {
        use ibn_core::Error as E;
        match self {
            CliError::Dsl(DslError::Parse { .. }) => "ParseError",
            CliError::Dsl(DslError::Arity { .. }) => "ArityError",
            CliError::Usage(_) => "UsageError",
            CliError::TooLarge { .. } => "TooLarge",
            CliError::Violations(_) => "CatalogViolations",
            CliError::Core(e) => match e {
                E::InvalidBasisType { .. } => "InvalidBasisType",
                E::InvalidWitnessPair { .. } => "InvalidWitnessPair",
                E::EmptyWitnessSet => "EmptyWitnessSet",
                E::WitnessOutOfBound { .. } => "WitnessOutOfBound",
                E::ArithmeticOverflow { .. } => "ArithmeticOverflow",
                E::EmptyLimit => "EmptyLimit",
                E::NotFound(_) => "NotFound",
                E::NotEquivalent { .. } => "NotEquivalent",
                E::IndexOutOfRange { .. } => "IndexOutOfRange",
                E::Shape(_) => "ShapeMismatch",
                E::UnknownGenerator(_) => "UnknownGenerator",
                E::PolySyntax { .. } => "PolySyntax",
                E::BadPresentation(_) => "BadPresentation",
                E::NoWitnessConstruction(_) => "NoWitnessConstruction",
                E::InvalidEntry { .. } => "InvalidEntry",
                E::Json(_) => "MalformedJson",
            },
        }
    }

    /// The operation that produced the error, when there is one to point at.
    fn anchor(&self) -> Option<&'static str> {
        use ibn_core::Error as E;
        match self {
            CliError::Dsl(_) => Some("parse"),
            CliError::Core(E::NotEquivalent { .. }) => Some("equiv_ranks"),
            CliError::Core(E::NotFound(_)) => Some("catalog.lookup"),
            CliError::Core(E::ArithmeticOverflow { .. }) => Some("lattice.join"),
            CliError::Core(E::InvalidEntry { .. }) | CliError::Violations(_) => {
                Some("catalog.validate")
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({ "code": self.code(), "message": self.to_string() });
        if let Some(anchor) = self.anchor() {
            obj["anchor"] = anchor.into();
        }
        if let CliError::Dsl(e) = self {
            obj["offset"] = e.offset().into();
            if let DslError::Parse { expected, .. } = e {
                obj["expected"] = json!(expected);
            }
        }
        json!({ "error": obj })
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A successful command result in both renderings.
struct Report {
    json: Value,
    text: String,
    code: i32,
    /// Extra report for stderr (witness --verify).
    side: Option<(Value, String)>,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            code: exit::SUCCESS,
            side: None,
        }
    }
}

struct Context {
    catalog: Catalog,
    step_bound: usize,
}

/// Runs one command line. `step_bound_env` is the value of [`STEP_BOUND_VAR`].
pub fn run<I, T>(args: I, step_bound_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == exit::SUCCESS {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let json = cli.json;
    match context(&cli, step_bound_env).and_then(|ctx| execute(&cli.command, &ctx)) {
        Ok(report) => {
            let stdout = if json {
                line(&report.json)
            } else {
                with_newline(report.text)
            };
            let stderr = match report.side {
                Some((v, _)) if json => line(&v),
                Some((_, t)) => with_newline(t),
                None => String::new(),
            };
            Outcome {
                code: report.code,
                stdout,
                stderr,
            }
        }
        Err(e) => {
            let code = e.exit_code();
            if json {
                Outcome {
                    code,
                    stdout: line(&e.to_json()),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error[{}]: {e}\n", e.code()),
                }
            }
        }
    }
}

fn line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn context(cli: &Cli, step_bound_env: Option<&str>) -> Result<Context, CliError> {
    let step_bound = match step_bound_env {
        None => DEFAULT_STEP_BOUND,
        Some(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{STEP_BOUND_VAR} must be a positive integer, got `{s}`"
                ))
            })?,
    };
    let catalog = match &cli.catalog {
        None => Catalog::builtin(),
        Some(path) => {
            let text = read(path)?;
            Catalog::with_user_json(&text)?
        }
    };
    Ok(Context {
        catalog,
        step_bound,
    })
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read `{path}`: {e}")))
}

fn execute(cmd: &Command, ctx: &Context) -> Result<Report, CliError> {
    match cmd {
        Command::Type { expr } => type_cmd(expr, ctx),
        Command::Equiv { expr, n, m } => equiv_cmd(expr, *n, *m, ctx),
        Command::Canon { expr, n } => canon_cmd(expr, *n, ctx),
        Command::Classes { expr } => classes_cmd(expr, ctx),
        Command::Witness { atom, n, m, verify } => witness_cmd(atom, *n, *m, *verify, ctx),
        Command::Verify { path, isometry } => verify_cmd(path, *isometry, ctx),
        Command::Oracle { pairs, bound } => oracle_cmd(pairs, *bound),
        Command::Catalog { id } => catalog_cmd(id.as_deref(), ctx),
        Command::ValidateCatalog => validate_cmd(ctx),
    }
}

fn knowledge_of(expr: &str, ctx: &Context) -> Result<(AlgebraExpr, Knowledge), CliError> {
    let ast = parse(expr)?;
    let k = infer(&ast, &ctx.catalog)?;
    Ok((ast, k))
}

fn type_json(t: BasisType) -> Value {
    json!({ "N": t.n_min(), "K": t.k_period() })
}

fn knowledge_json(k: &Knowledge) -> Value {
    match (k.status, normalize_exact(k)) {
        (Status::KnownIbn, _) => json!({ "status": k.status }),
        (_, Some(t)) => json!({ "status": k.status, "exact": type_json(t) }),
        _ => json!({ "status": k.status, "lo": k.lo, "hi_n": k.hi_n, "hi_k": k.hi_k }),
    }
}

/// Why a non-exact knowledge value does not pin down the equivalence relation.
fn blocking_bound(k: &Knowledge) -> String {
    if k.status == Status::Unknown {
        return "IBN status is unknown".into();
    }
    let mut parts = Vec::new();
    match k.hi_n {
        ibn_core::UpperN::Infinity => {
            parts.push(format!("N >= {} has no upper bound", k.lo.n_min()))
        }
        ibn_core::UpperN::Finite(h) if h != k.lo.n_min() => {
            parts.push(format!("N is only known to lie in [{}, {h}]", k.lo.n_min()))
        }
        _ => {}
    }
    match k.hi_k {
        ibn_core::UpperK::AnyK => parts.push(format!(
            "K is a multiple of {} with no upper bound",
            k.lo.k_period()
        )),
        ibn_core::UpperK::Finite(h) if h != k.lo.k_period() => parts.push(format!(
            "K is only known to be a multiple of {} dividing {h}",
            k.lo.k_period()
        )),
        _ => {}
    }
    parts.join("; ")
}

fn undecided(k: &Knowledge) -> (Value, String) {
    let reason = blocking_bound(k);
    (
        json!({ "reason": reason, "knowledge": knowledge_json(k) }),
        format!("undecided: {reason}"),
    )
}

fn type_cmd(expr: &str, ctx: &Context) -> Result<Report, CliError> {
    let (_, k) = knowledge_of(expr, ctx)?;
    let text = match normalize_exact(&k) {
        Some(t) if k.status == Status::KnownNonIbn => {
            format!("NonIBN, exact type ({}, {})", t.n_min(), t.k_period())
        }
        _ => k.to_string(),
    };
    Ok(Report::ok(knowledge_json(&k), text))
}

fn equiv_cmd(expr: &str, n: u64, m: u64, ctx: &Context) -> Result<Report, CliError> {
    let (_, k) = knowledge_of(expr, ctx)?;
    let verdict = match (k.status, normalize_exact(&k)) {
        (Status::KnownIbn, _) => Some(n == m),
        (_, Some(t)) => Some(equiv_ranks(t, Rank(n), Rank(m))),
        _ if n == m => Some(true),
        _ => None,
    };
    Ok(match verdict {
        Some(v) => Report::ok(
            json!({ "equivalent": v }),
            if v { "equivalent" } else { "not equivalent" },
        ),
        None => {
            let (j, t) = undecided(&k);
            Report::ok(json!({ "equivalent": null, "undecided": j }), t)
        }
    })
}

fn canon_cmd(expr: &str, n: u64, ctx: &Context) -> Result<Report, CliError> {
    let (_, k) = knowledge_of(expr, ctx)?;
    let canon = match (k.status, normalize_exact(&k)) {
        (Status::KnownIbn, _) => Some(n),
        (_, Some(t)) => Some(canonical_rank(t, Rank(n)).get()),
        _ => None,
    };
    Ok(match canon {
        Some(c) => Report::ok(json!({ "canonical": c }), c.to_string()),
        None => {
            let (j, t) = undecided(&k);
            Report::ok(json!({ "canonical": null, "undecided": j }), t)
        }
    })
}

fn classes_cmd(expr: &str, ctx: &Context) -> Result<Report, CliError> {
    let (_, k) = knowledge_of(expr, ctx)?;
    if k.status == Status::KnownIbn {
        return Ok(Report::ok(
            json!({ "count": null, "status": k.status }),
            "infinitely many classes: every rank is alone in its class",
        ));
    }
    let Some(t) = normalize_exact(&k) else {
        let (j, t) = undecided(&k);
        return Ok(Report::ok(json!({ "count": null, "undecided": j }), t));
    };
    let count = class_count(t)?;
    let (n, kp) = (t.n_min(), t.k_period());
    let mut text = format!("{count} classes for type ({n}, {kp})\n");
    for r in 0..n {
        let _ = writeln!(text, "{{{r}}}");
    }
    for r in n..n + kp {
        let _ = writeln!(text, "{{{r}, {}, {}, ...}}", r + kp, r + 2 * kp);
    }
    Ok(Report::ok(
        json!({
            "count": count,
            "type": type_json(t),
            "singletons": (0..n).collect::<Vec<_>>(),
            "periodic": (n..n + kp)
                .map(|r| json!({ "least": r, "period": kp }))
                .collect::<Vec<_>>(),
        }),
        text,
    ))
}

fn verification_json(v: &Verification) -> Value {
    match v {
        Verification::Verified => json!({ "result": "Verified" }),
        Verification::Inconclusive(res) => json!({
            "result": "Inconclusive",
            "residuals": res.iter().map(residual_json).collect::<Vec<_>>(),
        }),
    }
}

fn residual_json(r: &Residual) -> Value {
    json!({
        "check": r.check,
        "row": r.row,
        "col": r.col,
        "remainder": r.remainder.as_ref().map(ToString::to_string),
    })
}

fn verification_text(v: &Verification) -> String {
    match v {
        Verification::Verified => "Verified".into(),
        Verification::Inconclusive(res) => {
            let mut s = format!(
                "Inconclusive: {} entries did not rewrite to zero",
                res.len()
            );
            for r in res {
                let rem = r
                    .remainder
                    .as_ref()
                    .map_or("<step bound exhausted>".to_string(), ToString::to_string);
                let check = serde_json::to_value(r.check).expect("check serializes");
                let _ = write!(
                    s,
                    "\n  {} ({}, {}): {rem}",
                    check.as_str().unwrap_or(""),
                    r.row,
                    r.col
                );
            }
            s
        }
    }
}

fn witness_cmd(
    atom: &str,
    n: u64,
    m: u64,
    verify: bool,
    ctx: &Context,
) -> Result<Report, CliError> {
    let ast = parse(atom)?;
    let alg = match &ast {
        AlgebraExpr::Leaf(id) => WitnessAlgebra::from_catalog_id(id)?,
        other => {
            return Err(ibn_core::Error::NoWitnessConstruction(other.to_string()).into());
        }
    };
    if let Some(&rank) = [n, m].iter().find(|&&r| r > MAX_WITNESS_RANK) {
        if equiv_ranks(alg.basis_type(), Rank(n), Rank(m)) {
            return Err(CliError::TooLarge { rank });
        }
    }
    let matrix = witness(alg, Rank(n), Rank(m))?;
    let pres = alg.presentation();
    let file = serde_json::to_value(MatrixFile::from_matrix(&matrix, &pres)).expect("serializes");
    let mut report = Report::ok(file.clone(), file.to_string());
    if verify {
        let v = verify_unitary(&matrix, &pres, ctx.step_bound);
        if !v.is_verified() {
            report.code = exit::INCONCLUSIVE;
        }
        report.side = Some((verification_json(&v), verification_text(&v)));
    }
    Ok(report)
}

fn verify_cmd(path: &str, isometry: bool, ctx: &Context) -> Result<Report, CliError> {
    let file = MatrixFile::from_json(&read(path)?)?;
    let (matrix, pres) = file.load()?;
    let (v, properness) = if isometry {
        let r = verify_isometry(&matrix, &pres, ctx.step_bound);
        (r.isometry, Some(r.properness))
    } else {
        (verify_unitary(&matrix, &pres, ctx.step_bound), None)
    };
    let mut j = verification_json(&v);
    let mut text = verification_text(&v);
    if let Some(p) = properness {
        j["properness"] = serde_json::to_value(p).expect("serializes");
        text.push_str(match p {
            Properness::SyntacticallyProper => "\nproperness: SyntacticallyProper",
            Properness::Unknown => "\nproperness: Unknown",
        });
    }
    let mut report = Report::ok(j, text);
    if !v.is_verified() {
        report.code = exit::INCONCLUSIVE;
    }
    Ok(report)
}

fn parse_pairs(s: &str) -> Result<Vec<(u64, u64)>, CliError> {
    s.split(',')
        .map(|p| {
            let bad = || CliError::Usage(format!("malformed pair `{p}`: expected a:b"));
            let (a, b) = p.trim().split_once(':').ok_or_else(bad)?;
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            Ok((a, b))
        })
        .collect()
}

fn oracle_cmd(pairs: &str, bound: u64) -> Result<Report, CliError> {
    let ws = EquivalenceWitnessSet::from_pairs(parse_pairs(pairs)?)?;
    let partition = oracle_closure(&ws, bound)?;
    let derived = derive_type(&ws)?;
    let mut text = format!(
        "{} classes on 0..={bound}; derived type ({}, {})",
        partition.class_count(),
        derived.n_min(),
        derived.k_period()
    );
    for class in partition.classes() {
        let members: Vec<String> = class.iter().map(u64::to_string).collect();
        let _ = write!(text, "\n{{{}}}", members.join(", "));
    }
    Ok(Report::ok(
        json!({
            "bound": bound,
            "count": partition.class_count(),
            "classes": partition.classes(),
            "derived_type": type_json(derived),
        }),
        text,
    ))
}

fn catalog_cmd(id: Option<&str>, ctx: &Context) -> Result<Report, CliError> {
    match id {
        Some(id) => {
            let e = ctx.catalog.lookup(id)?;
            let j = serde_json::to_value(&e).expect("entry serializes");
            let text = format!(
                "{} ({})\n  type: {}\n  unit order in K0: {}\n  IBN: {}, IBN1: {}, IBN2/stably finite: {}\n  presentation: {}\n  provenance: {}",
                e.display_name,
                e.id,
                e.knowledge,
                e.k0_unit_order,
                if e.ibn { "yes" } else { "no" },
                e.ibn1,
                e.ibn2_stably_finite,
                e.presentation_id.as_deref().unwrap_or("none"),
                e.provenance_note,
            );
            Ok(Report::ok(j, text))
        }
        None => {
            let entries = ctx.catalog.list();
            let width = entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
            let text = entries
                .iter()
                .map(|e| format!("{:width$}  {}  [{}]", e.id, e.display_name, e.knowledge))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::ok(json!({ "entries": entries }), text))
        }
    }
}

fn validate_cmd(ctx: &Context) -> Result<Report, CliError> {
    let violations = ctx.catalog.validate();
    let n = ctx.catalog.list().len();
    let text = if violations.is_empty() {
        format!("catalog OK: {n} entries, no violations")
    } else {
        violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut report = Report::ok(json!({ "entries": n, "violations": violations }), text);
    if !violations.is_empty() {
        report.code = CliError::Violations(violations.len()).exit_code();
    }
    Ok(report)
}
