//! Command-line front end: reads a model document, runs one engine
//! operation on it and reports the outcome as text or JSON.
//!
//! Exit codes: 0 when the property holds or the computation succeeded,
//! 1 when the property fails, 2 on usage, parse or size-limit errors.

mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gradedjets::brst::{check_nilpotent, extract_bracket, solve_structure_functions, AnsatzBounds, StructureSolution};
use gradedjets::dsl::{
    parse_with_limit, print, yang_mills_document_with_coefficient, Binding, Code, Definition, DefinitionKind,
    ModelDocument,
};
use gradedjets::expr::{format_jet_var, Expr, MultiIndex, Rational};
use gradedjets::jetcalc::{dtot_multi, euler_lagrange, HorizontalDensity};
use gradedjets::models::{ConnectionModel, LieAlgebraData};
use gradedjets::symmetry::{is_gauge_symmetry, is_variational_symmetry, reduce_on_shell, OnShellVerdict, SymmetryVerdict};
use serde_json::{json, Value};

pub use report::Status;
use report::{entries_json, Issue, Printer, Report};

/// Environment variable capping the number of terms in any expression.
pub const MAX_TERMS_VAR: &str = "GRADEDJETS_MAX_TERMS";
pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "gradedjets", version, about = "Exact jet calculus for Lagrangian gauge systems")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Jet order of the ansatz variables (solve-brst: 0, reduce-onshell: 2).
    #[arg(long, global = true)]
    jet_bound: Option<usize>,
    /// Polynomial degree of the ansatz coefficients (solve-brst: 0, reduce-onshell: 1).
    #[arg(long, global = true)]
    degree_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Euler-Lagrange expressions of a Lagrangian.
    El {
        file: Option<PathBuf>,
        #[arg(long)]
        lagrangian: Option<String>,
    },
    /// Total derivative of an `expr` or `lagrangian` binding.
    Dtot {
        file: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        /// Base direction (one-based); repeat for higher derivatives.
        #[arg(long = "dir", required = true)]
        dirs: Vec<usize>,
    },
    /// Whether a generator is a variational symmetry of a Lagrangian.
    CheckSymmetry {
        file: Option<PathBuf>,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        lagrangian: Option<String>,
    },
    /// Whether a gauge generator is a gauge symmetry of a Lagrangian.
    CheckGaugeSymmetry {
        file: Option<PathBuf>,
        #[arg(long)]
        gauge: Option<String>,
        #[arg(long)]
        lagrangian: Option<String>,
    },
    /// Whether a BRST candidate squares to zero.
    CheckNilpotent {
        file: Option<PathBuf>,
        #[arg(long)]
        brst: Option<String>,
    },
    /// Solves for quadratic ghost structure functions of a gauge generator.
    SolveBrst {
        file: Option<PathBuf>,
        #[arg(long)]
        gauge: Option<String>,
    },
    /// Commutator of a gauge generator with itself.
    Bracket {
        file: Option<PathBuf>,
        #[arg(long)]
        gauge: Option<String>,
    },
    /// Bounded search for an on-shell vanishing witness.
    ReduceOnshell {
        file: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        lagrangian: Option<String>,
    },
    /// Prints a builtin model document.
    Builtin {
        #[command(subcommand)]
        model: BuiltinModel,
    },
}

#[derive(Subcommand, Debug)]
enum BuiltinModel {
    /// Yang-Mills connection with optional diffeomorphism ghosts.
    Ym {
        #[arg(long, value_enum)]
        algebra: AlgebraChoice,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        diffeo: bool,
        /// Rank of the abelian algebra.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Coefficient of `c^r_{pq} c^p c^q` in `s c^r`.
        #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
        ghost_coefficient: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgebraChoice {
    Abelian,
    Su2,
    Su2u1,
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with the term cap taken from the environment.
pub fn run(args: &[String], stdin: &mut dyn Read) -> Outcome {
    let cap = match std::env::var(MAX_TERMS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                let json = args.iter().any(|a| a == "--json");
                let msg = format!("{MAX_TERMS_VAR} must be a non-negative integer, got `{v}`");
                return emit(&Report::error(&command_name(args), vec![Issue::usage(Code::Usage, msg)]), json, None);
            }
        },
        Err(_) => DEFAULT_MAX_TERMS,
    };
    run_with_limit(args, stdin, cap)
}

/// `args` excludes the program name.
pub fn run_with_limit(args: &[String], stdin: &mut dyn Read, max_terms: usize) -> Outcome {
    let argv = std::iter::once("gradedjets".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let json = args.iter().any(|a| a == "--json");
            if !json {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: e.to_string(),
                };
            }
            let msg = e.kind().as_str().unwrap_or("invalid arguments").to_string();
            return emit(&Report::error(&command_name(args), vec![Issue::usage(Code::Usage, msg)]), true, None);
        }
    };
    let ctx = Context {
        max_terms,
        jet_bound: cli.jet_bound,
        degree_bound: cli.degree_bound,
    };
    let name = subcommand_name(&cli.command);
    if let Command::Builtin { model } = &cli.command {
        return emit(&builtin(model), cli.json, None);
    }
    let file = match &cli.command {
        Command::El { file, .. }
        | Command::Dtot { file, .. }
        | Command::CheckSymmetry { file, .. }
        | Command::CheckGaugeSymmetry { file, .. }
        | Command::CheckNilpotent { file, .. }
        | Command::SolveBrst { file, .. }
        | Command::Bracket { file, .. }
        | Command::ReduceOnshell { file, .. } => file.clone(),
        Command::Builtin { .. } => unreachable!("handled above"),
    };
    let source = match read_input(file.as_ref(), stdin) {
        Ok(s) => s,
        Err(msg) => return emit(&Report::error(name, vec![Issue::usage(Code::Usage, msg)]), cli.json, None),
    };
    let report = match parse_with_limit(&source, max_terms) {
        Ok(doc) => ctx.dispatch(&cli.command, &doc).unwrap_or_else(|issue| Report::error(name, vec![issue])),
        Err(diags) => Report::error(name, diags.into_iter().map(Issue::from).collect()),
    };
    emit(&report, cli.json, Some(&source))
}

fn read_input(file: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, String> {
    match file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("cannot read `{}`: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn emit(report: &Report, json: bool, source: Option<&str>) -> Outcome {
    let (stdout, stderr) = if json {
        (report.json(), String::new())
    } else {
        report.text(source)
    };
    Outcome {
        code: report.status.exit_code(),
        stdout,
        stderr,
    }
}

const SUBCOMMANDS: &[&str] = &[
    "el",
    "dtot",
    "check-symmetry",
    "check-gauge-symmetry",
    "check-nilpotent",
    "solve-brst",
    "bracket",
    "reduce-onshell",
    "builtin",
];

/// Best-effort subcommand name for reports on unparsable arguments.
fn command_name(args: &[String]) -> String {
    args.iter()
        .find(|a| SUBCOMMANDS.contains(&a.as_str()))
        .cloned()
        .unwrap_or_default()
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::El { .. } => "el",
        Command::Dtot { .. } => "dtot",
        Command::CheckSymmetry { .. } => "check-symmetry",
        Command::CheckGaugeSymmetry { .. } => "check-gauge-symmetry",
        Command::CheckNilpotent { .. } => "check-nilpotent",
        Command::SolveBrst { .. } => "solve-brst",
        Command::Bracket { .. } => "bracket",
        Command::ReduceOnshell { .. } => "reduce-onshell",
        Command::Builtin { .. } => "builtin",
    }
}

fn builtin(model: &BuiltinModel) -> Report {
    let BuiltinModel::Ym {
        algebra,
        dim,
        diffeo,
        rank,
        ghost_coefficient,
    } = model;
    let fail = |msg: String| Report::error("builtin", vec![Issue::usage(Code::Usage, msg)]);
    let Some(k) = parse_rational(ghost_coefficient) else {
        return fail(format!("invalid rational `{ghost_coefficient}`"));
    };
    if *dim == 0 {
        return fail("--dim must be positive".into());
    }
    let alg = match algebra {
        AlgebraChoice::Abelian if *rank == 0 => return fail("--rank must be positive".into()),
        AlgebraChoice::Abelian => LieAlgebraData::abelian(*rank),
        AlgebraChoice::Su2 => LieAlgebraData::su2(),
        AlgebraChoice::Su2u1 => LieAlgebraData::su2().direct_sum(&LieAlgebraData::abelian(1)),
    };
    let doc = match yang_mills_document_with_coefficient(&ConnectionModel::new(*dim, alg, *diffeo), &k) {
        Ok(d) => d,
        Err(e) => return Report::error("builtin", vec![Issue::usage(Code::Algebra, e.to_string())]),
    };
    let text = print(&doc);
    let mut r = Report::new("builtin", Status::Ok);
    r.insert("document", json!(text));
    r.raw_text = Some(text);
    r
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, num::BigInt::from(1)),
    };
    if num::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}

struct Context {
    max_terms: usize,
    jet_bound: Option<usize>,
    degree_bound: Option<usize>,
}

fn select<'d>(doc: &'d ModelDocument, kind: DefinitionKind, name: Option<&str>) -> Result<&'d Binding, Issue> {
    doc.select(kind, name).map_err(|m| Issue::usage(Code::Usage, m))
}

fn lagrangian<'d>(doc: &'d ModelDocument, name: Option<&str>) -> Result<(&'d str, &'d HorizontalDensity), Issue> {
    let b = select(doc, DefinitionKind::Lagrangian, name)?;
    match &b.definition {
        Definition::Lagrangian(l) => Ok((&b.name, l)),
        _ => unreachable!("selected by kind"),
    }
}

/// An `expr` or `lagrangian` binding as a plain expression.
fn expression<'d>(doc: &'d ModelDocument, name: Option<&str>) -> Result<(&'d str, &'d Expr), Issue> {
    let candidates: Vec<&Binding> = doc
        .bindings
        .iter()
        .filter(|b| matches!(b.definition, Definition::Expr(_) | Definition::Lagrangian(_)))
        .filter(|b| name.is_none_or(|n| b.name == n))
        .collect();
    let b = match (candidates.as_slice(), name) {
        ([b], _) => *b,
        ([], Some(n)) => return Err(Issue::usage(Code::Usage, format!("no expr or lagrangian named `{n}`"))),
        ([], None) => return Err(Issue::usage(Code::Usage, "the document defines no expr or lagrangian")),
        (_, _) => return Err(Issue::usage(Code::Usage, "several expressions; choose one by name")),
    };
    match &b.definition {
        Definition::Expr(e) => Ok((&b.name, e)),
        Definition::Lagrangian(l) => Ok((&b.name, l.value())),
        _ => unreachable!("filtered"),
    }
}

fn engine_error(e: impl std::fmt::Display) -> Issue {
    Issue::usage(Code::Type, e.to_string())
}

fn status_of(holds: bool) -> Status {
    if holds {
        Status::Ok
    } else {
        Status::Fail
    }
}

impl Context {
    fn dispatch(&self, command: &Command, doc: &ModelDocument) -> Result<Report, Issue> {
        let sys = &doc.system;
        let mut pr = Printer::new(sys, self.max_terms);
        let report = match command {
            Command::El { lagrangian: name, .. } => {
                let (lname, l) = lagrangian(doc, name.as_deref())?;
                let e = euler_lagrange(sys, l);
                let shown: Vec<_> = e
                    .components
                    .iter()
                    .filter(|(c, v)| sys.role(c.field) == gradedjets::expr::FieldRole::Dynamic || !v.is_zero())
                    .collect();
                let entries = pr.entries(shown);
                let mut r = Report::new("el", Status::Ok);
                r.insert("lagrangian", json!(lname));
                r.insert("euler", entries_json(&entries));
                r.lines = entries.iter().map(|(c, e)| format!("E[{c}] = {e}")).collect();
                r
            }
            Command::Dtot { name, dirs, .. } => {
                let (ename, e) = expression(doc, name.as_deref())?;
                let n = sys.base_dim();
                if let Some(&bad) = dirs.iter().find(|&&d| d == 0 || d > n) {
                    return Err(Issue::usage(
                        Code::DirectionOutOfRange,
                        format!("direction {bad} is outside 1..={n}"),
                    ));
                }
                let zero_based: Vec<usize> = dirs.iter().map(|d| d - 1).collect();
                let mi = MultiIndex::from_entries(n, &zero_based).expect("checked directions");
                let d = pr.expr(&dtot_multi(e, &mi));
                let mut r = Report::new("dtot", Status::Ok);
                r.insert("name", json!(ename));
                r.insert("directions", json!(mi.entries().iter().map(|d| d + 1).collect::<Vec<_>>()));
                r.insert("expr", json!(d));
                r.lines.push(d);
                r
            }
            Command::CheckSymmetry {
                generator, lagrangian: lname, ..
            } => {
                let b = select(doc, DefinitionKind::Generator, generator.as_deref())?;
                let Definition::Generator(v) = &b.definition else { unreachable!("selected by kind") };
                let (ln, l) = lagrangian(doc, lname.as_deref())?;
                let verdict = is_variational_symmetry(sys, v, l);
                let mut r = verdict_report("check-symmetry", &verdict, &mut pr);
                r.insert("generator", json!(b.name));
                r.insert("lagrangian", json!(ln));
                r
            }
            Command::CheckGaugeSymmetry {
                gauge, lagrangian: lname, ..
            } => {
                let b = select(doc, DefinitionKind::Gauge, gauge.as_deref())?;
                let Definition::Gauge(g) = &b.definition else { unreachable!("selected by kind") };
                let (ln, l) = lagrangian(doc, lname.as_deref())?;
                let verdict = is_gauge_symmetry(sys, g, l).map_err(engine_error)?;
                let mut r = verdict_report("check-gauge-symmetry", &verdict, &mut pr);
                r.insert("gauge", json!(b.name));
                r.insert("lagrangian", json!(ln));
                r
            }
            Command::CheckNilpotent { brst, .. } => {
                let b = select(doc, DefinitionKind::Brst, brst.as_deref())?;
                let Definition::Brst(s) = &b.definition else { unreachable!("selected by kind") };
                let report = check_nilpotent(s);
                let mut r = Report::new("check-nilpotent", status_of(report.nilpotent));
                r.insert("brst", json!(b.name));
                r.insert("nilpotent", json!(report.nilpotent));
                r.lines.push(format!("nilpotent: {}", yes_no(report.nilpotent)));
                r.residuals = pr.entries(report.nonzero());
                r
            }
            Command::SolveBrst { gauge, .. } => {
                let b = select(doc, DefinitionKind::Gauge, gauge.as_deref())?;
                let Definition::Gauge(g) = &b.definition else { unreachable!("selected by kind") };
                let bounds = AnsatzBounds {
                    jet_bound: self.jet_bound.unwrap_or(0),
                    degree_bound: self.degree_bound.unwrap_or(0),
                };
                let solution = solve_structure_functions(sys, g, bounds).map_err(engine_error)?;
                let mut r = match solution {
                    StructureSolution::Infeasible => {
                        let mut r = Report::new("solve-brst", Status::Fail);
                        r.insert("solvable", json!(false));
                        r.lines.push("solvable: no".into());
                        r
                    }
                    StructureSolution::Solved(f) => {
                        let holds = f.jacobi_holds();
                        let mut r = Report::new("solve-brst", status_of(holds));
                        let action = f.expand();
                        let action_entries = pr.entries(&action);
                        let coefficients: Vec<Value> = f
                            .u2
                            .iter()
                            .map(|(k, v)| {
                                json!({
                                    "target": pr.component(k.target),
                                    "first": format_jet_var(sys, &k.first),
                                    "second": format_jet_var(sys, &k.second),
                                    "coefficient": pr.expr(v),
                                })
                            })
                            .collect();
                        r.insert("solvable", json!(true));
                        r.insert("jacobi_holds", json!(holds));
                        r.insert("ghost_action", entries_json(&action_entries));
                        r.insert("structure_functions", Value::Array(coefficients));
                        r.lines.push("solvable: yes".into());
                        r.lines.push(format!("jacobi: {}", yes_no(holds)));
                        r.lines.extend(action_entries.iter().map(|(c, e)| format!("s {c} = {e}")));
                        r.solution_space_dim = Some(f.solution_space_dim);
                        r.residuals = pr.entries(f.jacobi_residuals.iter().filter(|(_, e)| !e.is_zero()));
                        r
                    }
                };
                r.insert("gauge", json!(b.name));
                r.insert("jet_bound", json!(bounds.jet_bound));
                r.insert("degree_bound", json!(bounds.degree_bound));
                r
            }
            Command::Bracket { gauge, .. } => {
                let b = select(doc, DefinitionKind::Gauge, gauge.as_deref())?;
                let Definition::Gauge(g) = &b.definition else { unreachable!("selected by kind") };
                let bracket = extract_bracket(sys, g).map_err(engine_error)?;
                let mut bp = Printer::new(&bracket.system, self.max_terms);
                let total = bp.entries(&bracket.components);
                let mut pairs = Vec::new();
                let mut r = Report::new("bracket", Status::Ok);
                for ((a, c), comps) in &bracket.by_pair {
                    let (first, second) = (format_jet_var(&bracket.system, a), format_jet_var(&bracket.system, c));
                    let entries = bp.entries(comps);
                    for (comp, e) in &entries {
                        r.lines.push(format!("[{first}, {second}] {comp} => {e}"));
                    }
                    pairs.push(json!({"first": first, "second": second, "components": entries_json(&entries)}));
                }
                r.insert("gauge", json!(b.name));
                r.insert("components", entries_json(&total));
                r.insert("pairs", Value::Array(pairs));
                if let Some(n) = bp.overflow {
                    pr.overflow = Some(n);
                }
                r
            }
            Command::ReduceOnshell {
                expr, lagrangian: lname, ..
            } => {
                let (ename, f) = expression(doc, expr.as_deref())?;
                let (ln, l) = lagrangian(doc, lname.as_deref())?;
                let (jet_bound, degree_bound) = (self.jet_bound.unwrap_or(2), self.degree_bound.unwrap_or(1));
                let verdict = reduce_on_shell(sys, f, l, jet_bound, degree_bound);
                let mut r = Report::new("reduce-onshell", status_of(verdict.is_zero_on_shell()));
                r.insert("expr", json!(ename));
                r.insert("lagrangian", json!(ln));
                r.insert("jet_bound", json!(jet_bound));
                r.insert("degree_bound", json!(degree_bound));
                r.insert("zero_on_shell", json!(verdict.is_zero_on_shell()));
                match verdict {
                    OnShellVerdict::ZeroOnShell { witness } => {
                        r.lines.push("zero on shell: yes".into());
                        let mut items = Vec::new();
                        for ((c, mi), m) in &witness {
                            let comp = pr.component(*c);
                            let dirs: Vec<usize> = mi.entries().iter().map(|d| d + 1).collect();
                            let m = pr.expr(m);
                            let target = if dirs.is_empty() {
                                format!("E[{comp}]")
                            } else {
                                let d: Vec<String> = dirs.iter().map(ToString::to_string).collect();
                                format!("d({}; E[{comp}])", d.join(" "))
                            };
                            r.lines.push(format!("{target} * ({m})"));
                            items.push(json!({"component": comp, "directions": dirs, "multiplier": m}));
                        }
                        r.insert("witness", Value::Array(items));
                    }
                    OnShellVerdict::NotFoundWithinBounds => {
                        r.lines.push("zero on shell: not found within bounds".into());
                        r.insert("witness", Value::Null);
                    }
                }
                r
            }
            Command::Builtin { .. } => unreachable!("handled before parsing"),
        };
        Ok(pr.finish(report))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_report(command: &str, v: &SymmetryVerdict, pr: &mut Printer<'_>) -> Report {
    let mut r = Report::new(command, status_of(v.holds));
    let action = pr.expr(&v.action);
    r.lines.push(format!("holds: {}", yes_no(v.holds)));
    r.lines.push(format!("action = {action}"));
    let current = v.current.as_ref().map(|c| c.components.iter().map(|e| pr.expr(e)).collect::<Vec<_>>());
    if let Some(cur) = &current {
        for (l, e) in cur.iter().enumerate() {
            r.lines.push(format!("current[{}] = {e}", l + 1));
        }
    }
    r.insert("holds", json!(v.holds));
    r.insert("action", json!(action));
    r.insert("current", json!(current));
    r.residuals = pr.entries(&v.euler_residuals);
    r
}
